#include "nlft/transport.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "nlft/sweep.hpp"

namespace nlft {

std::pair<BeltramiCoefficient, BeltramiCoefficient> nu_coefficients(const PivotData& pivot) {
    BeltramiCoefficient pos{pivot.nu, 0.0};
    for (const auto& v : pivot.nu.v) pos.kappa = std::max(pos.kappa, std::abs(v));
    if (pos.kappa >= 1.0)
        throw std::invalid_argument("nu_coefficients: |nu| must stay below 1");
    BeltramiCoefficient neg = pos;
    for (auto& v : neg.mu.v) v = -v;
    return {std::move(pos), std::move(neg)};
}

FreqCgo solve_freq_cgo(const BeltramiCoefficient& nu_pos, const BeltramiCoefficient& nu_neg,
                       const CauchyTransform& cauchy_k, cplx z0, cplx z,
                       const CgoOptions& opt) {
    FreqCgo out;
    out.z = z;
    out.zeta = z - z0;
    CgoSolution sp = solve_cgo(nu_pos, out.zeta, cauchy_k, opt);
    CgoSolution sm = solve_cgo(nu_neg, out.zeta, cauchy_k, opt);
    out.w_plus = std::move(sp.omega);
    out.w_minus = std::move(sm.omega);
    out.rep_plus = std::move(sp.report);
    out.rep_minus = std::move(sm.report);
    return out;
}

std::optional<std::pair<double, double>> normalize_alpha(cplx eta1_at_0, cplx eta2_at_0) {
    const double det =
        eta1_at_0.real() * eta2_at_0.imag() - eta2_at_0.real() * eta1_at_0.imag();
    const double scale = std::abs(eta1_at_0) * std::abs(eta2_at_0);
    if (std::abs(det) <= 1e-12 * scale || det == 0.0) return std::nullopt;
    return std::make_pair(eta2_at_0.imag() / det, -eta1_at_0.imag() / det);
}

namespace {

// alpha(k0) for one ordering of the pair: eta1 = E(1 + wa), eta2 = i E(1 + wb).
std::optional<cplx> alpha_at(const ComplexField& wa, const ComplexField& wb,
                             cplx zeta, cplx k0) {
    const int c = wa.grid.zero_index();
    const cplx eta1_0 = 1.0 + wa.at(c, c);
    const cplx eta2_0 = cplx(0.0, 1.0) * (1.0 + wb.at(c, c));
    const auto ab = normalize_alpha(eta1_0, eta2_0);
    if (!ab) return std::nullopt;
    const cplx E0 = std::exp(cplx(0.0, 1.0) * k0 * zeta);
    const cplx eta1_k = E0 * (1.0 + bilinear(wa, k0));
    const cplx eta2_k = cplx(0.0, 1.0) * E0 * (1.0 + bilinear(wb, k0));
    return ab->first * eta1_k + ab->second * eta2_k;
}

}  // namespace

std::optional<TransportMatrix> transport_matrix(const FreqCgo& sol, cplx k0) {
    const auto alpha = alpha_at(sol.w_plus, sol.w_minus, sol.zeta, k0);
    const auto alpha_swapped = alpha_at(sol.w_minus, sol.w_plus, sol.zeta, k0);
    if (!alpha || !alpha_swapped) return std::nullopt;
    const cplx beta = cplx(0.0, 1.0) * (*alpha_swapped);
    TransportMatrix T;
    T.t[0][0] = alpha->real();
    T.t[0][1] = alpha->imag();
    T.t[1][0] = beta.real();
    T.t[1][1] = beta.imag();
    return T;
}

std::pair<cplx, cplx> u_from_h(cplx hplus, cplx hminus) {
    return {hplus - cplx(0.0, 1.0) * hminus, cplx(0.0, 1.0) * hplus - hminus};
}

std::pair<cplx, cplx> h_from_u(cplx u1, cplx u2) {
    return {0.5 * (u1 - cplx(0.0, 1.0) * u2), 0.5 * (cplx(0.0, 1.0) * u1 - u2)};
}

std::pair<cplx, cplx> f_from_h(cplx hplus, cplx hminus) {
    return {hplus + cplx(0.0, 1.0) * std::conj(hminus),
            hplus - cplx(0.0, 1.0) * std::conj(hminus)};
}

TransportStep transport_point(const BeltramiCoefficient& nu_pos,
                              const BeltramiCoefficient& nu_neg,
                              const CauchyTransform& cauchy_k,
                              const PivotPoint& at_k0, cplx z,
                              const CgoOptions& opt) {
    TransportStep step;
    const FreqCgo sol = solve_freq_cgo(nu_pos, nu_neg, cauchy_k, at_k0.z0, z, opt);
    step.iterations = sol.rep_plus.iterations + sol.rep_minus.iterations;
    if (!sol.rep_plus.converged || !sol.rep_minus.converged) return step;
    const auto T = transport_matrix(sol, at_k0.k);
    if (!T) return step;
    step.T = *T;

    const auto [u1_0, u2_0] = u_from_h(at_k0.hplus, at_k0.hminus);
    step.u1 = T->t[0][0] * u1_0 + T->t[0][1] * u2_0;
    step.u2 = T->t[1][0] * u1_0 + T->t[1][1] * u2_0;
    const auto [hp, hm] = h_from_u(step.u1, step.u2);
    std::tie(step.f_mu, step.f_mmu) = f_from_h(hp, hm);
    step.ok = true;
    return step;
}

MuRecovery mu_via_differentiation(const ComplexField& f, const std::vector<char>& have,
                                  cplx k0) {
    const Grid2D& g = f.grid;
    if (have.size() != g.size())
        throw std::invalid_argument("mu_via_differentiation: mask size mismatch");

    // Oscillation-free field g = f e^{-i k0 z}; derivatives of f follow from
    // d f = e^{ik0 z}(i k0 g + d g) and dbar f = e^{ik0 z} dbar g, and the
    // ratio mu = dbar f / conj(d f) picks up the unimodular factor e_{k0}(z).
    std::vector<cplx> gf(g.size(), cplx(0.0));
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (have[i]) gf[i] = f.v[i] * std::exp(cplx(0.0, -1.0) * k0 * g.point(ix, iy));
        }

    // One finite-difference derivative along an axis; `at` fetches a
    // neighbour offset in that axis or nothing when it leaves the mask.
    auto derivative = [&](const std::function<const cplx*(int)>& at) -> std::optional<cplx> {
        const cplx* m2 = at(-2);
        const cplx* m1 = at(-1);
        const cplx* p1 = at(+1);
        const cplx* p2 = at(+2);
        const cplx g0 = *at(0);
        const double h = g.h;
        if (m1 && p1) return (*p1 - *m1) / (2.0 * h);
        if (p1 && p2) return (-3.0 * g0 + 4.0 * *p1 - *p2) / (2.0 * h);
        if (m1 && m2) return (3.0 * g0 - 4.0 * *m1 + *m2) / (2.0 * h);
        if (p1) return (*p1 - g0) / h;
        if (m1) return (g0 - *m1) / h;
        return std::nullopt;
    };

    MuRecovery out;
    out.mu = ComplexField(g);
    out.sigma = ComplexField(g);
    for (auto& v : out.sigma.v) v = 1.0;
    out.valid.assign(g.size(), 0);
    std::vector<std::size_t> needs_fill;

    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (!have[i]) continue;
            auto ax = [&](int d) -> const cplx* {
                const int j = ix + d;
                if (j < 0 || j >= g.n || !have[g.index(j, iy)]) return nullptr;
                return &gf[g.index(j, iy)];
            };
            auto ay = [&](int d) -> const cplx* {
                const int j = iy + d;
                if (j < 0 || j >= g.n || !have[g.index(ix, j)]) return nullptr;
                return &gf[g.index(ix, j)];
            };
            const auto gx = derivative(ax);
            const auto gy = derivative(ay);
            if (!gx || !gy) continue;  // isolated node, nothing to difference
            const cplx dbar_g = 0.5 * (*gx + cplx(0.0, 1.0) * *gy);
            const cplx d_g = 0.5 * (*gx - cplx(0.0, 1.0) * *gy);
            const cplx den = std::conj(cplx(0.0, 1.0) * k0 * gf[i] + d_g);
            if (std::abs(den) < 1e-12) {
                needs_fill.push_back(i);
                continue;
            }
            cplx mu = osc_ek(k0, g.point(ix, iy)) * dbar_g / den;
            const double a = std::abs(mu);
            if (a >= 1.0) {
                mu *= (1.0 - 1e-9) / a;
                ++out.clamped;
            }
            out.mu.v[i] = mu;
            out.valid[i] = 1;
        }

    for (const std::size_t i : needs_fill) {
        const cplx zi = g.point(int(i) % g.n, int(i) / g.n);
        double best = std::numeric_limits<double>::infinity();
        cplx pick = 0.0;
        bool found = false;
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!out.valid[j]) continue;
            const double d = std::abs(g.point(int(j) % g.n, int(j) / g.n) - zi);
            if (d < best) {
                best = d;
                pick = out.mu.v[j];
                found = true;
            }
        }
        if (!found) continue;
        out.mu.v[i] = pick;
        out.valid[i] = 1;
        ++out.filled;
    }

    for (std::size_t i = 0; i < g.size(); ++i)
        if (out.valid[i]) out.sigma.v[i] = (1.0 - out.mu.v[i]) / (1.0 + out.mu.v[i]);
    return out;
}

namespace {

struct SweepOutcome {
    std::vector<char> inside;
    std::vector<char> ok;
    ComplexField f_mu;
    ComplexField f_mmu;
};

SweepOutcome transported_field(const PivotData& pivot, const PivotPoint& at_k0,
                               const Grid2D& zgrid, const TransportOptions& opt) {
    if (at_k0.z0 != pivot.z0)
        throw std::invalid_argument("transport: pivot point and pivot data disagree on z0");
    const auto [nu_pos, nu_neg] = nu_coefficients(pivot);
    const CauchyTransform cauchy_k(pivot.nu.grid, pivot.R);

    CgoOptions copt;
    copt.tol = opt.tol;
    copt.max_iter = opt.max_iter;
    copt.restart = opt.restart;
    copt.method = opt.method;

    SweepOutcome out{std::vector<char>(zgrid.size(), 0), std::vector<char>(zgrid.size(), 0),
                     ComplexField(zgrid), ComplexField(zgrid)};
    std::vector<std::size_t> nodes;
    for (int iy = 0; iy < zgrid.n; ++iy)
        for (int ix = 0; ix < zgrid.n; ++ix) {
            const std::size_t i = zgrid.index(ix, iy);
            if (std::abs(zgrid.point(ix, iy)) <= 1.0) {
                out.inside[i] = 1;
                nodes.push_back(i);
            }
        }

    std::function<TransportStep(std::size_t)> task = [&](std::size_t j) {
        const std::size_t i = nodes[j];
        const cplx z = zgrid.point(int(i) % zgrid.n, int(i) / zgrid.n);
        return transport_point(nu_pos, nu_neg, cauchy_k, at_k0, z, copt);
    };
    const std::vector<TransportStep> steps =
        parallel_sweep<TransportStep>(nodes.size(), opt.workers, task);

    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!steps[j].ok) continue;
        out.ok[nodes[j]] = 1;
        out.f_mu.v[nodes[j]] = steps[j].f_mu;
        out.f_mmu.v[nodes[j]] = steps[j].f_mmu;
    }
    return out;
}

}  // namespace

TransportRecon reconstruct_transport(const PivotData& pivot, const PivotPoint& at_k0,
                                     const Grid2D& zgrid, const TransportOptions& opt) {
    SweepOutcome sw = transported_field(pivot, at_k0, zgrid, opt);
    MuRecovery rec = mu_via_differentiation(sw.f_mu, sw.ok, at_k0.k);

    TransportRecon out;
    out.zgrid = zgrid;
    out.inside = std::move(sw.inside);
    out.valid = std::move(rec.valid);
    out.f_mu = std::move(sw.f_mu);
    out.mu = std::move(rec.mu);
    out.sigma = std::move(rec.sigma);
    out.filled = rec.filled;
    out.clamped = rec.clamped;

    std::size_t inside_n = 0, valid_n = 0;
    for (std::size_t i = 0; i < out.inside.size(); ++i) {
        if (!out.inside[i]) continue;
        ++inside_n;
        if (out.valid[i]) ++valid_n;
    }
    out.mask_fraction = inside_n == 0 ? 0.0 : 1.0 - double(valid_n) / double(inside_n);
    return out;
}

CgoComparison compare_transported_cgo(const BeltramiCoefficient& mu, const PivotData& pivot,
                                      const PivotPoint& at_k0,
                                      const TransportOptions& opt) {
    const Grid2D& zgrid = mu.mu.grid;
    SweepOutcome sw = transported_field(pivot, at_k0, zgrid, opt);

    CgoOptions copt;
    copt.tol = opt.tol;
    copt.max_iter = opt.max_iter;
    copt.restart = opt.restart;
    copt.method = opt.method;
    const CgoSolution direct = solve_cgo(mu, at_k0.k, copt);

    CgoComparison out;
    out.zgrid = zgrid;
    out.inside = std::move(sw.inside);
    out.valid = std::move(sw.ok);
    out.transported = std::move(sw.f_mu);
    out.actual = ComplexField(zgrid);

    double max_diff = 0.0, max_ref = 0.0, sum_diff = 0.0, sum_ref = 0.0;
    std::size_t inside_n = 0, valid_n = 0;
    for (int iy = 0; iy < zgrid.n; ++iy)
        for (int ix = 0; ix < zgrid.n; ++ix) {
            const std::size_t i = zgrid.index(ix, iy);
            if (!out.inside[i]) continue;
            ++inside_n;
            const cplx z = zgrid.point(ix, iy);
            const cplx fa =
                std::exp(cplx(0.0, 1.0) * at_k0.k * z) * (1.0 + direct.omega.v[i]);
            out.actual.v[i] = fa;
            if (!out.valid[i]) continue;
            ++valid_n;
            const double d = std::abs(out.transported.v[i] - fa);
            const double r = std::abs(fa);
            max_diff = std::max(max_diff, d);
            max_ref = std::max(max_ref, r);
            sum_diff += d * d;
            sum_ref += r * r;
        }
    if (max_ref > 0.0) out.sup_pct = 100.0 * max_diff / max_ref;
    if (sum_ref > 0.0) out.sqr_pct = 100.0 * std::sqrt(sum_diff / sum_ref);
    out.mask_fraction = inside_n == 0 ? 0.0 : 1.0 - double(valid_n) / double(inside_n);
    return out;
}

}  // namespace nlft
