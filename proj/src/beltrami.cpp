#include "nlft/beltrami.hpp"

#include <cmath>
#include <stdexcept>

#include "nlft/fft.hpp"

namespace nlft {

cplx osc_ek(cplx k, cplx z) {
    const double phase = 2.0 * (k.real() * z.real() - k.imag() * z.imag());
    return {std::cos(phase), std::sin(phase)};
}

namespace {

double bump(double u) {
    // C-infinity ramp: 1 at u = 0, 0 at u = 1.
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

}  // namespace

CutoffRadii cauchy_cutoff_radii(const Grid2D& g, double support_radius) {
    if (!(support_radius > 0.0))
        throw std::invalid_argument("cauchy_cutoff_radii: support_radius must be positive");
    const double d = 2.0 * support_radius;
    const double eps = (g.s - d) / 3.0;
    // Splitting the margin s - d into thirds keeps the kernel exact on every
    // difference of support points (|w| <= d < r1) and zero before the torus
    // boundary (r2 = s - eps < s), so no wrapped image of the support is seen.
    // If the torus is too small for any margin, keep the exact zone at d and
    // let the kernel decay over two cells; wrap pollution is then accepted.
    if (eps > 0.0) return {d + eps, d + 2.0 * eps};
    return {d, d + 2.0 * g.h};
}

double cutoff_eta(double r, const CutoffRadii& radii) {
    if (r <= radii.r1) return 1.0;
    if (r >= radii.r2) return 0.0;
    return bump((r - radii.r1) / (radii.r2 - radii.r1));
}

ComplexField make_cauchy_kernel(const Grid2D& g, double support_radius) {
    const CutoffRadii radii = cauchy_cutoff_radii(g, support_radius);
    ComplexField kern(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cplx w = g.point(ix, iy);
            const double r = std::abs(w);
            if (r == 0.0) continue;  // principal-value convention: origin sample 0
            const double eta = cutoff_eta(r, radii);
            if (eta != 0.0) kern.at(ix, iy) = eta / (M_PI * w);
        }
    return kern;
}

CauchyTransform::CauchyTransform(const Grid2D& g, double support_radius) : grid_(g) {
    ComplexField kern = make_cauchy_kernel(g, support_radius);
    const int n = g.n;
    const int half = n / 2;
    khat_.assign(g.size(), cplx(0.0));
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            khat_[g.index(ix, iy)] = kern.at((ix + half) % n, (iy + half) % n);
    Fft2::plan_for(n).forward(khat_.data());
    const double w = g.h * g.h;
    for (auto& x : khat_) x *= w;
}

ComplexField CauchyTransform::apply(const ComplexField& rho) const {
    if (!(rho.grid == grid_))
        throw std::invalid_argument("CauchyTransform: grid mismatch");
    ComplexField out = rho;
    const Fft2& fft = Fft2::plan_for(grid_.n);
    fft.forward(out.v.data());
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= khat_[i];
    fft.backward(out.v.data());
    return out;
}

ComplexField cgo_rhs_operator(const ComplexField& mu, cplx k, const ComplexField& omega,
                              const ComplexField& domega) {
    if (!(mu.grid == omega.grid) || !(mu.grid == domega.grid))
        throw std::invalid_argument("cgo_rhs_operator: grid mismatch");
    const Grid2D& g = mu.grid;
    ComplexField out(g);
    const cplx ikbar = cplx(0.0, 1.0) * std::conj(k);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            const cplx m = mu.v[i];
            if (m == cplx(0.0)) continue;
            const cplx em = osc_ek(-k, g.point(ix, iy));
            out.v[i] = m * em *
                       (std::conj(domega.v[i]) - ikbar * (1.0 + std::conj(omega.v[i])));
        }
    return out;
}

ComplexField cgo_rhs_operator(const ComplexField& mu, cplx k, const ComplexField& omega) {
    return cgo_rhs_operator(mu, k, omega, d_derivative(omega));
}

CgoSolution solve_cgo(const BeltramiCoefficient& mu, cplx k, const CauchyTransform& C,
                      const CgoOptions& opt) {
    const Grid2D& g = mu.mu.grid;
    if (!(C.grid() == g)) throw std::invalid_argument("solve_cgo: grid mismatch");
    if (!(mu.kappa < 1.0)) throw std::invalid_argument("solve_cgo: need |mu| < 1");

    // Split the fixed point omega = C[rho(omega)] into (I - L) omega = b with
    // L the real-linear part of rho and b the omega-free part.  The factor
    // mu(z) e_{-k}(z) is fixed throughout the iteration, so cache it on the
    // support of mu.
    const std::size_t total = g.size();
    const cplx ikbar = cplx(0.0, 1.0) * std::conj(k);
    std::vector<std::size_t> supp;
    std::vector<cplx> muem(total, cplx(0.0));
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            const cplx m = mu.mu.v[i];
            if (m == cplx(0.0)) continue;
            supp.push_back(i);
            muem[i] = m * osc_ek(-k, g.point(ix, iy));
        }

    ComplexField b(g);
    for (const std::size_t i : supp) b.v[i] = muem[i] * (-ikbar);
    b = C.apply(b);

    RealLinearOp A = [&](const std::vector<cplx>& x) {
        ComplexField w(g);
        w.v = x;
        const ComplexField dom = d_derivative(w);
        ComplexField rho_lin(g);
        for (const std::size_t i : supp)
            rho_lin.v[i] = muem[i] * (std::conj(dom.v[i]) - ikbar * std::conj(x[i]));
        const ComplexField Cw = C.apply(rho_lin);
        std::vector<cplx> out(total);
        for (std::size_t i = 0; i < total; ++i) out[i] = x[i] - Cw.v[i];
        return out;
    };

    CgoSolution sol;
    sol.k = k;
    sol.omega = ComplexField(g);

    KrylovOptions kopt;
    kopt.max_iter = opt.max_iter;
    kopt.restart = opt.restart;
    kopt.method = opt.method;
    const double n_points = std::sqrt(static_cast<double>(total));
    // Convergence contract is relative to ||1 + omega||, which is close to
    // the norm of the constant 1; aim slightly below and verify.
    kopt.abs_target = 0.7 * opt.tol * n_points;

    for (int attempt = 0; attempt < 3; ++attempt) {
        KrylovResult res = rlinear_krylov(A, b.v, kopt);
        sol.omega.v = std::move(res.x);
        sol.report = std::move(res.report);

        std::vector<cplx> one_plus(total);
        for (std::size_t i = 0; i < total; ++i) one_plus[i] = 1.0 + sol.omega.v[i];
        const double denom = l2_norm(one_plus);
        sol.residual = denom > 0.0 ? sol.report.residual / denom : sol.report.residual;
        if (!sol.report.converged || sol.residual <= opt.tol) break;
        kopt.abs_target = 0.7 * opt.tol * denom;
    }

    sol.rho = cgo_rhs_operator(mu.mu, k, sol.omega);
    return sol;
}

CgoSolution solve_cgo(const BeltramiCoefficient& mu, cplx k, const CgoOptions& opt) {
    CauchyTransform C(mu.mu.grid, 1.0);
    return solve_cgo(mu, k, C, opt);
}

cplx omega_outside(const CgoSolution& sol, cplx p) {
    const Grid2D& g = sol.rho.grid;
    cplx acc(0.0);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cplx r = sol.rho.at(ix, iy);
            if (r == cplx(0.0)) continue;
            acc += r / (p - g.point(ix, iy));
        }
    return acc * (g.h * g.h / M_PI);
}

}  // namespace nlft
