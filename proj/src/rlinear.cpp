#include "nlft/rlinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlft {

namespace {

using Vec = std::vector<cplx>;

double nrm(const Vec& v) { return l2_norm(v); }

void axpy(Vec& y, cplx a, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vec residual_vec(const RealLinearOp& A, const Vec& b, const Vec& x) {
    Vec r = A(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

// Restarted GMRES over the inner product supplied by `dot`.  With the full
// complex dot this is textbook GMRES; with the real part only it is GMRES on
// the realified 2N-dimensional real system (all coefficients stay real).
KrylovResult gmres(const RealLinearOp& A, const Vec& b,
                   const std::function<cplx(const Vec&, const Vec&)>& dot,
                   double target, int max_iter, int restart) {
    KrylovResult out;
    out.x.assign(b.size(), cplx(0.0));

    const double bnorm = nrm(b);
    if (bnorm == 0.0) {
        out.report.converged = true;
        return out;
    }

    const int m = std::max(1, std::min(restart, max_iter));
    int used = 0;
    double last_cycle_res = bnorm;

    while (used < max_iter) {
        Vec r = residual_vec(A, b, out.x);
        double beta = nrm(r);
        if (beta <= target) {
            out.report.converged = true;
            out.report.residual = beta;
            return out;
        }

        std::vector<Vec> V;
        V.reserve(m + 1);
        {
            Vec v0 = r;
            for (auto& t : v0) t /= beta;
            V.push_back(std::move(v0));
        }
        std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, cplx(0.0)));
        std::vector<cplx> cs(m), sn(m);
        std::vector<cplx> g(m + 1, cplx(0.0));
        g[0] = beta;

        int j = 0;
        bool breakdown = false;
        for (; j < m && used < max_iter; ++j, ++used) {
            Vec w = A(V[j]);
            // Modified Gram-Schmidt with one re-orthogonalization pass.
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) {
                    const cplx hij = dot(V[i], w);
                    axpy(w, -hij, V[i]);
                    H[i][j] += hij;
                }
            const double hnext = nrm(w);
            H[j + 1][j] = hnext;

            // Apply accumulated Givens rotations to the new column.
            for (int i = 0; i < j; ++i) {
                const cplx t = std::conj(cs[i]) * H[i][j] + std::conj(sn[i]) * H[i + 1][j];
                H[i + 1][j] = -sn[i] * H[i][j] + cs[i] * H[i + 1][j];
                H[i][j] = t;
            }
            const double denom =
                std::sqrt(std::norm(H[j][j]) + std::norm(H[j + 1][j]));
            if (denom == 0.0) {
                // Column vanished entirely: exclude it from the least-squares
                // solve and fall back to what the previous columns give.
                breakdown = true;
                break;
            }
            cs[j] = H[j][j] / denom;
            sn[j] = H[j + 1][j] / denom;
            H[j][j] = std::conj(cs[j]) * H[j][j] + std::conj(sn[j]) * H[j + 1][j];
            H[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = std::conj(cs[j]) * g[j];

            const double est = std::abs(g[j + 1]);
            out.report.history.push_back(std::max(est, 1e-300));

            if (hnext == 0.0) {
                breakdown = true;
                ++j;
                break;
            }
            Vec vnext = w;
            for (auto& t : vnext) t /= hnext;
            V.push_back(std::move(vnext));

            if (est <= target) {
                ++j;
                break;
            }
        }

        // Back-substitute the triangularized least-squares system.
        std::vector<cplx> y(j, cplx(0.0));
        for (int i = j - 1; i >= 0; --i) {
            cplx acc = g[i];
            for (int l = i + 1; l < j; ++l) acc -= H[i][l] * y[l];
            y[i] = acc / H[i][i];
        }
        for (int i = 0; i < j; ++i) axpy(out.x, y[i], V[i]);

        Vec rr = residual_vec(A, b, out.x);
        const double res = nrm(rr);
        out.report.residual = res;
        out.report.iterations = used;
        if (res <= target) {
            out.report.converged = true;
            return out;
        }
        if (breakdown || res >= last_cycle_res * (1.0 - 1e-12)) {
            out.report.stagnated = true;
            return out;
        }
        last_cycle_res = res;
    }
    out.report.iterations = used;
    return out;
}

}  // namespace

KrylovResult rlinear_krylov(const RealLinearOp& A, const Vec& b, const KrylovOptions& opt) {
    if (!(opt.tol > 0.0) && !(opt.abs_target > 0.0))
        throw std::invalid_argument("rlinear_krylov: tolerance must be positive");
    if (opt.max_iter < 1) throw std::invalid_argument("rlinear_krylov: max_iter < 1");

    const double target =
        opt.abs_target > 0.0 ? opt.abs_target : opt.tol * nrm(b);

    if (opt.method == KrylovMethod::Realified) {
        auto re_dot = [](const Vec& x, const Vec& y) -> cplx {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                acc += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
            return {acc, 0.0};
        };
        KrylovResult res = gmres(A, b, re_dot, target, opt.max_iter, opt.restart);
        res.report.iterations = std::max(res.report.iterations,
                                         static_cast<int>(res.report.history.size()));
        return res;
    }

    // Two-term reduction: with L = I - A purely conjugate-linear, solve the
    // complex-linear system (I - L∘L) x = b + L b, then confirm against the
    // original operator.
    auto L = [&A](const Vec& x) {
        Vec out = A(x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - out[i];
        return out;
    };
    Vec rhs = L(b);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += b[i];
    auto M = [&L](const Vec& x) {
        Vec out = L(L(x));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - out[i];
        return out;
    };
    auto c_dot = [](const Vec& x, const Vec& y) -> cplx {
        cplx acc(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
        return acc;
    };
    // Aim a little below the requested residual: the reduced system's
    // residual does not coincide with the original one.
    KrylovResult res = gmres(M, rhs, c_dot, 0.5 * target, opt.max_iter, opt.restart);
    Vec r = residual_vec(A, b, res.x);
    res.report.residual = nrm(r);
    res.report.converged = res.report.residual <= target;
    res.report.iterations = std::max(res.report.iterations,
                                     static_cast<int>(res.report.history.size()));
    return res;
}

}  // namespace nlft
