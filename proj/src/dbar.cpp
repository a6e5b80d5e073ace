#include "nlft/dbar.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "nlft/sweep.hpp"

namespace nlft {

PeriodizedKernel::PeriodizedKernel(double R_, double eps_, int m_k)
    : R(R_),
      eps(eps_),
      grid(make_grid(m_k, 2.0 * R_ + 3.0 * eps_)),
      eta(grid),
      beta(make_cauchy_kernel(grid, R_)),
      cauchy(grid, R_) {
    if (!(R > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("PeriodizedKernel: R and eps must be positive");
    const CutoffRadii radii = cauchy_cutoff_radii(grid, R);
    eps = radii.r1 - 2.0 * R;  // actual margin (0 on a tight torus)
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix)
            eta.at(ix, iy) = cutoff_eta(std::abs(grid.point(ix, iy)), radii);
}

PeriodizedKernel build_kernel(double R, double eps, int m_k) {
    return PeriodizedKernel(R, eps, m_k);
}

ComplexField sample_tau(const ScatteringData& data, const Grid2D& g) {
    ComplexField tau(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            tau.at(ix, iy) = value_at(data, g.point(ix, iy));
    return tau;
}

namespace {

// Per-point coefficient F_z(k) = -i tau(k) e_{-k}(z), zero wherever tau is.
std::vector<cplx> phase_coefficient(const Grid2D& g, const ComplexField& tau, cplx z) {
    std::vector<cplx> F(g.size(), cplx(0.0));
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const std::size_t i = g.index(ix, iy);
            if (tau.v[i] == cplx(0.0)) continue;
            F[i] = cplx(0.0, -1.0) * tau.v[i] * osc_ek(-g.point(ix, iy), z);
        }
    return F;
}

std::vector<char> disc_mask(const Grid2D& g, double radius) {
    std::vector<char> inside(g.size(), 0);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            inside[g.index(ix, iy)] = std::abs(g.point(ix, iy)) <= radius ? 1 : 0;
    return inside;
}

RealLinearOp make_dbar_op(const PeriodizedKernel& kern, const std::vector<cplx>& F,
                          const std::vector<char>& inside) {
    return [&kern, &F, &inside](const std::vector<cplx>& x) {
        ComplexField w(kern.grid);
        for (std::size_t i = 0; i < x.size(); ++i)
            if (F[i] != cplx(0.0)) w.v[i] = F[i] * std::conj(x[i]);
        const ComplexField y = kern.cauchy.apply(w);
        std::vector<cplx> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = inside[i] ? x[i] - y.v[i] : x[i];
        return out;
    };
}

}  // namespace

ComplexField dbar_fixed_point(const PeriodizedKernel& kern, const ComplexField& tau,
                              cplx z, const ComplexField& m) {
    if (!(tau.grid == kern.grid) || !(m.grid == kern.grid))
        throw std::invalid_argument("dbar_fixed_point: grid mismatch");
    const std::vector<cplx> F = phase_coefficient(kern.grid, tau, z);
    ComplexField w(kern.grid);
    for (std::size_t i = 0; i < m.v.size(); ++i)
        if (F[i] != cplx(0.0)) w.v[i] = F[i] * std::conj(m.v[i]);
    const ComplexField y = kern.cauchy.apply(w);
    const std::vector<char> inside = disc_mask(kern.grid, kern.R + kern.eps);
    ComplexField out(kern.grid);
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] = 1.0 + (inside[i] ? y.v[i] : cplx(0.0));
    return out;
}

DbarPointSolution solve_dbar_at(const PeriodizedKernel& kern, const ComplexField& tau,
                                cplx z, const CgoOptions& opt) {
    if (!(tau.grid == kern.grid))
        throw std::invalid_argument("solve_dbar_at: tau not sampled on the kernel torus");
    const std::vector<cplx> F = phase_coefficient(kern.grid, tau, z);
    const std::vector<char> inside = disc_mask(kern.grid, kern.R + kern.eps);
    const RealLinearOp A = make_dbar_op(kern, F, inside);

    const std::vector<cplx> ones(kern.grid.size(), cplx(1.0));
    KrylovOptions kopt;
    kopt.tol = opt.tol;
    kopt.max_iter = opt.max_iter;
    kopt.restart = opt.restart;
    kopt.method = opt.method;
    KrylovResult res = rlinear_krylov(A, ones, kopt);

    DbarPointSolution sol;
    sol.z = z;
    sol.m = ComplexField(kern.grid);
    sol.m.v = std::move(res.x);
    const int c = kern.grid.zero_index();
    sol.m0 = sol.m.at(c, c);
    sol.report = std::move(res.report);
    return sol;
}

ComplexField direct_dbar_oracle(const PeriodizedKernel& kern, const ComplexField& tau,
                                cplx z) {
    const Grid2D& g = kern.grid;
    if (g.n > 32)
        throw std::invalid_argument("direct_dbar_oracle: lattice too large for a dense solve");
    const std::size_t N = g.size();
    const std::vector<cplx> F = phase_coefficient(g, tau, z);
    const std::vector<char> inside = disc_mask(g, kern.R + kern.eps);
    const RealLinearOp A = make_dbar_op(kern, F, inside);

    // Real-linear operators act on (Re, Im) pairs, so probe with both the
    // real and the imaginary unit vector at every node.
    Eigen::MatrixXd M(2 * N, 2 * N);
    std::vector<cplx> basis(N, cplx(0.0));
    for (std::size_t j = 0; j < N; ++j) {
        basis[j] = 1.0;
        std::vector<cplx> col = A(basis);
        for (std::size_t i = 0; i < N; ++i) {
            M(i, j) = col[i].real();
            M(N + i, j) = col[i].imag();
        }
        basis[j] = cplx(0.0, 1.0);
        col = A(basis);
        for (std::size_t i = 0; i < N; ++i) {
            M(i, N + j) = col[i].real();
            M(N + i, N + j) = col[i].imag();
        }
        basis[j] = 0.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * N);
    rhs.head(N).setOnes();
    const Eigen::VectorXd sol = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs);

    ComplexField m(g);
    for (std::size_t i = 0; i < N; ++i) m.v[i] = cplx(sol(i), sol(N + i));
    return m;
}

ShortcutRecon reconstruct_shortcut(const ScatteringData& data, double R,
                                   const std::vector<cplx>& zs,
                                   const ShortcutOptions& opt) {
    if (R > data.R * (1.0 + 1e-12))
        throw std::invalid_argument("reconstruct_shortcut: R exceeds the data radius");
    const double eps = opt.eps > 0.0 ? opt.eps : 0.05 * R;
    const PeriodizedKernel kern(R, eps, opt.m_k);
    const ScatteringData trunc = R < data.R ? truncate(data, R) : data;
    const ComplexField tau = sample_tau(trunc, kern.grid);

    CgoOptions copt;
    copt.tol = opt.tol;
    copt.max_iter = opt.max_iter;
    copt.restart = opt.restart;
    copt.method = opt.method;

    std::function<cplx(std::size_t)> task = [&](std::size_t i) {
        return solve_dbar_at(kern, tau, zs[i], copt).m0;
    };
    ShortcutRecon out;
    out.z = zs;
    out.m0 = parallel_sweep<cplx>(zs.size(), opt.workers, task);
    out.sigma.resize(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) out.sigma[i] = out.m0[i] * out.m0[i];
    return out;
}

std::vector<cplx> radial_points(int count, double rmax) {
    if (count < 2) throw std::invalid_argument("radial_points: need at least two points");
    std::vector<cplx> zs(count);
    for (int i = 0; i < count; ++i) zs[i] = cplx(rmax * i / (count - 1), 0.0);
    return zs;
}

std::vector<cplx> disc_points(const Grid2D& g, double radius) {
    std::vector<cplx> zs;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cplx z = g.point(ix, iy);
            if (std::abs(z) <= radius) zs.push_back(z);
        }
    return zs;
}

}  // namespace nlft
