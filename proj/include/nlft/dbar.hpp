#pragma once

#include <functional>
#include <vector>

#include "nlft/beltrami.hpp"
#include "nlft/grid.hpp"
#include "nlft/nft.hpp"
#include "nlft/rlinear.hpp"

namespace nlft {

// Periodized Cauchy machinery on the spectral torus used by the shortcut
// reconstruction.  For data truncated at |k| < R the integral equation reads
//   m(k) = 1 + C[ F_z conj(m) ](k),   F_z(k) = -i tau(k) e_{-k}(z),
// and periodization needs the torus half-width s = 2R + 3 eps so the kernel
// cutoff (1 up to 2R + eps, 0 beyond 2R + 2 eps) never sees its own images
// across differences of points in the disc |k| < R + eps.
struct PeriodizedKernel {
    double R = 0.0;
    double eps = 0.0;
    Grid2D grid;          // torus lattice, 2^m_k points per axis
    ComplexField eta;     // real cutoff samples eta(|k|)
    ComplexField beta;    // mollified kernel eta(|k|)/(pi k), origin sample 0
    CauchyTransform cauchy;

    PeriodizedKernel(double R, double eps, int m_k);
};

PeriodizedKernel build_kernel(double R, double eps, int m_k);

// Samples scattering data onto a lattice, zero where |k| >= data.R.
ComplexField sample_tau(const ScatteringData& data, const Grid2D& g);

// One application of the fixed-point operator m -> 1 + chi C[F_z conj(m)],
// where chi restricts to the disc |k| <= R + eps.  Exposed for testing; the
// solver applies the same operator with the kernel spectrum cached.
ComplexField dbar_fixed_point(const PeriodizedKernel& kern, const ComplexField& tau,
                              cplx z, const ComplexField& m);

struct DbarPointSolution {
    cplx z;
    ComplexField m;
    cplx m0;  // m(z, k = 0)
    KrylovReport report;
};

// Solves (I - chi C F_z conj) m = 1 on the torus by real-linear GMRES.
DbarPointSolution solve_dbar_at(const PeriodizedKernel& kern, const ComplexField& tau,
                                cplx z, const CgoOptions& opt = {});

// Same discrete system assembled densely (realified 2N x 2N) and solved by
// LU factorization.  Only sensible for small lattices; used as an oracle.
ComplexField direct_dbar_oracle(const PeriodizedKernel& kern, const ComplexField& tau,
                                cplx z);

struct ShortcutOptions {
    int m_k = 7;
    double eps = 0.0;  // cutoff margin; <= 0 means the default 0.05 * R
    double tol = 1e-8;
    int max_iter = 500;
    int restart = 50;
    KrylovMethod method = KrylovMethod::Realified;
    int workers = 1;
};

struct ShortcutRecon {
    std::vector<cplx> z;
    std::vector<cplx> m0;
    std::vector<cplx> sigma;  // sigma(z) = m(z, 0)^2
};

// Reconstructs sigma at the requested z points from (possibly re-truncated)
// scattering data: one independent torus solve per point.
ShortcutRecon reconstruct_shortcut(const ScatteringData& data, double R,
                                   const std::vector<cplx>& zs,
                                   const ShortcutOptions& opt = {});

// Common evaluation point sets.
std::vector<cplx> radial_points(int count, double rmax = 1.0);      // real axis
std::vector<cplx> disc_points(const Grid2D& g, double radius = 1.0);

}  // namespace nlft
