#pragma once

#include "nlft/grid.hpp"
#include "nlft/phantom.hpp"
#include "nlft/rlinear.hpp"

namespace nlft {

// Unimodular oscillation e_k(z) = exp(i(kz + conj(k)conj(z))) = exp(2i Re(kz)).
cplx osc_ek(cplx k, cplx z);

// Radii of the radial cutoff used to mollify the Cauchy kernel on a torus:
// the cutoff is 1 up to r1 and 0 from r2 outward.
struct CutoffRadii {
    double r1 = 0.0;
    double r2 = 0.0;
};
CutoffRadii cauchy_cutoff_radii(const Grid2D& g, double support_radius);

// The cutoff profile itself: 1 on [0, r1], a smooth exp(1 - 1/(1-u^2)) ramp
// on (r1, r2), 0 beyond.
double cutoff_eta(double r, const CutoffRadii& radii);

// Mollified Cauchy kernel eta(|w|)/(pi w) sampled on the torus, zero at the
// origin sample.  The cutoff is 1 on |w| <= r1 and 0 beyond r2, with radii
// chosen so the kernel matches the plane kernel on every difference of points
// drawn from the disc |z| <= support_radius, and the cutoff dies before
// periodic images can reach back into that range; when the torus is too small
// for that (2*support_radius close to or above s), the kernel keeps the exact
// values as far out as the torus allows.
ComplexField make_cauchy_kernel(const Grid2D& g, double support_radius);

// Torus convolution with a fixed kernel, spectrum cached across calls.
class CauchyTransform {
  public:
    CauchyTransform(const Grid2D& g, double support_radius);
    const Grid2D& grid() const { return grid_; }
    ComplexField apply(const ComplexField& rho) const;

  private:
    Grid2D grid_;
    std::vector<cplx> khat_;  // DFT of the index-shifted kernel, times h^2
};

struct CgoOptions {
    double tol = 1e-8;
    int max_iter = 500;
    int restart = 50;
    KrylovMethod method = KrylovMethod::Realified;
};

struct CgoSolution {
    cplx k;
    ComplexField omega;   // f = e^{ikz} (1 + omega)
    ComplexField rho;     // dbar omega for the returned omega
    KrylovReport report;
    double residual = 0.0;  // ||omega - C rho(omega)||_2 / ||1 + omega||_2
};

// Right-hand side of the first-order system satisfied by omega:
//   dbar omega = mu(z) e_{-k}(z) (conj(d omega) - i conj(k)(1 + conj(omega))).
// `domega` is the d/dz derivative of omega; passing the two fields separately
// lets callers substitute exact derivatives in tests.
ComplexField cgo_rhs_operator(const ComplexField& mu, cplx k, const ComplexField& omega,
                              const ComplexField& domega);
// Convenience overload computing d omega spectrally.
ComplexField cgo_rhs_operator(const ComplexField& mu, cplx k, const ComplexField& omega);

// Solves the Beltrami equation dbar f = mu conj(d f) for the complex
// geometric optics solution f = e^{ikz}(1 + omega) by the fixed point
// omega = C[rho(omega)], where C is the torus-periodized Cauchy transform.
// The real-linear system is solved with restarted GMRES on the realified
// form.  Throws only on precondition violations; convergence status is in
// the report.
CgoSolution solve_cgo(const BeltramiCoefficient& mu, cplx k, const CauchyTransform& C,
                      const CgoOptions& opt = {});
// Convenience overload with the unit-disc kernel (support_radius = 1).
CgoSolution solve_cgo(const BeltramiCoefficient& mu, cplx k, const CgoOptions& opt = {});

// omega evaluated off the mu support through its Cauchy representation
// omega(p) = (h^2/pi) sum rho(z)/(p - z); exact for p outside the support,
// and free of the wrap artifacts the torus field carries outside the disc.
cplx omega_outside(const CgoSolution& sol, cplx p);

}  // namespace nlft
