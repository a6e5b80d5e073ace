#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nlft/beltrami.hpp"
#include "nlft/grid.hpp"
#include "nlft/nft.hpp"
#include "nlft/rlinear.hpp"

namespace nlft {

// Low-pass transport reconstruction.  The pinned boundary data nu on the
// truncated k lattice plays the role of a Beltrami coefficient in the
// frequency plane: for each target z the pair of frequency CGO solutions
// (for +nu and -nu, with parameter zeta = z - z0) yields a real 2x2 matrix
// that transports the conductivity-equation solutions u1, u2 from the pivot
// z0 to z.  Undoing the algebra at the single frequency k0 recovers the
// low-pass CGO field, and differentiating it recovers mu and sigma.

struct TransportOptions {
    double tol = 1e-6;
    int max_iter = 500;
    int restart = 50;
    KrylovMethod method = KrylovMethod::Realified;
    int workers = 1;
};

// Frequency-plane CGO pair for one target point z.
struct FreqCgo {
    cplx z;
    cplx zeta;            // z - z0, the parameter of the k-plane solves
    ComplexField w_plus;  // eta1 = e^{ik zeta} (1 + w_plus)
    ComplexField w_minus; // eta2 = i e^{ik zeta} (1 + w_minus)
    KrylovReport rep_plus, rep_minus;
};

// The +nu / -nu coefficient pair assembled from pivot data.
std::pair<BeltramiCoefficient, BeltramiCoefficient> nu_coefficients(const PivotData& pivot);

FreqCgo solve_freq_cgo(const BeltramiCoefficient& nu_pos, const BeltramiCoefficient& nu_neg,
                       const CauchyTransform& cauchy_k, cplx z0, cplx z,
                       const CgoOptions& opt = {});

// Real coefficients (A, B) with A eta1(0) + B eta2(0) = 1; empty when the
// two values are real-linearly dependent (singular normalization).
std::optional<std::pair<double, double>> normalize_alpha(cplx eta1_at_0, cplx eta2_at_0);

struct TransportMatrix {
    double t[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

// Transport matrix at frequency k0 read off the frequency CGO pair:
// row 1 is (Re alpha, Im alpha) for the +mu column alpha, row 2 the same
// for beta = i alpha_{-mu}.  Empty on singular normalization.
std::optional<TransportMatrix> transport_matrix(const FreqCgo& sol, cplx k0);

// u1 = hplus - i hminus and u2 = i hplus - hminus, and back.
std::pair<cplx, cplx> u_from_h(cplx hplus, cplx hminus);
std::pair<cplx, cplx> h_from_u(cplx u1, cplx u2);
// f_mu = hplus + i conj(hminus), f_mmu = hplus - i conj(hminus).
std::pair<cplx, cplx> f_from_h(cplx hplus, cplx hminus);

// Full per-point step: frequency solves, transport, and recovery of the
// low-pass CGO values at (z, k0).
struct TransportStep {
    bool ok = false;
    TransportMatrix T;
    cplx u1 = 0.0, u2 = 0.0;
    cplx f_mu = 0.0, f_mmu = 0.0;
    int iterations = 0;
};

TransportStep transport_point(const BeltramiCoefficient& nu_pos,
                              const BeltramiCoefficient& nu_neg,
                              const CauchyTransform& cauchy_k,
                              const PivotPoint& at_k0, cplx z,
                              const CgoOptions& opt = {});

// Beltrami coefficient recovered from a CGO field by finite differences.
// The oscillation e^{ik0 z} is divided out first, so the scheme is exact for
// the free-space field; at nodes missing a neighbor the stencil falls back
// to one-sided differences.  Nodes with a vanishing denominator are patched
// from the nearest recovered node, and |mu| is clamped below 1.
struct MuRecovery {
    ComplexField mu;
    ComplexField sigma;        // (1 - mu)/(1 + mu), 1 where not recovered
    std::vector<char> valid;
    int filled = 0;
    int clamped = 0;
};

MuRecovery mu_via_differentiation(const ComplexField& f, const std::vector<char>& have,
                                  cplx k0);

struct TransportRecon {
    Grid2D zgrid;
    std::vector<char> inside;  // requested nodes: |z| <= 1
    std::vector<char> valid;   // transported and differentiated successfully
    ComplexField f_mu;         // low-pass CGO at k0, 0 where not inside
    ComplexField mu;
    ComplexField sigma;        // 1 where not recovered
    double mask_fraction = 0.0;  // fraction of inside nodes that failed to transport
    int filled = 0;
    int clamped = 0;
};

TransportRecon reconstruct_transport(const PivotData& pivot, const PivotPoint& at_k0,
                                     const Grid2D& zgrid, const TransportOptions& opt = {});

// Transported low-pass CGO field against the directly computed one, with
// sup and square-mean discrepancies in percent of the direct field.
struct CgoComparison {
    Grid2D zgrid;
    std::vector<char> inside;
    std::vector<char> valid;
    ComplexField transported;
    ComplexField actual;
    double sup_pct = 0.0;
    double sqr_pct = 0.0;
    double mask_fraction = 0.0;  // fraction of inside nodes excluded from the error
};

CgoComparison compare_transported_cgo(const BeltramiCoefficient& mu, const PivotData& pivot,
                                      const PivotPoint& at_k0,
                                      const TransportOptions& opt = {});

}  // namespace nlft
