#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlft/beltrami.hpp"
#include "nlft/grid.hpp"
#include "nlft/phantom.hpp"

namespace nlft {

// Nonlinear Fourier transform of a conductivity: tau(k) is assembled from the
// two Beltrami CGO solutions at +mu and -mu.  Data is carried either as a
// radial profile tau(|k|) along the positive real axis (enough for radial
// conductivities, where tau(e^{it}k) = e^{it}tau(k)) or as samples on a
// square lattice in the k plane.

struct ScatteringData {
    enum class Layout { Ray, Grid };
    Layout layout = Layout::Ray;
    RadialRay ray;       // Layout::Ray: tau(r) for r = 0, step, ..., R
    ComplexField field;  // Layout::Grid: tau on the lattice, 0 for |k| >= R
    double R = 0.0;      // truncation radius; no data beyond it

    // provenance, carried through file round trips
    std::string phantom;
    int m_z = 0;
    double s_z = 0.0;
    double tol = 0.0;
};

struct ForwardOptions {
    int m_z = 8;       // z-grid refinement: 2^m_z points per axis
    double s_z = 2.1;  // z-torus half-width (must exceed 1 + diam supp mu / 2)
    double tol = 1e-8;
    int workers = 1;
};

// Both CGO solutions at one spectral parameter, plus the resulting tau(k).
struct TauPoint {
    cplx tau;
    CgoSolution plus;   // omega for +mu
    CgoSolution minus;  // omega for -mu
};

BeltramiCoefficient negated(const BeltramiCoefficient& mu);

TauPoint tau_point(const BeltramiCoefficient& mu, const CauchyTransform& cauchy,
                   cplx k, const CgoOptions& opt = {});

// tau(k) alone; builds the periodized Cauchy transform internally.
cplx tau_at(const BeltramiCoefficient& mu, cplx k, const CgoOptions& opt = {});

// The standard EIT scattering transform differs from tau by an explicit
// factor: t(k) = -4 pi i conj(k) tau(k).
cplx t_from_tau(cplx k, cplx tau);

// tau(|k|) on the ray [0, rmax] with uniform step; requires a radial phantom.
ScatteringData radial_transform(const Phantom& phantom, double rmax, double step,
                                const ForwardOptions& opt = {});

// tau on the lattice [-R, R)^2 with 2^m_k points per axis, zero for |k| >= R.
ScatteringData tau_grid(const Phantom& phantom, int m_k, double R,
                        const ForwardOptions& opt = {});

// Evaluates tau at an arbitrary k: radial data is extended by
// tau(k) = (k/|k|) tau(|k|), grid data is interpolated bilinearly.
// Zero for |k| >= R.
cplx value_at(const ScatteringData& data, cplx k);

// Zeroes all samples with |k| >= r and lowers R accordingly.
ScatteringData truncate(const ScatteringData& data, double r);

// CGO boundary data pinned at one point z0 outside the unit disc:
// hplus = (f_mu + f_mmu)/2 and hminus = i (conj f_mu - conj f_mmu)/2
// sampled over the k lattice, and the transport coefficient
// nu = i hminus / hplus, zeroed for |k| >= R.
struct PivotData {
    cplx z0;
    double R = 0.0;
    ComplexField hplus;
    ComplexField hminus;
    ComplexField nu;
    int clamped = 0;  // nodes where |nu| had to be clamped below 1
};

PivotData pivot_data(const BeltramiCoefficient& mu, cplx z0, int m_k, double R,
                     const ForwardOptions& opt = {});

// The same boundary data at a single spectral parameter (typically the k0 at
// which reconstructions are read off, which need not be a lattice node).
struct PivotPoint {
    cplx z0;
    cplx k;
    cplx hplus;
    cplx hminus;
};

PivotPoint pivot_at(const BeltramiCoefficient& mu, cplx z0, cplx k,
                    const ForwardOptions& opt = {});

// First Laurent coefficient of omega at infinity, read off a circle of
// radius r0 that encloses supp mu: a1 = (r0/N) sum_j omega(r0 e^{i t_j}) e^{i t_j}.
cplx laurent_a1(const ComplexField& omega, double r0, int nodes);

// tau recovered from the large-|z| behaviour of the two CGO solutions:
// conj(tau) equals the difference of the two leading Laurent coefficients
// over 2, tau = (conj(a1+) - conj(a1-)) / 2.
cplx shortcut_tau_from_traces(const ComplexField& omega_plus,
                              const ComplexField& omega_minus,
                              double r0 = 1.5, int nodes = 256);

// File round trip.  Ray data goes to a CSV profile, grid data to an NFF1
// field; either way a "<path>.meta" sidecar records R and provenance as
// key=value lines.  extra_meta lines are appended verbatim.
void save_scattering(const ScatteringData& data, const std::string& path,
                     const std::vector<std::string>& extra_meta = {});
ScatteringData load_scattering(const std::string& path);

}  // namespace nlft
