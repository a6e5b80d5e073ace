#pragma once

#include <cstdint>
#include <vector>

#include "nlft/grid.hpp"
#include "nlft/nft.hpp"

namespace nlft {

// Band-relative discrepancy of imaginary parts, in percent:
//   100 * max_{lo <= |k| <= hi} |Im a - Im b| / max_{lo <= |k| <= hi} |Im b|.
// Both rays must share their radius grid; the second argument is the
// reference that supplies the denominator.
double band_discrepancy(const RadialRay& a, const RadialRay& b, double lo, double hi);

// Largest imaginary part in magnitude over a set of reconstruction values.
double max_imag(const std::vector<cplx>& vals);

struct SupSqr {
    double sup_pct = 0.0;
    double sqr_pct = 0.0;
};

// Relative sup and square-mean discrepancies in percent of the truth:
//   sup = ||t - a||_linf / ||t||_linf * 100,  sqr = ||t - a||_l2 / ||t||_l2 * 100.
// An optional mask (nonzero = keep) excludes points from both norms.
SupSqr sup_sqr(const std::vector<cplx>& approx, const std::vector<cplx>& truth,
               const std::vector<char>& keep = {});

// Additive complex Gaussian noise on scattering samples with standard
// deviation (p/100)(1 + |k|)^gamma, drawn serially from the seed so the
// result does not depend on worker counts.  Grid samples outside the data
// radius stay exactly zero.
ScatteringData add_noise(const ScatteringData& data, double p_percent, double gamma,
                         std::uint64_t seed);

// E_p(r) = sup_{|k| <= r} |tau_clean - tau_noisy| per requested radius;
// non-decreasing in r since the discs are nested.
std::vector<double> noise_radius_profile(const ScatteringData& clean,
                                         const ScatteringData& noisy,
                                         const std::vector<double>& radii);

// First radius whose profile value exceeds the threshold, or +infinity when
// the profile never does.
double crossing_radius(const std::vector<double>& radii,
                       const std::vector<double>& profile, double threshold);

}  // namespace nlft
