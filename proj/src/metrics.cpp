#include "nlft/metrics.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nlft {

double band_discrepancy(const RadialRay& a, const RadialRay& b, double lo, double hi) {
    if (a.r != b.r)
        throw std::invalid_argument("band_discrepancy: rays sample different radii");
    if (!(lo <= hi)) throw std::invalid_argument("band_discrepancy: empty band");
    double num = 0.0, den = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < a.r.size(); ++i) {
        if (a.r[i] < lo || a.r[i] > hi) continue;
        any = true;
        num = std::max(num, std::abs(a.v[i].imag() - b.v[i].imag()));
        den = std::max(den, std::abs(b.v[i].imag()));
    }
    if (!any) throw std::invalid_argument("band_discrepancy: no samples in band");
    if (den == 0.0)
        throw std::domain_error("band_discrepancy: reference has no imaginary part in band");
    return 100.0 * num / den;
}

double max_imag(const std::vector<cplx>& vals) {
    double m = 0.0;
    for (const auto& v : vals) m = std::max(m, std::abs(v.imag()));
    return m;
}

SupSqr sup_sqr(const std::vector<cplx>& approx, const std::vector<cplx>& truth,
               const std::vector<char>& keep) {
    if (approx.size() != truth.size())
        throw std::invalid_argument("sup_sqr: size mismatch");
    if (!keep.empty() && keep.size() != truth.size())
        throw std::invalid_argument("sup_sqr: mask size mismatch");
    double max_d = 0.0, max_t = 0.0, sum_d = 0.0, sum_t = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!keep.empty() && !keep[i]) continue;
        const double d = std::abs(approx[i] - truth[i]);
        const double t = std::abs(truth[i]);
        max_d = std::max(max_d, d);
        max_t = std::max(max_t, t);
        sum_d += d * d;
        sum_t += t * t;
    }
    if (max_t == 0.0) throw std::domain_error("sup_sqr: truth is zero on kept points");
    return {100.0 * max_d / max_t, 100.0 * std::sqrt(sum_d / sum_t)};
}

ScatteringData add_noise(const ScatteringData& data, double p_percent, double gamma,
                         std::uint64_t seed) {
    if (p_percent < 0.0) throw std::invalid_argument("add_noise: negative noise level");
    ScatteringData out = data;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto perturb = [&](cplx v, double kabs) {
        const double s = (p_percent / 100.0) * std::pow(1.0 + kabs, gamma) * inv_sqrt2;
        return v + cplx(s * normal(rng), s * normal(rng));
    };
    if (out.layout == ScatteringData::Layout::Ray) {
        for (std::size_t i = 0; i < out.ray.r.size(); ++i)
            out.ray.v[i] = perturb(out.ray.v[i], out.ray.r[i]);
    } else {
        const Grid2D& g = out.field.grid;
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double kabs = std::abs(g.point(ix, iy));
                if (kabs >= out.R) continue;  // outside the data radius
                out.field.at(ix, iy) = perturb(out.field.at(ix, iy), kabs);
            }
    }
    return out;
}

std::vector<double> noise_radius_profile(const ScatteringData& clean,
                                         const ScatteringData& noisy,
                                         const std::vector<double>& radii) {
    if (clean.layout != noisy.layout)
        throw std::invalid_argument("noise_radius_profile: layout mismatch");

    // Collect (|k|, |difference|) pairs once, then take nested suprema.
    std::vector<std::pair<double, double>> samples;
    if (clean.layout == ScatteringData::Layout::Ray) {
        if (clean.ray.r != noisy.ray.r)
            throw std::invalid_argument("noise_radius_profile: ray grids differ");
        for (std::size_t i = 0; i < clean.ray.r.size(); ++i)
            samples.emplace_back(clean.ray.r[i], std::abs(clean.ray.v[i] - noisy.ray.v[i]));
    } else {
        if (!(clean.field.grid == noisy.field.grid))
            throw std::invalid_argument("noise_radius_profile: k grids differ");
        const Grid2D& g = clean.field.grid;
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                samples.emplace_back(std::abs(g.point(ix, iy)),
                                     std::abs(clean.field.at(ix, iy) - noisy.field.at(ix, iy)));
    }

    std::vector<double> profile(radii.size(), 0.0);
    for (std::size_t j = 0; j < radii.size(); ++j)
        for (const auto& [kabs, d] : samples)
            if (kabs <= radii[j]) profile[j] = std::max(profile[j], d);
    return profile;
}

double crossing_radius(const std::vector<double>& radii,
                       const std::vector<double>& profile, double threshold) {
    if (radii.size() != profile.size())
        throw std::invalid_argument("crossing_radius: size mismatch");
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (profile[i] > threshold) return radii[i];
    return std::numeric_limits<double>::infinity();
}

}  // namespace nlft
