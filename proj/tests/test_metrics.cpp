#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "nlft/metrics.hpp"

using namespace nlft;

namespace {

RadialRay ray_of(std::initializer_list<cplx> vals, double step = 0.5) {
    RadialRay ray;
    double r = 0.0;
    for (const cplx v : vals) {
        ray.r.push_back(r);
        ray.v.push_back(v);
        r += step;
    }
    return ray;
}

ScatteringData ray_data(const RadialRay& ray) {
    ScatteringData d;
    d.layout = ScatteringData::Layout::Ray;
    d.ray = ray;
    d.R = ray.rmax();
    return d;
}

}  // namespace

TEST_CASE("band discrepancy compares imaginary parts against the reference") {
    const RadialRay b = ray_of({cplx(0, 1), cplx(0, 2), cplx(0, 4), cplx(0, 1)});
    RadialRay a = b;
    for (auto& v : a.v) v *= 2.0;  // Im a - Im b = Im b pointwise
    CHECK(band_discrepancy(a, b, 0.0, 1.5) == doctest::Approx(100.0));
    CHECK(band_discrepancy(b, a, 0.0, 1.5) == doctest::Approx(50.0));
    CHECK(band_discrepancy(b, b, 0.0, 1.5) == 0.0);

    // Band selection: restricting to [1, 1.5] sees only the last two nodes.
    RadialRay c = b;
    c.v[0] += cplx(0, 100);  // outside the band, must not matter
    CHECK(band_discrepancy(c, b, 1.0, 1.5) == 0.0);

    CHECK_THROWS(band_discrepancy(a, b, 5.0, 6.0));          // empty band
    CHECK_THROWS(band_discrepancy(a, ray_of({cplx(0, 1)}), 0.0, 1.0));  // grids differ
    const RadialRay zero = ray_of({cplx(0, 0), cplx(0, 0), cplx(0, 0), cplx(0, 0)});
    CHECK_THROWS(band_discrepancy(a, zero, 0.0, 1.5));        // zero denominator
}

TEST_CASE("max_imag picks the largest magnitude imaginary part") {
    CHECK(max_imag({}) == 0.0);
    CHECK(max_imag({cplx(5, 0.1), cplx(0, -0.7), cplx(1, 0.3)}) == doctest::Approx(0.7));
}

TEST_CASE("sup and square-mean errors are percentages of the truth") {
    const std::vector<cplx> truth = {cplx(1, 0), cplx(0, 2), cplx(-2, 0)};
    std::vector<cplx> twice = truth;
    for (auto& v : twice) v *= 2.0;
    const SupSqr d = sup_sqr(twice, truth);
    CHECK(d.sup_pct == doctest::Approx(100.0));
    CHECK(d.sqr_pct == doctest::Approx(100.0));

    const SupSqr zero = sup_sqr(truth, truth);
    CHECK(zero.sup_pct == 0.0);
    CHECK(zero.sqr_pct == 0.0);

    // Mask: an arbitrarily wrong masked-out entry changes nothing.
    std::vector<cplx> offone = truth;
    offone[1] = cplx(1000, 0);
    const SupSqr masked = sup_sqr(offone, truth, {1, 0, 1});
    CHECK(masked.sup_pct == 0.0);

    // sup error concentrates where the difference is, sqr spreads it.
    std::vector<cplx> bump = truth;
    bump[2] += cplx(1, 0);
    const SupSqr b = sup_sqr(bump, truth);
    CHECK(b.sup_pct == doctest::Approx(50.0));
    CHECK(b.sqr_pct == doctest::Approx(100.0 / 3.0));

    CHECK_THROWS(sup_sqr(truth, {cplx(1, 0)}));
    CHECK_THROWS(sup_sqr({cplx(0, 0)}, {cplx(0, 0)}));  // zero reference
}

TEST_CASE("noise is reproducible, scaled, and confined to the data") {
    const RadialRay ray = ray_of({cplx(0, 1), cplx(0, 0.8), cplx(0, 0.5),
                                  cplx(0, 0.2), cplx(0, 0.1)});
    const ScatteringData clean = ray_data(ray);

    const ScatteringData n1 = add_noise(clean, 1.0, 1.5, 42);
    const ScatteringData n2 = add_noise(clean, 1.0, 1.5, 42);
    const ScatteringData n3 = add_noise(clean, 1.0, 1.5, 43);
    REQUIRE(n1.ray.v.size() == ray.v.size());
    bool all_same = true, any_diff_seed = false, any_moved = false;
    for (std::size_t i = 0; i < ray.v.size(); ++i) {
        all_same = all_same && n1.ray.v[i] == n2.ray.v[i];
        any_diff_seed = any_diff_seed || n1.ray.v[i] != n3.ray.v[i];
        any_moved = any_moved || n1.ray.v[i] != clean.ray.v[i];
    }
    CHECK(all_same);
    CHECK(any_diff_seed);
    CHECK(any_moved);

    // Zero amplitude is the identity.
    const ScatteringData n0 = add_noise(clean, 0.0, 1.5, 42);
    for (std::size_t i = 0; i < ray.v.size(); ++i) CHECK(n0.ray.v[i] == clean.ray.v[i]);

    // The (1+|k|)^gamma envelope: measure empirically over many seeds at the
    // first and last node; the ratio of RMS amplitudes tracks the envelope.
    double rms0 = 0.0, rms4 = 0.0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        const ScatteringData n = add_noise(clean, 1.0, 1.5, 1000 + t);
        rms0 += std::norm(n.ray.v[0] - clean.ray.v[0]);
        rms4 += std::norm(n.ray.v[4] - clean.ray.v[4]);
    }
    rms0 = std::sqrt(rms0 / trials);
    rms4 = std::sqrt(rms4 / trials);
    const double expect0 = 0.01 * std::pow(1.0 + ray.r[0], 1.5);
    const double expect4 = 0.01 * std::pow(1.0 + ray.r[4], 1.5);
    CHECK(rms0 == doctest::Approx(expect0).epsilon(0.15));
    CHECK(rms4 == doctest::Approx(expect4).epsilon(0.15));
}

TEST_CASE("grid noise leaves samples beyond the data radius untouched") {
    ScatteringData clean;
    clean.layout = ScatteringData::Layout::Grid;
    clean.R = 1.5;
    const Grid2D g = make_grid(4, 2.0);
    clean.field = ComplexField(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            if (std::abs(g.point(ix, iy)) < clean.R) clean.field.at(ix, iy) = cplx(0, 0.3);

    const ScatteringData noisy = add_noise(clean, 5.0, 1.5, 7);
    int touched = 0;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const bool in = std::abs(g.point(ix, iy)) < clean.R;
            if (!in) {
                CHECK(noisy.field.at(ix, iy) == cplx(0.0));
            } else if (noisy.field.at(ix, iy) != clean.field.at(ix, iy)) {
                ++touched;
            }
        }
    CHECK(touched > 0);
}

TEST_CASE("noise profile is a nested supremum over discs") {
    const RadialRay ray = ray_of({cplx(0, 1), cplx(0, 1), cplx(0, 1), cplx(0, 1)});
    const ScatteringData clean = ray_data(ray);
    ScatteringData noisy = clean;
    noisy.ray.v[1] += cplx(0.2, 0.0);
    noisy.ray.v[3] += cplx(0.0, -0.6);

    const std::vector<double> radii = {0.0, 0.5, 1.0, 1.5};
    const std::vector<double> prof = noise_radius_profile(clean, noisy, radii);
    REQUIRE(prof.size() == 4);
    CHECK(prof[0] == doctest::Approx(0.0));
    CHECK(prof[1] == doctest::Approx(0.2));
    CHECK(prof[2] == doctest::Approx(0.2));
    CHECK(prof[3] == doctest::Approx(0.6));
    for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] >= prof[i - 1]);

    CHECK(crossing_radius(radii, prof, 0.5) == doctest::Approx(1.5));
    CHECK(crossing_radius(radii, prof, 0.1) == doctest::Approx(0.5));
    CHECK(crossing_radius(radii, prof, 0.7) == std::numeric_limits<double>::infinity());
}
