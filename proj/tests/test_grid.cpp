#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "nlft/grid.hpp"

using namespace nlft;

namespace {

ComplexField random_field(const Grid2D& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexField f(g);
    for (auto& v : f.v) v = cplx(u(rng), u(rng));
    return f;
}

// Quadrature-weighted cyclic convolution by direct summation; the reference
// the FFT path has to reproduce.
ComplexField direct_convolve(const ComplexField& kernel, const ComplexField& field) {
    const Grid2D& g = kernel.grid;
    const int n = g.n;
    ComplexField out(g);
    for (int jy = 0; jy < n; ++jy)
        for (int jx = 0; jx < n; ++jx) {
            cplx acc = 0.0;
            for (int ly = 0; ly < n; ++ly)
                for (int lx = 0; lx < n; ++lx) {
                    const int dx = ((jx - lx + n / 2) % n + n) % n;
                    const int dy = ((jy - ly + n / 2) % n + n) % n;
                    acc += kernel.at(lx, ly) * field.at(dx, dy);
                }
            out.at(jx, jy) = acc * (g.h * g.h);
        }
    return out;
}

double rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(d) / l2_norm(b);
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid2D g = make_grid(4, 2.0);
    CHECK(g.n == 16);
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.axis(0) == doctest::Approx(-2.0));
    CHECK(g.axis(g.zero_index()) == 0.0);
    CHECK(g.point(g.n - 1, 0) == cplx(2.0 - 0.25, -2.0));
    CHECK(g.index(3, 5) == 5 * 16 + 3);
    CHECK_THROWS(make_grid(0, 1.0));
    CHECK_THROWS(make_grid(4, -1.0));
}

TEST_CASE("frequencies alias negatively and zero the Nyquist bin") {
    const Grid2D g = make_grid(3, 1.0);  // n = 8
    CHECK(g.freq(0) == 0.0);
    CHECK(g.freq(1) == doctest::Approx(M_PI));
    CHECK(g.freq(3) == doctest::Approx(3 * M_PI));
    CHECK(g.freq(4) == 0.0);  // Nyquist
    CHECK(g.freq(5) == doctest::Approx(-3 * M_PI));
    CHECK(g.freq(7) == doctest::Approx(-M_PI));
}

TEST_CASE("FFT convolution matches direct summation on a random 16x16 pair") {
    std::mt19937 rng(71);
    const Grid2D g = make_grid(4, 1.3);
    const ComplexField kernel = random_field(g, rng);
    const ComplexField field = random_field(g, rng);
    const ComplexField fast = periodic_convolve(kernel, field);
    const ComplexField slow = direct_convolve(kernel, field);
    CHECK(rel_diff(fast.v, slow.v) <= 1e-10);
}

TEST_CASE("delta kernel at the origin sample is the identity") {
    std::mt19937 rng(5);
    const Grid2D g = make_grid(4, 2.0);
    const ComplexField field = random_field(g, rng);
    ComplexField delta(g);
    delta.at(g.zero_index(), g.zero_index()) = 1.0 / (g.h * g.h);
    const ComplexField out = periodic_convolve(delta, field);
    for (std::size_t i = 0; i < field.v.size(); ++i)
        CHECK(std::abs(out.v[i] - field.v[i]) <= 1e-12);
}

TEST_CASE("convolution rejects mismatched grids") {
    const ComplexField a((make_grid(3, 1.0)));
    const ComplexField b((make_grid(4, 1.0)));
    CHECK_THROWS(periodic_convolve(a, b));
}

TEST_CASE("spectral derivatives are exact on lattice exponentials") {
    const Grid2D g = make_grid(5, 1.7);
    // f = exp(i(xi_x x + xi_y y)) for representable lattice frequencies.
    const double xi_x = 3.0 * M_PI / g.s;
    const double xi_y = -5.0 * M_PI / g.s;
    ComplexField f(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double phase = xi_x * g.axis(ix) + xi_y * g.axis(iy);
            f.at(ix, iy) = cplx(std::cos(phase), std::sin(phase));
        }
    const ComplexField db = dbar_derivative(f);
    const ComplexField dz = d_derivative(f);
    const cplx mult_db = 0.5 * cplx(-xi_y, xi_x);
    const cplx mult_dz = 0.5 * cplx(xi_y, xi_x);
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        CHECK(std::abs(db.v[i] - mult_db * f.v[i]) <= 1e-11);
        CHECK(std::abs(dz.v[i] - mult_dz * f.v[i]) <= 1e-11);
    }
}

TEST_CASE("dbar of a conjugate equals the conjugate of d") {
    std::mt19937 rng(9);
    const Grid2D g = make_grid(5, 2.1);
    const ComplexField f = random_field(g, rng);
    ComplexField fc(g);
    for (std::size_t i = 0; i < f.v.size(); ++i) fc.v[i] = std::conj(f.v[i]);
    const ComplexField lhs = dbar_derivative(fc);
    const ComplexField rhs = d_derivative(f);
    for (std::size_t i = 0; i < f.v.size(); ++i)
        CHECK(std::abs(lhs.v[i] - std::conj(rhs.v[i])) <= 1e-9);
}

TEST_CASE("bilinear interpolation is exact at nodes and on affine fields") {
    const Grid2D g = make_grid(4, 2.0);
    ComplexField f(g);
    const cplx a(0.3, -0.7), b(1.1, 0.2);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            f.at(ix, iy) = a * g.axis(ix) + b * g.axis(iy);
    CHECK(std::abs(bilinear(f, g.point(3, 7)) - f.at(3, 7)) <= 1e-14);
    const cplx p(0.31, -0.42);
    CHECK(std::abs(bilinear(f, p) - (a * p.real() + b * p.imag())) <= 1e-13);
    // Outside the sampled hull the interpolant vanishes.
    CHECK(bilinear(f, cplx(5.0, 0.0)) == cplx(0.0));
}

TEST_CASE("rays sample uniformly and interpolate linearly") {
    const RadialRay ray = make_ray(2.0, 0.5);
    REQUIRE(ray.r.size() == 5);
    CHECK(ray.r.front() == 0.0);
    CHECK(ray.rmax() == doctest::Approx(2.0));
    RadialRay lin = ray;
    for (std::size_t i = 0; i < lin.r.size(); ++i) lin.v[i] = cplx(2.0 * lin.r[i], 0.0);
    CHECK(std::abs(ray_value(lin, 0.75) - cplx(1.5, 0.0)) <= 1e-14);
    CHECK(ray_value(lin, 3.0) == cplx(0.0));
}
