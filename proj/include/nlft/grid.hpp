#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace nlft {

using cplx = std::complex<double>;

// Square periodic grid with 2^m points per axis covering [-s, s)^2.
// Axis samples are -s + j*h with h = s/2^(m-1); 0 is always the sample at
// index n/2.  Fields sampled on the grid are stored row-major as
// v[iy*n + ix] with the point (ix, iy) representing z = axis(ix) + i*axis(iy).
struct Grid2D {
    int m = 0;
    double s = 0.0;
    int n = 0;
    double h = 0.0;

    // Written as h*(j - n/2) rather than -s + h*j so that axis(n-j) is the
    // exact floating-point negation of axis(j); lattice symmetries (z -> -z,
    // z -> iz) then permute sample coordinates without rounding drift.
    double axis(int j) const { return h * (j - n / 2); }
    cplx point(int ix, int iy) const { return {axis(ix), axis(iy)}; }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * n + ix;
    }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    int zero_index() const { return n / 2; }

    // Angular lattice frequency of DFT bin j for functions of period 2s.
    // Bins above n/2 alias to negative frequencies; the Nyquist bin is mapped
    // to 0 so that spectral differentiation commutes with conjugation.
    double freq(int j) const {
        if (2 * j < n) return (M_PI / s) * j;
        if (2 * j == n) return 0.0;
        return (M_PI / s) * (j - n);
    }

    bool operator==(const Grid2D&) const = default;
};

Grid2D make_grid(int m, double s);

struct ComplexField {
    Grid2D grid;
    std::vector<cplx> v;

    ComplexField() = default;
    explicit ComplexField(const Grid2D& g) : grid(g), v(g.size(), cplx(0.0)) {}

    cplx& at(int ix, int iy) { return v[grid.index(ix, iy)]; }
    const cplx& at(int ix, int iy) const { return v[grid.index(ix, iy)]; }
};

// Uniformly spaced radial samples starting at r = 0.
struct RadialRay {
    std::vector<double> r;
    std::vector<cplx> v;

    double step() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
    double rmax() const { return r.empty() ? 0.0 : r.back(); }
};

RadialRay make_ray(double rmax, double step);

// Quadrature-weighted cyclic convolution on the torus:
//   out(z) = h^2 * sum_w kernel(w) field(z - w),
// where the offset w runs over the grid and z - w wraps modulo 2s per axis.
// The kernel is a sampled function of the offset coordinate (kernel.at is its
// value at the grid point), so a delta of weight 1/h^2 at the origin sample
// is the identity.
ComplexField periodic_convolve(const ComplexField& kernel, const ComplexField& field);

// Spectral derivatives d/dzbar = (d/dx + i d/dy)/2 and d/dz = (d/dx - i d/dy)/2.
ComplexField dbar_derivative(const ComplexField& f);
ComplexField d_derivative(const ComplexField& f);

// Bilinear interpolation at an arbitrary point; cells with missing corners
// (outside the sampled hull) contribute zero.
cplx bilinear(const ComplexField& f, cplx p);

// Linear interpolation along a ray; zero beyond the last sample.
cplx ray_value(const RadialRay& ray, double r);

double l2_norm(const std::vector<cplx>& v);

}  // namespace nlft
