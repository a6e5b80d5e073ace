#include "nlft/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "nlft/fft.hpp"

namespace nlft {

Grid2D make_grid(int m, double s) {
    if (m < 1 || m > 30) throw std::invalid_argument("make_grid: m must be in [1, 30]");
    if (!(s > 0.0)) throw std::invalid_argument("make_grid: s must be positive");
    Grid2D g;
    g.m = m;
    g.s = s;
    g.n = 1 << m;
    g.h = s / static_cast<double>(1 << (m - 1));
    return g;
}

RadialRay make_ray(double rmax, double step) {
    if (!(step > 0.0) || !(rmax >= 0.0))
        throw std::invalid_argument("make_ray: need step > 0 and rmax >= 0");
    RadialRay ray;
    const int count = static_cast<int>(std::floor(rmax / step + 0.5)) + 1;
    ray.r.reserve(count);
    ray.v.assign(count, cplx(0.0));
    for (int i = 0; i < count; ++i) ray.r.push_back(step * i);
    return ray;
}

ComplexField periodic_convolve(const ComplexField& kernel, const ComplexField& field) {
    if (!(kernel.grid == field.grid))
        throw std::invalid_argument("periodic_convolve: grids must match");
    const Grid2D& g = kernel.grid;
    const int n = g.n;
    const int half = n / 2;

    // Index-space cyclic convolution pairs index difference d with the offset
    // coordinate d*h - s; shifting the kernel by n/2 per axis realigns it so
    // that difference d corresponds to offset d*h wrapped into [-s, s).
    ComplexField ka(g);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            ka.at(ix, iy) = kernel.at((ix + half) % n, (iy + half) % n);

    ComplexField fa = field;
    const Fft2& fft = Fft2::plan_for(n);
    fft.forward(ka.v.data());
    fft.forward(fa.v.data());
    for (std::size_t i = 0; i < g.size(); ++i) fa.v[i] *= ka.v[i];
    fft.backward(fa.v.data());

    const double w = g.h * g.h;
    for (auto& x : fa.v) x *= w;
    return fa;
}

namespace {

enum class DerivKind { Dbar, D };

ComplexField spectral_derivative(const ComplexField& f, DerivKind kind) {
    const Grid2D& g = f.grid;
    ComplexField out = f;
    const Fft2& fft = Fft2::plan_for(g.n);
    fft.forward(out.v.data());
    for (int iy = 0; iy < g.n; ++iy) {
        const double xy = g.freq(iy);
        for (int ix = 0; ix < g.n; ++ix) {
            const double xx = g.freq(ix);
            // Plane wave e^{i(xx*x + xy*y)}: dbar -> (i*xx - xy)/2, d -> (i*xx + xy)/2.
            const cplx mult = (kind == DerivKind::Dbar) ? cplx(-xy, xx) * 0.5
                                                        : cplx(xy, xx) * 0.5;
            out.at(ix, iy) *= mult;
        }
    }
    fft.backward(out.v.data());
    return out;
}

}  // namespace

ComplexField dbar_derivative(const ComplexField& f) {
    return spectral_derivative(f, DerivKind::Dbar);
}

ComplexField d_derivative(const ComplexField& f) {
    return spectral_derivative(f, DerivKind::D);
}

cplx bilinear(const ComplexField& f, cplx p) {
    const Grid2D& g = f.grid;
    const double tx = (p.real() + g.s) / g.h;
    const double ty = (p.imag() + g.s) / g.h;
    const int ix = static_cast<int>(std::floor(tx));
    const int iy = static_cast<int>(std::floor(ty));
    const double fx = tx - ix;
    const double fy = ty - iy;
    auto corner = [&](int cx, int cy) -> cplx {
        if (cx < 0 || cx >= g.n || cy < 0 || cy >= g.n) return cplx(0.0);
        return f.at(cx, cy);
    };
    return corner(ix, iy) * ((1 - fx) * (1 - fy)) + corner(ix + 1, iy) * (fx * (1 - fy)) +
           corner(ix, iy + 1) * ((1 - fx) * fy) + corner(ix + 1, iy + 1) * (fx * fy);
}

cplx ray_value(const RadialRay& ray, double r) {
    if (ray.r.empty() || r < 0.0 || r > ray.rmax()) return cplx(0.0);
    const double step = ray.step();
    if (step <= 0.0) return ray.v.empty() ? cplx(0.0) : ray.v[0];
    const double t = r / step;
    const std::size_t i = std::min(static_cast<std::size_t>(t), ray.r.size() - 2);
    const double fr = t - i;
    return ray.v[i] * (1.0 - fr) + ray.v[i + 1] * fr;
}

double l2_norm(const std::vector<cplx>& v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

}  // namespace nlft
