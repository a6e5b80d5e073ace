#include "nlft/nft.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nlft/field_io.hpp"
#include "nlft/sweep.hpp"

namespace nlft {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

BeltramiCoefficient negated(const BeltramiCoefficient& mu) {
    BeltramiCoefficient out = mu;
    for (auto& v : out.mu.v) v = -v;
    return out;
}

TauPoint tau_point(const BeltramiCoefficient& mu, const CauchyTransform& cauchy,
                   cplx k, const CgoOptions& opt) {
    TauPoint out;
    out.plus = solve_cgo(mu, k, cauchy, opt);
    out.minus = solve_cgo(negated(mu), k, cauchy, opt);

    // conj(tau) is the mean of (rho_plus - rho_minus) over the plane.
    const Grid2D& g = mu.mu.grid;
    cplx sum = 0.0;
    for (std::size_t i = 0; i < out.plus.rho.v.size(); ++i)
        sum += out.plus.rho.v[i] - out.minus.rho.v[i];
    const double w = g.h * g.h / (2.0 * std::numbers::pi);
    out.tau = std::conj(sum * w);
    return out;
}

cplx tau_at(const BeltramiCoefficient& mu, cplx k, const CgoOptions& opt) {
    CauchyTransform cauchy(mu.mu.grid, 1.0);
    return tau_point(mu, cauchy, k, opt).tau;
}

cplx t_from_tau(cplx k, cplx tau) {
    return -4.0 * std::numbers::pi * cplx(0.0, 1.0) * std::conj(k) * tau;
}

ScatteringData radial_transform(const Phantom& phantom, double rmax, double step,
                                const ForwardOptions& opt) {
    if (!phantom.radial)
        throw std::invalid_argument(
            "radial_transform: phantom '" + phantom.name + "' is not radial");

    const Grid2D g = make_grid(opt.m_z, opt.s_z);
    const BeltramiCoefficient mu = sample_mu(phantom, g);
    const CauchyTransform cauchy(g, 1.0);
    CgoOptions copt;
    copt.tol = opt.tol;

    ScatteringData data;
    data.layout = ScatteringData::Layout::Ray;
    data.ray = make_ray(rmax, step);
    data.R = rmax;
    data.phantom = phantom.name;
    data.m_z = opt.m_z;
    data.s_z = opt.s_z;
    data.tol = opt.tol;

    std::function<cplx(std::size_t)> task = [&](std::size_t i) {
        return tau_point(mu, cauchy, cplx(data.ray.r[i], 0.0), copt).tau;
    };
    data.ray.v = parallel_sweep<cplx>(data.ray.r.size(), opt.workers, task);
    return data;
}

ScatteringData tau_grid(const Phantom& phantom, int m_k, double R,
                        const ForwardOptions& opt) {
    const Grid2D gk = make_grid(m_k, R);
    const Grid2D gz = make_grid(opt.m_z, opt.s_z);
    const BeltramiCoefficient mu = sample_mu(phantom, gz);
    const CauchyTransform cauchy(gz, 1.0);
    CgoOptions copt;
    copt.tol = opt.tol;

    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < gk.size(); ++i) {
        const cplx k = gk.point(int(i) % gk.n, int(i) / gk.n);
        if (std::abs(k) < R) nodes.push_back(i);
    }

    std::function<cplx(std::size_t)> task = [&](std::size_t j) {
        const std::size_t i = nodes[j];
        const cplx k = gk.point(int(i) % gk.n, int(i) / gk.n);
        return tau_point(mu, cauchy, k, copt).tau;
    };
    const std::vector<cplx> vals = parallel_sweep<cplx>(nodes.size(), opt.workers, task);

    ScatteringData data;
    data.layout = ScatteringData::Layout::Grid;
    data.field = ComplexField(gk);
    for (std::size_t j = 0; j < nodes.size(); ++j) data.field.v[nodes[j]] = vals[j];
    data.R = R;
    data.phantom = phantom.name;
    data.m_z = opt.m_z;
    data.s_z = opt.s_z;
    data.tol = opt.tol;
    return data;
}

cplx value_at(const ScatteringData& data, cplx k) {
    const double r = std::abs(k);
    if (r >= data.R) return 0.0;
    if (data.layout == ScatteringData::Layout::Ray) {
        if (r == 0.0) return data.ray.v.empty() ? cplx(0.0) : data.ray.v[0];
        return (k / r) * ray_value(data.ray, r);
    }
    return bilinear(data.field, k);
}

ScatteringData truncate(const ScatteringData& data, double r) {
    ScatteringData out = data;
    if (out.layout == ScatteringData::Layout::Ray) {
        for (std::size_t i = 0; i < out.ray.r.size(); ++i)
            if (out.ray.r[i] >= r) out.ray.v[i] = 0.0;
    } else {
        const Grid2D& g = out.field.grid;
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                if (std::abs(g.point(ix, iy)) >= r) out.field.at(ix, iy) = 0.0;
    }
    out.R = std::min(out.R, r);
    return out;
}

PivotData pivot_data(const BeltramiCoefficient& mu, cplx z0, int m_k, double R,
                     const ForwardOptions& opt) {
    if (std::abs(z0) <= 1.0)
        throw std::invalid_argument("pivot_data: z0 must lie outside the unit disc");
    const Grid2D gk = make_grid(m_k, R);
    const CauchyTransform cauchy(mu.mu.grid, 1.0);
    const BeltramiCoefficient mneg = negated(mu);
    CgoOptions copt;
    copt.tol = opt.tol;

    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < gk.size(); ++i) {
        const cplx k = gk.point(int(i) % gk.n, int(i) / gk.n);
        if (std::abs(k) < R) nodes.push_back(i);
    }

    struct Sample {
        cplx hp, hm, nu;
        bool clamped = false;
    };
    std::function<Sample(std::size_t)> task = [&](std::size_t j) {
        const std::size_t i = nodes[j];
        const cplx k = gk.point(int(i) % gk.n, int(i) / gk.n);
        const CgoSolution plus = solve_cgo(mu, k, cauchy, copt);
        const CgoSolution minus = solve_cgo(mneg, k, cauchy, copt);
        const cplx wp = omega_outside(plus, z0);
        const cplx wm = omega_outside(minus, z0);
        const cplx E = std::exp(cplx(0.0, 1.0) * k * z0);
        const cplx half_sum = 0.5 * (wp + wm);
        const cplx diff = wp - wm;

        Sample s;
        s.hp = E * (1.0 + half_sum);
        s.hm = cplx(0.0, 0.5) * std::conj(E * diff);
        // i hm / hp with the oscillations cancelled analytically: the ratio
        // conj(E)/E is the unimodular factor e_{-k}(z0), so no large
        // exponentials enter.
        s.nu = -0.5 * osc_ek(-k, z0) * std::conj(diff) / (1.0 + half_sum);
        const double a = std::abs(s.nu);
        if (a >= 1.0) {
            s.nu *= (1.0 - 1e-9) / a;
            s.clamped = true;
        }
        return s;
    };
    const std::vector<Sample> vals = parallel_sweep<Sample>(nodes.size(), opt.workers, task);

    PivotData out;
    out.z0 = z0;
    out.R = R;
    out.hplus = ComplexField(gk);
    out.hminus = ComplexField(gk);
    out.nu = ComplexField(gk);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out.hplus.v[nodes[j]] = vals[j].hp;
        out.hminus.v[nodes[j]] = vals[j].hm;
        out.nu.v[nodes[j]] = vals[j].nu;
        if (vals[j].clamped) ++out.clamped;
    }
    return out;
}

PivotPoint pivot_at(const BeltramiCoefficient& mu, cplx z0, cplx k,
                    const ForwardOptions& opt) {
    if (std::abs(z0) <= 1.0)
        throw std::invalid_argument("pivot_at: z0 must lie outside the unit disc");
    const CauchyTransform cauchy(mu.mu.grid, 1.0);
    CgoOptions copt;
    copt.tol = opt.tol;
    const CgoSolution plus = solve_cgo(mu, k, cauchy, copt);
    const CgoSolution minus = solve_cgo(negated(mu), k, cauchy, copt);
    const cplx wp = omega_outside(plus, z0);
    const cplx wm = omega_outside(minus, z0);
    const cplx E = std::exp(cplx(0.0, 1.0) * k * z0);

    PivotPoint p;
    p.z0 = z0;
    p.k = k;
    p.hplus = E * (1.0 + 0.5 * (wp + wm));
    p.hminus = cplx(0.0, 0.5) * std::conj(E * (wp - wm));
    return p;
}

cplx laurent_a1(const ComplexField& omega, double r0, int nodes) {
    if (nodes < 4) throw std::invalid_argument("laurent_a1: too few nodes");
    if (r0 <= 0.0 || r0 > omega.grid.s - omega.grid.h)
        throw std::invalid_argument("laurent_a1: circle leaves the grid");
    cplx sum = 0.0;
    for (int j = 0; j < nodes; ++j) {
        const double t = 2.0 * std::numbers::pi * j / nodes;
        const cplx e = cplx(std::cos(t), std::sin(t));
        sum += bilinear(omega, r0 * e) * e;
    }
    return sum * (r0 / nodes);
}

cplx shortcut_tau_from_traces(const ComplexField& omega_plus,
                              const ComplexField& omega_minus,
                              double r0, int nodes) {
    const cplx ap = laurent_a1(omega_plus, r0, nodes);
    const cplx am = laurent_a1(omega_minus, r0, nodes);
    return 0.5 * (std::conj(ap) - std::conj(am));
}

void save_scattering(const ScatteringData& data, const std::string& path,
                     const std::vector<std::string>& extra_meta) {
    if (data.layout == ScatteringData::Layout::Ray) {
        if (!ends_with(path, ".csv"))
            throw std::invalid_argument("save_scattering: ray data wants a .csv path");
        save_ray_csv(data.ray, path);
    } else {
        if (ends_with(path, ".csv"))
            throw std::invalid_argument("save_scattering: grid data wants an .nff path");
        save_nff1(data.field, PlaneKind::K, path);
    }
    std::string meta;
    meta += "R=" + fmt_double(data.R) + "\n";
    meta += "phantom=" + data.phantom + "\n";
    meta += "m_z=" + std::to_string(data.m_z) + "\n";
    meta += "s_z=" + fmt_double(data.s_z) + "\n";
    meta += "tol=" + fmt_double(data.tol) + "\n";
    for (const auto& line : extra_meta) meta += line + "\n";
    atomic_write(path + ".meta", meta);
}

ScatteringData load_scattering(const std::string& path) {
    ScatteringData data;
    if (ends_with(path, ".csv")) {
        data.layout = ScatteringData::Layout::Ray;
        data.ray = load_ray_csv(path);
        data.R = data.ray.rmax();
    } else {
        LoadedField lf = load_nff1(path);
        if (lf.kind != PlaneKind::K)
            throw std::runtime_error("load_scattering: " + path + " is not k-plane data");
        data.layout = ScatteringData::Layout::Grid;
        data.field = std::move(lf.field);
        data.R = data.field.grid.s;
    }

    const std::string meta_path = path + ".meta";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream in(meta_path);
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = line.substr(0, eq);
            const std::string val = line.substr(eq + 1);
            try {
                if (key == "R") data.R = std::stod(val);
                else if (key == "phantom") data.phantom = val;
                else if (key == "m_z") data.m_z = std::stoi(val);
                else if (key == "s_z") data.s_z = std::stod(val);
                else if (key == "tol") data.tol = std::stod(val);
            } catch (const std::exception&) {
                throw std::runtime_error("load_scattering: bad meta line '" + line + "'");
            }
        }
    }
    return data;
}

}  // namespace nlft
