#include "nlft/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "nlft/dbar.hpp"
#include "nlft/field_io.hpp"
#include "nlft/metrics.hpp"
#include "nlft/nft.hpp"
#include "nlft/transport.hpp"

extern char** environ;

namespace nlft {

const char* const kVersion = "0.1.0";

namespace {

const char* kExecutionKeys[] = {"workers", "out", "allow_large"};

bool execution_only(const std::string& key) {
    for (const char* k : kExecutionKeys)
        if (key == k) return true;
    return false;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

int parse_workers(const Config& cfg) {
    const int w = cfg.get_int("workers", 1);
    if (w < 1) throw std::invalid_argument("workers must be >= 1");
    return w;
}

KrylovMethod parse_method(const Config& cfg) {
    const std::string m = lower(cfg.get("method", "realified"));
    if (m == "realified") return KrylovMethod::Realified;
    if (m == "twoterm") return KrylovMethod::TwoTerm;
    throw std::invalid_argument("method must be realified or twoterm, got '" + m + "'");
}

ForwardOptions forward_options(const Config& cfg, int default_mz) {
    ForwardOptions fwd;
    fwd.m_z = cfg.get_int("mz", default_mz);
    fwd.s_z = cfg.get_double("sz", 2.1);
    fwd.tol = cfg.get_double("tol", 1e-8);
    fwd.workers = parse_workers(cfg);
    if (fwd.m_z < 3) throw std::invalid_argument("mz must be at least 3");
    if (fwd.s_z <= 1.0)
        throw std::invalid_argument("sz must exceed 1 (the coefficient support)");
    return fwd;
}

// Computation first, writes later: drivers queue artifacts here and flush
// once everything has been produced, so a failure never leaves partial runs.
struct ArtifactSet {
    std::string dir;
    std::vector<std::pair<std::string, std::string>> files;  // name, bytes
    std::vector<std::pair<std::string, std::string>> metas;  // name, lines

    void add(const std::string& name, std::string bytes) {
        files.emplace_back(name, std::move(bytes));
    }
    void add_meta(const std::string& name, std::string lines) {
        metas.emplace_back(name + ".meta", std::move(lines));
    }
    std::vector<std::string> flush() {
        std::vector<std::string> names;
        for (const auto& [name, bytes] : files) {
            atomic_write(dir + "/" + name, bytes);
            names.push_back(name);
        }
        for (const auto& [name, lines] : metas) atomic_write(dir + "/" + name, lines);
        return names;
    }
};

std::string csv_of_points(const std::vector<cplx>& zs, const std::vector<cplx>& vals,
                          const std::string& value_name) {
    std::ostringstream out;
    out << "x,y,re_" << value_name << ",im_" << value_name << "\n";
    for (std::size_t i = 0; i < zs.size(); ++i)
        out << fmt(zs[i].real()) << ',' << fmt(zs[i].imag()) << ','
            << fmt(vals[i].real()) << ',' << fmt(vals[i].imag()) << "\n";
    return out.str();
}

std::string csv_of_ray(const std::vector<double>& r, const std::vector<double>& v,
                       const std::string& value_name) {
    std::ostringstream out;
    out << "r," << value_name << "\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        out << fmt(r[i]) << ',' << fmt(v[i]) << "\n";
    return out.str();
}

// Sup/sqr of approx vs the phantom truth at the given nodes.
SupSqr error_vs_truth(const std::vector<cplx>& approx, const std::vector<cplx>& zs,
                      const Phantom& truth, const std::vector<char>& keep) {
    std::vector<cplx> t(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) t[i] = truth.eval(zs[i]);
    return sup_sqr(approx, t, keep);
}

}  // namespace

bool Config::has(const std::string& key) const { return kv.count(lower(key)) > 0; }

void Config::set(const std::string& key, const std::string& value) {
    kv[lower(key)] = value;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(lower(key));
    return it == kv.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    const auto it = kv.find(lower(key));
    if (it == kv.end() || it->second.empty())
        throw std::invalid_argument("missing required config key '" + key + "'");
    return it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = kv.find(lower(key));
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' expects an integer, got '" +
                                    it->second + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(lower(key));
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' expects a number, got '" +
                                    it->second + "'");
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv.find(lower(key));
    if (it == kv.end()) return fallback;
    const std::string v = lower(it->second);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" +
                                it->second + "'");
}

cplx Config::get_cplx(const std::string& key, cplx fallback) const {
    const auto it = kv.find(lower(key));
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    const auto comma = v.find(',');
    try {
        if (comma == std::string::npos) return cplx(std::stod(v), 0.0);
        return cplx(std::stod(v.substr(0, comma)), std::stod(v.substr(comma + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' expects 'x,y', got '" + v +
                                    "'");
    }
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::string& fallback) const {
    const std::string v = get(key, fallback);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key +
                                        "' expects comma-separated numbers, got '" + v + "'");
        }
    }
    if (out.empty())
        throw std::invalid_argument("config key '" + key + "' is an empty list");
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (execution_only(k)) continue;
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value, got '" + t + "'");
        cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

void apply_env_overrides(Config& cfg) {
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind("NLFT_", 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq <= 5) continue;
        cfg.set(lower(entry.substr(5, eq - 5)), entry.substr(eq + 1));
    }
}

std::uint64_t config_hash(const Config& cfg) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : cfg.canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const Config& cfg) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(cfg));
    return std::string(buf, 8);
}

std::string make_run_dir(const std::string& base, const std::string& command,
                         const Config& cfg) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    const std::string stem =
        base + "/" + command + "-" + stamp + "-" + config_hash_hex(cfg);
    std::string dir = stem;
    for (int i = 2; std::filesystem::exists(dir); ++i)
        dir = stem + "-" + std::to_string(i);
    std::filesystem::create_directories(dir);
    return dir;
}

void check_desk_caps(const Config& cfg, std::ostream& warn) {
    double rmax = 0.0;
    for (const char* key : {"r"}) rmax = std::max(rmax, cfg.get_double(key, 0.0));
    if (cfg.has("r_list"))
        for (const double r : cfg.get_list("r_list", ""))
            rmax = std::max(rmax, r);
    const int mz = cfg.get_int("mz", 0);
    const int mk = std::max(cfg.get_int("mk", 0), cfg.get_int("rmk", 0));
    const bool over = mz > 9 || mk > 9 || rmax > 20.0;
    if (!over) return;
    if (!cfg.get_bool("allow_large", false))
        throw std::invalid_argument(
            "parameters exceed the desk-scale caps (mz <= 9, mk <= 9, R <= 20); "
            "pass --allow-large to run anyway");
    warn << "warning: parameters exceed desk-scale caps; expect long runtimes "
            "and high memory use\n";
}

Phantom resolve_phantom(const std::string& id) {
    if (std::filesystem::exists(id)) return load_phantom_file(id);
    return make_phantom(id);
}

std::vector<cplx> parse_zgrid(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "ray") {
        const int count = rest.empty() ? 64 : std::stoi(rest);
        if (count < 2) throw std::invalid_argument("zgrid ray wants at least 2 points");
        return radial_points(count);
    }
    if (kind == "disc") {
        const auto comma = rest.find(',');
        const int m = rest.empty() ? 5 : std::stoi(rest.substr(0, comma));
        const double s =
            comma == std::string::npos ? 1.05 : std::stod(rest.substr(comma + 1));
        if (m < 2 || m > 12 || s <= 0)
            throw std::invalid_argument("zgrid disc spec out of range: '" + spec + "'");
        return disc_points(make_grid(m, s));
    }
    throw std::invalid_argument("zgrid spec must be ray:<count> or disc:<m>[,<s>], got '" +
                                spec + "'");
}

std::vector<std::string> run_forward(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.require("phantom"));
    const std::string mode = lower(cfg.get("mode", "ray"));
    const double R = cfg.get_double("r", 5.0);
    if (R <= 0) throw std::invalid_argument("R must be positive");
    const ForwardOptions fwd = forward_options(cfg, 8);

    if (mode == "ray") {
        const double step = cfg.get_double("step", 0.1);
        const ScatteringData data = radial_transform(phantom, R, step, fwd);
        save_scattering(data, dir + "/scattering.csv");
        return {"scattering.csv"};
    }
    if (mode == "grid") {
        const int m_k = cfg.get_int("mk", 7);
        const ScatteringData data = tau_grid(phantom, m_k, R, fwd);
        save_scattering(data, dir + "/scattering.nff");
        return {"scattering.nff"};
    }
    throw std::invalid_argument("mode must be ray or grid, got '" + mode + "'");
}

std::vector<std::string> run_invert_shortcut(const Config& cfg, const std::string& dir) {
    const ScatteringData data = load_scattering(cfg.require("tau"));
    const double R = cfg.get_double("r", data.R);

    ShortcutOptions opt;
    opt.m_k = cfg.get_int("mk", 7);
    opt.eps = cfg.get_double("eps", 0.0);
    opt.tol = cfg.get_double("tol", 1e-8);
    opt.method = parse_method(cfg);
    opt.workers = parse_workers(cfg);

    const std::vector<cplx> zs = parse_zgrid(cfg.get("zgrid", "ray:64"));
    const ShortcutRecon rec = reconstruct_shortcut(data, R, zs, opt);

    ArtifactSet art{dir, {}, {}};
    art.add("sigma.csv", csv_of_points(rec.z, rec.sigma, "sigma"));
    art.add("m0.csv", csv_of_points(rec.z, rec.m0, "m0"));
    return art.flush();
}

std::vector<std::string> run_invert_transport(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.require("phantom"));
    const ForwardOptions fwd = forward_options(cfg, 7);
    const BeltramiCoefficient mu = sample_mu(phantom, make_grid(fwd.m_z, fwd.s_z));

    const cplx z0 = cfg.get_cplx("z0", phantom.suggested_z0);
    const cplx k0 = cfg.get_cplx("k0", cplx(1.0, 0.0));
    const double R = cfg.get_double("r", 10.0);
    const int m_k = cfg.get_int("mk", 6);

    const PivotData piv = pivot_data(mu, z0, m_k, R, fwd);
    const PivotPoint at_k0 = pivot_at(mu, z0, k0, fwd);

    const Grid2D zgrid = make_grid(cfg.get_int("zm", 6), cfg.get_double("zs", 1.05));
    TransportOptions topt;
    topt.tol = cfg.get_double("ttol", 1e-6);
    topt.method = parse_method(cfg);
    topt.workers = parse_workers(cfg);
    const TransportRecon rec = reconstruct_transport(piv, at_k0, zgrid, topt);

    std::ostringstream diag;
    diag << "z0=" << fmt(z0.real()) << ',' << fmt(z0.imag()) << "\n"
         << "k0=" << fmt(k0.real()) << ',' << fmt(k0.imag()) << "\n"
         << "R=" << fmt(R) << "\n"
         << "mask_fraction=" << fmt(rec.mask_fraction) << "\n"
         << "filled=" << rec.filled << "\n"
         << "clamped=" << rec.clamped << "\n"
         << "pivot_clamped=" << piv.clamped << "\n";

    ArtifactSet art{dir, {}, {}};
    art.add("sigma.nff", nff1_bytes(rec.sigma, PlaneKind::Z));
    art.add("fmu.nff", nff1_bytes(rec.f_mu, PlaneKind::Z));
    art.add_meta("sigma.nff", diag.str());
    return art.flush();
}

std::vector<std::string> run_compare(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.require("phantom"));
    const std::vector<double> r_list = cfg.get_list("r_list", "10");
    const ForwardOptions fwd = forward_options(cfg, 7);
    const BeltramiCoefficient mu = sample_mu(phantom, make_grid(fwd.m_z, fwd.s_z));

    const cplx z0 = cfg.get_cplx("z0", phantom.suggested_z0);
    const cplx k0 = cfg.get_cplx("k0", cplx(1.0, 0.0));
    const int m_k = cfg.get_int("mk", 6);

    ShortcutOptions sopt;
    sopt.m_k = cfg.get_int("rmk", 7);
    sopt.eps = cfg.get_double("eps", 0.0);
    sopt.tol = cfg.get_double("tol", 1e-8);
    sopt.workers = parse_workers(cfg);
    TransportOptions topt;
    topt.tol = cfg.get_double("ttol", 1e-6);
    topt.workers = sopt.workers;

    const Grid2D zgrid = make_grid(cfg.get_int("zm", 5), cfg.get_double("zs", 1.05));
    const std::vector<cplx> znodes = disc_points(zgrid);

    std::ostringstream table;
    table << "r,shortcut_sup,shortcut_sqr,transport_sup,transport_sqr,"
             "transport_near_sqr,transport_far_sqr,transport_mask_fraction\n";

    for (const double R : r_list) {
        if (R <= 0) throw std::invalid_argument("R values must be positive");
        const ScatteringData data = phantom.radial
                                        ? radial_transform(phantom, R, cfg.get_double("step", 0.1), fwd)
                                        : tau_grid(phantom, m_k, R, fwd);
        const ShortcutRecon sc = reconstruct_shortcut(data, R, znodes, sopt);
        const SupSqr sc_err =
            error_vs_truth(sc.sigma, znodes, phantom, std::vector<char>(znodes.size(), 1));

        const PivotData piv = pivot_data(mu, z0, m_k, R, fwd);
        const PivotPoint at_k0 = pivot_at(mu, z0, k0, fwd);
        const TransportRecon tr = reconstruct_transport(piv, at_k0, zgrid, topt);

        std::vector<cplx> tr_sigma, tr_z;
        std::vector<char> keep, near, far;
        for (int iy = 0; iy < zgrid.n; ++iy)
            for (int ix = 0; ix < zgrid.n; ++ix) {
                const std::size_t i = zgrid.index(ix, iy);
                if (!tr.inside[i]) continue;
                const cplx z = zgrid.point(ix, iy);
                tr_sigma.push_back(tr.sigma.v[i]);
                tr_z.push_back(z);
                keep.push_back(tr.valid[i]);
                const bool is_near = (z * std::conj(z0)).real() >= 0.0;
                near.push_back(tr.valid[i] && is_near);
                far.push_back(tr.valid[i] && !is_near);
            }
        const SupSqr tr_err = error_vs_truth(tr_sigma, tr_z, phantom, keep);
        const SupSqr tr_near = error_vs_truth(tr_sigma, tr_z, phantom, near);
        const SupSqr tr_far = error_vs_truth(tr_sigma, tr_z, phantom, far);

        table << fmt_short(R) << ',' << fmt(sc_err.sup_pct) << ',' << fmt(sc_err.sqr_pct)
              << ',' << fmt(tr_err.sup_pct) << ',' << fmt(tr_err.sqr_pct) << ','
              << fmt(tr_near.sqr_pct) << ',' << fmt(tr_far.sqr_pct) << ','
              << fmt(tr.mask_fraction) << "\n";
    }

    ArtifactSet art{dir, {}, {}};
    art.add("compare.csv", table.str());
    return art.flush();
}

std::vector<std::string> run_cgo_compare(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.require("phantom"));
    const ForwardOptions fwd = forward_options(cfg, 7);
    const BeltramiCoefficient mu = sample_mu(phantom, make_grid(fwd.m_z, fwd.s_z));

    const cplx z0 = cfg.get_cplx("z0", phantom.suggested_z0);
    const cplx k0 = cfg.get_cplx("k0", cplx(1.0, 0.0));
    const double R = cfg.get_double("r", 20.0);
    const int m_k = cfg.get_int("mk", 7);

    const PivotData piv = pivot_data(mu, z0, m_k, R, fwd);
    const PivotPoint at_k0 = pivot_at(mu, z0, k0, fwd);

    TransportOptions topt;
    topt.tol = cfg.get_double("ttol", 1e-6);
    topt.method = parse_method(cfg);
    topt.workers = parse_workers(cfg);
    const CgoComparison cmp = compare_transported_cgo(mu, piv, at_k0, topt);

    ComplexField diff(cmp.zgrid);
    for (std::size_t i = 0; i < diff.v.size(); ++i)
        diff.v[i] = cmp.transported.v[i] - cmp.actual.v[i];

    std::ostringstream err;
    err << "sup_pct=" << fmt(cmp.sup_pct) << "\n"
        << "sqr_pct=" << fmt(cmp.sqr_pct) << "\n"
        << "mask_fraction=" << fmt(cmp.mask_fraction) << "\n";

    ArtifactSet art{dir, {}, {}};
    art.add("transported.nff", nff1_bytes(cmp.transported, PlaneKind::Z));
    art.add("actual.nff", nff1_bytes(cmp.actual, PlaneKind::Z));
    art.add("diff.nff", nff1_bytes(diff, PlaneKind::Z));
    art.add("errors.txt", err.str());
    return art.flush();
}

std::vector<std::string> run_gibbs(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.get("phantom", "sigma1"));
    if (!phantom.radial)
        throw std::invalid_argument("gibbs needs a radial phantom (sigma1 or sigma2)");
    std::vector<double> r_list = cfg.get_list("r_list", "5,10,15,20");
    std::sort(r_list.begin(), r_list.end());
    const double rmax = r_list.back();

    const ForwardOptions fwd = forward_options(cfg, 8);
    const ScatteringData data =
        radial_transform(phantom, rmax, cfg.get_double("step", 0.1), fwd);

    ShortcutOptions sopt;
    sopt.m_k = cfg.get_int("mk", 8);
    sopt.eps = cfg.get_double("eps", 0.0);
    sopt.tol = cfg.get_double("tol", 1e-8);
    sopt.workers = parse_workers(cfg);

    const std::vector<cplx> zs = radial_points(cfg.get_int("points", 64));

    ArtifactSet art{dir, {}, {}};
    for (const double R : r_list) {
        const ShortcutRecon rec = reconstruct_shortcut(data, R, zs, sopt);
        art.add("profile_R" + fmt_short(R) + ".csv",
                csv_of_points(rec.z, rec.sigma, "sigma"));
    }
    save_scattering(data, dir + "/scattering.csv");
    std::vector<std::string> names = art.flush();
    names.insert(names.begin(), "scattering.csv");
    return names;
}

std::vector<std::string> run_noise(const Config& cfg, const std::string& dir) {
    const Phantom phantom = resolve_phantom(cfg.get("phantom", "sigma1"));
    if (!phantom.radial)
        throw std::invalid_argument("noise study needs a radial phantom");
    const double R = cfg.get_double("r", 6.0);
    const ForwardOptions fwd = forward_options(cfg, 7);
    const ScatteringData clean =
        radial_transform(phantom, R, cfg.get_double("step", 0.1), fwd);

    const std::vector<double> p_list = cfg.get_list("p_list", "0.1,0.5,1,5");
    const double gamma = cfg.get_double("gamma", 1.5);
    const double threshold = cfg.get_double("threshold", 0.5);
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 7));

    std::vector<double> radii;
    for (double r = 0.5; r <= R + 1e-12; r += 0.5) radii.push_back(r);

    ArtifactSet art{dir, {}, {}};
    std::ostringstream crossings;
    crossings << "p,crossing_radius\n";
    for (const double p : p_list) {
        if (p < 0) throw std::invalid_argument("noise levels must be non-negative");
        const ScatteringData noisy = add_noise(clean, p, gamma, seed);
        const std::vector<double> prof = noise_radius_profile(clean, noisy, radii);
        art.add("noise_p" + fmt_short(p) + ".csv", csv_of_ray(radii, prof, "E"));
        crossings << fmt_short(p) << ','
                  << fmt(crossing_radius(radii, prof, threshold)) << "\n";
    }
    art.add("crossings.csv", crossings.str());
    save_scattering(clean, dir + "/scattering.csv");
    std::vector<std::string> names = art.flush();
    names.insert(names.begin(), "scattering.csv");
    return names;
}

std::string run_command(const std::string& command, const Config& cfg,
                        const std::string& out_override, std::ostream& log) {
    using Driver = std::vector<std::string> (*)(const Config&, const std::string&);
    static const std::map<std::string, Driver> drivers = {
        {"forward", run_forward},
        {"invert-shortcut", run_invert_shortcut},
        {"invert-transport", run_invert_transport},
        {"compare", run_compare},
        {"cgo-compare", run_cgo_compare},
        {"gibbs", run_gibbs},
        {"noise", run_noise},
    };
    const auto it = drivers.find(command);
    if (it == drivers.end())
        throw std::invalid_argument("unknown command '" + command + "'");

    check_desk_caps(cfg, std::cerr);

    std::string dir = out_override;
    if (dir.empty())
        dir = make_run_dir(cfg.get("out", "runs"), command, cfg);
    else
        std::filesystem::create_directories(dir);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> files = it->second(cfg, dir);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream stamp;
    stamp << "command=" << command << "\n"
          << "version=" << kVersion << "\n";
    for (const auto& [k, v] : cfg.kv)
        if (!execution_only(k)) stamp << "config." << k << "=" << v << "\n";
    char wbuf[64];
    std::snprintf(wbuf, sizeof wbuf, "wall_time_s=%.6f\n", wall);

    for (const std::string& f : files) {
        std::ofstream meta(dir + "/" + f + ".meta", std::ios::app);
        meta << stamp.str() << wbuf;
    }

    log << dir << "\n";
    for (const std::string& f : files) log << "  " << f << "\n";
    return dir;
}

}  // namespace nlft
