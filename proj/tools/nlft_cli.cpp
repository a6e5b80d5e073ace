#include <deque>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nlft/harness.hpp"

namespace {

struct SubState {
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> overrides;
};

void add_key(SubState& st, const std::string& flag, const std::string& key,
             const std::string& help) {
    auto& store = st.overrides;
    st.sub->add_option_function<std::string>(
        flag, [&store, key](const std::string& v) { store[key] = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlinear Fourier transform toolbox for the 2D conductivity problem"};
    app.require_subcommand(1);

    std::string config_file, out_dir;
    bool allow_large = false;
    app.add_option("--config", config_file, "key=value config file read first");
    app.add_option("--out", out_dir, "exact output directory (default: runs/<auto>)");
    app.add_flag("--allow-large", allow_large,
                 "accept parameters beyond the desk-scale caps");

    std::deque<SubState> subs;
    auto make_sub = [&](const std::string& name, const std::string& desc) -> SubState& {
        subs.push_back(SubState{app.add_subcommand(name, desc), {}});
        SubState& st = subs.back();
        st.sub->fallthrough();
        add_key(st, "--workers", "workers", "parallel worker threads (default 1)");
        return st;
    };

    {
        SubState& st = make_sub("forward", "compute scattering data for a phantom");
        add_key(st, "--phantom", "phantom", "phantom name or record file");
        add_key(st, "--mode", "mode", "ray (radial profile) or grid (k lattice)");
        add_key(st, "--R", "r", "truncation radius (default 5)");
        add_key(st, "--mz", "mz", "z grid refinement, 2^mz per axis (default 8)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--step", "step", "ray step (default 0.1)");
        add_key(st, "--mk", "mk", "k lattice refinement in grid mode (default 7)");
        add_key(st, "--tol", "tol", "solver tolerance (default 1e-8)");
    }
    {
        SubState& st = make_sub("invert-shortcut",
                                "reconstruct sigma from scattering data");
        add_key(st, "--tau", "tau", "scattering file (.csv ray or .nff grid)");
        add_key(st, "--R", "r", "re-truncation radius (default: data radius)");
        add_key(st, "--mk", "mk", "spectral torus refinement (default 7)");
        add_key(st, "--eps", "eps", "cutoff margin (default 0.05 R)");
        add_key(st, "--zgrid", "zgrid", "ray:<count> or disc:<m>[,<s>] (default ray:64)");
        add_key(st, "--tol", "tol", "solver tolerance (default 1e-8)");
        add_key(st, "--method", "method", "realified or twoterm (default realified)");
    }
    {
        SubState& st = make_sub("invert-transport",
                                "pivoted low-pass transport reconstruction");
        add_key(st, "--phantom", "phantom", "phantom name or record file");
        add_key(st, "--z0", "z0", "pivot point x,y outside the unit disc");
        add_key(st, "--k0", "k0", "readout frequency x,y (default 1,0)");
        add_key(st, "--R", "r", "frequency truncation radius (default 10)");
        add_key(st, "--mk", "mk", "k lattice refinement (default 6)");
        add_key(st, "--mz", "mz", "z grid refinement for the forward solves (default 7)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--zm", "zm", "reconstruction grid refinement (default 6)");
        add_key(st, "--zs", "zs", "reconstruction grid half-width (default 1.05)");
        add_key(st, "--tol", "tol", "forward solver tolerance (default 1e-8)");
        add_key(st, "--ttol", "ttol", "transport solver tolerance (default 1e-6)");
        add_key(st, "--method", "method", "realified or twoterm (default realified)");
    }
    {
        SubState& st = make_sub("compare",
                                "side-by-side shortcut vs transport error table");
        add_key(st, "--phantom", "phantom", "phantom name or record file");
        add_key(st, "--R-list", "r_list", "comma-separated radii (default 10)");
        add_key(st, "--mk", "mk", "data/pivot lattice refinement (default 6)");
        add_key(st, "--rmk", "rmk", "shortcut torus refinement (default 7)");
        add_key(st, "--mz", "mz", "z grid refinement (default 7)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--z0", "z0", "pivot point (default: phantom suggestion)");
        add_key(st, "--k0", "k0", "readout frequency (default 1,0)");
        add_key(st, "--zm", "zm", "evaluation grid refinement (default 5)");
        add_key(st, "--zs", "zs", "evaluation grid half-width (default 1.05)");
        add_key(st, "--step", "step", "ray step for radial phantoms (default 0.1)");
        add_key(st, "--tol", "tol", "forward/shortcut tolerance (default 1e-8)");
        add_key(st, "--ttol", "ttol", "transport tolerance (default 1e-6)");
    }
    {
        SubState& st = make_sub("cgo-compare",
                                "transported vs directly computed low-pass CGO field");
        add_key(st, "--phantom", "phantom", "phantom name or record file");
        add_key(st, "--z0", "z0", "pivot point (default: phantom suggestion)");
        add_key(st, "--k0", "k0", "readout frequency (default 1,0)");
        add_key(st, "--R", "r", "frequency truncation radius (default 20)");
        add_key(st, "--mk", "mk", "k lattice refinement (default 7)");
        add_key(st, "--mz", "mz", "z grid refinement (default 7)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--tol", "tol", "forward solver tolerance (default 1e-8)");
        add_key(st, "--ttol", "ttol", "transport solver tolerance (default 1e-6)");
        add_key(st, "--method", "method", "realified or twoterm (default realified)");
    }
    {
        SubState& st = make_sub("gibbs", "radial shortcut profiles over a radius sweep");
        add_key(st, "--phantom", "phantom", "radial phantom (default sigma1)");
        add_key(st, "--R-list", "r_list", "radii to truncate at (default 5,10,15,20)");
        add_key(st, "--mk", "mk", "spectral torus refinement (default 8)");
        add_key(st, "--mz", "mz", "z grid refinement (default 8)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--step", "step", "forward ray step (default 0.1)");
        add_key(st, "--points", "points", "radial reconstruction points (default 64)");
        add_key(st, "--eps", "eps", "cutoff margin (default 0.05 R)");
        add_key(st, "--tol", "tol", "solver tolerance (default 1e-8)");
    }
    {
        SubState& st = make_sub("noise", "noise response profiles E_p(r)");
        add_key(st, "--phantom", "phantom", "radial phantom (default sigma1)");
        add_key(st, "--p-list", "p_list", "noise percentages (default 0.1,0.5,1,5)");
        add_key(st, "--seed", "seed", "noise seed (default 7)");
        add_key(st, "--R", "r", "data radius (default 6)");
        add_key(st, "--mz", "mz", "z grid refinement (default 7)");
        add_key(st, "--sz", "sz", "z torus half-width (default 2.1)");
        add_key(st, "--step", "step", "forward ray step (default 0.1)");
        add_key(st, "--gamma", "gamma", "noise envelope exponent (default 1.5)");
        add_key(st, "--threshold", "threshold", "crossing threshold (default 0.5)");
        add_key(st, "--tol", "tol", "solver tolerance (default 1e-8)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (const SubState& st : subs) {
            if (!st.sub->parsed()) continue;
            nlft::Config cfg;
            if (!config_file.empty()) cfg = nlft::load_config_file(config_file);
            for (const auto& [k, v] : st.overrides) cfg.set(k, v);
            nlft::apply_env_overrides(cfg);
            if (allow_large) cfg.set("allow_large", "1");
            nlft::run_command(st.sub->get_name(), cfg, out_dir, std::cout);
            return 0;
        }
        std::cerr << "error: no subcommand selected\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
