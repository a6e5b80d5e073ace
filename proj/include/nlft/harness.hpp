#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nlft/grid.hpp"
#include "nlft/phantom.hpp"

namespace nlft {

// Experiment configuration: lowercase key=value pairs.  Sources are layered
// as defaults < config file < command-line flags < NLFT_* environment
// variables, each layer overriding the previous one.
struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    cplx get_cplx(const std::string& key, cplx fallback) const;  // "x,y"
    std::vector<double> get_list(const std::string& key,
                                 const std::string& fallback) const;

    // Sorted "key=value" lines; keys that only steer execution (workers, out,
    // allow_large) are skipped so that the hash and the sidecars describe the
    // experiment, not the machine.
    std::string canonical() const;
};

Config load_config_file(const std::string& path);

// Overrides from NLFT_<KEY>=value; the key is lowercased (NLFT_MZ -> mz).
void apply_env_overrides(Config& cfg);

std::uint64_t config_hash(const Config& cfg);
std::string config_hash_hex(const Config& cfg);  // first 8 hex digits

// "<base>/<command>-<utc timestamp>-<hash8>", suffixed if already present;
// the directory is created.
std::string make_run_dir(const std::string& base, const std::string& command,
                         const Config& cfg);

// Throws unless mz/mk <= 9 and every radius <= 20, or allow_large is set in
// the config (then a resource warning goes to warn).
void check_desk_caps(const Config& cfg, std::ostream& warn);

// Phantom by name, or from a record file when the id names one on disk.
Phantom resolve_phantom(const std::string& id);

// Reconstruction point sets: "ray:<count>" on [0,1] or "disc:<m>[,<s>]" for
// the unit-disc nodes of a 2^m grid over [-s,s)^2 (default s = 1.05).
std::vector<cplx> parse_zgrid(const std::string& spec);

// Drivers.  Each computes first and only then writes its artifacts into dir
// (atomic per file), returning the artifact names relative to dir.
std::vector<std::string> run_forward(const Config& cfg, const std::string& dir);
std::vector<std::string> run_invert_shortcut(const Config& cfg, const std::string& dir);
std::vector<std::string> run_invert_transport(const Config& cfg, const std::string& dir);
std::vector<std::string> run_compare(const Config& cfg, const std::string& dir);
std::vector<std::string> run_cgo_compare(const Config& cfg, const std::string& dir);
std::vector<std::string> run_gibbs(const Config& cfg, const std::string& dir);
std::vector<std::string> run_noise(const Config& cfg, const std::string& dir);

// Dispatches a subcommand, stamps every artifact's sidecar with command,
// version, config, and wall time, and logs the run directory.  Returns the
// run directory actually used.
std::string run_command(const std::string& command, const Config& cfg,
                        const std::string& out_override, std::ostream& log);

extern const char* const kVersion;

}  // namespace nlft
