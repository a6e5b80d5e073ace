#include "nlft/field_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlft {

namespace {

std::string format_header(const ComplexField& f, PlaneKind kind) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "NFF1 m=%d s=%.17g kind=%s\n", f.grid.m, f.grid.s,
                  kind == PlaneKind::Z ? "z" : "k");
    return buf;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            fs::remove(tmp);
            throw std::runtime_error("atomic_write: write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string nff1_bytes(const ComplexField& f, PlaneKind kind) {
    std::string bytes = format_header(f, kind);
    const std::size_t payload = f.v.size() * 2 * sizeof(double);
    const std::size_t head = bytes.size();
    bytes.resize(head + payload);
    // Samples are stored as little-endian float64 pairs; this writes the
    // native representation, which matches on every supported target.
    std::memcpy(bytes.data() + head, f.v.data(), payload);
    return bytes;
}

void save_nff1(const ComplexField& f, PlaneKind kind, const std::string& path) {
    atomic_write(path, nff1_bytes(f, kind));
}

LoadedField load_nff1(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_nff1: cannot open " + path);
    std::string header;
    std::getline(in, header);
    int m = 0;
    double s = 0.0;
    char kind_buf[8] = {0};
    if (std::sscanf(header.c_str(), "NFF1 m=%d s=%lg kind=%7s", &m, &s, kind_buf) != 3)
        throw std::runtime_error("load_nff1: malformed header in " + path);
    PlaneKind kind;
    if (std::strcmp(kind_buf, "z") == 0)
        kind = PlaneKind::Z;
    else if (std::strcmp(kind_buf, "k") == 0)
        kind = PlaneKind::K;
    else
        throw std::runtime_error("load_nff1: unknown plane kind in " + path);

    LoadedField out{ComplexField(make_grid(m, s)), kind};
    const std::size_t payload = out.field.v.size() * 2 * sizeof(double);
    in.read(reinterpret_cast<char*>(out.field.v.data()),
            static_cast<std::streamsize>(payload));
    if (static_cast<std::size_t>(in.gcount()) != payload)
        throw std::runtime_error("load_nff1: truncated payload in " + path);
    return out;
}

void save_field_csv(const ComplexField& f, const std::string& path) {
    std::ostringstream out;
    out << "x,y,re,im\n";
    char line[160];
    for (int iy = 0; iy < f.grid.n; ++iy)
        for (int ix = 0; ix < f.grid.n; ++ix) {
            const cplx val = f.at(ix, iy);
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                          f.grid.axis(ix), f.grid.axis(iy), val.real(), val.imag());
            out << line;
        }
    atomic_write(path, out.str());
}

void save_ray_csv(const RadialRay& ray, const std::string& path) {
    std::ostringstream out;
    out << "r,re,im\n";
    char line[128];
    for (std::size_t i = 0; i < ray.r.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", ray.r[i],
                      ray.v[i].real(), ray.v[i].imag());
        out << line;
    }
    atomic_write(path, out.str());
}

RadialRay load_ray_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_ray_csv: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    RadialRay ray;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double r = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &r, &re, &im) != 3)
            throw std::runtime_error("load_ray_csv: malformed line in " + path);
        ray.r.push_back(r);
        ray.v.emplace_back(re, im);
    }
    if (ray.r.empty()) throw std::runtime_error("load_ray_csv: no samples in " + path);
    if (ray.r.front() != 0.0)
        throw std::runtime_error("load_ray_csv: ray must start at r = 0");
    return ray;
}

}  // namespace nlft
