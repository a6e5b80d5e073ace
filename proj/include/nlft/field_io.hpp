#pragma once

#include <string>

#include "nlft/grid.hpp"

namespace nlft {

// Whether a field's grid samples the spatial (z) or frequency (k) plane.
enum class PlaneKind { Z, K };

struct LoadedField {
    ComplexField field;
    PlaneKind kind;
};

// NFF1 field file: one ASCII header line
//   NFF1 m=<int> s=<float> kind=<z|k>\n
// followed by (2^m)^2 * 2 little-endian float64 values, the real and
// imaginary parts of each sample interleaved in row-major order.
void save_nff1(const ComplexField& f, PlaneKind kind, const std::string& path);
LoadedField load_nff1(const std::string& path);

// The exact bytes save_nff1 would write, for callers that defer the write.
std::string nff1_bytes(const ComplexField& f, PlaneKind kind);

// Plain-text exports for plotting: "x,y,re,im" per grid sample, and
// "r,re,im" per ray sample, both with a header line.
void save_field_csv(const ComplexField& f, const std::string& path);
void save_ray_csv(const RadialRay& ray, const std::string& path);
RadialRay load_ray_csv(const std::string& path);

// Writes via a temp file in the same directory followed by an atomic rename,
// so a crash or failure mid-write never leaves a partial file behind.
void atomic_write(const std::string& path, const std::string& bytes);

}  // namespace nlft
