#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <random>

#include "nlft/field_io.hpp"
#include "nlft/nft.hpp"

using namespace nlft;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("field files round trip bit for bit") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const Grid2D g = make_grid(4, 2.15);
    ComplexField f(g);
    for (auto& v : f.v) v = cplx(u(rng), u(rng));

    const fs::path path = tmp("nlft_roundtrip.nff");
    save_nff1(f, PlaneKind::K, path.string());
    const LoadedField back = load_nff1(path.string());
    CHECK(back.kind == PlaneKind::K);
    CHECK(back.field.grid == g);
    REQUIRE(back.field.v.size() == f.v.size());
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.field.v[i] == f.v[i]);
    fs::remove(path);
}

TEST_CASE("ray CSV round trips through full precision") {
    RadialRay ray = make_ray(2.0, 0.25);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : ray.v) v = cplx(u(rng), u(rng));

    const fs::path path = tmp("nlft_ray.csv");
    save_ray_csv(ray, path.string());
    const RadialRay back = load_ray_csv(path.string());
    REQUIRE(back.r.size() == ray.r.size());
    for (std::size_t i = 0; i < ray.r.size(); ++i) {
        CHECK(back.r[i] == ray.r[i]);
        CHECK(back.v[i] == ray.v[i]);
    }
    fs::remove(path);
}

TEST_CASE("atomic writes create parent directories and never leave temp files") {
    const fs::path dir = tmp("nlft_run_dir");
    fs::remove_all(dir);
    const fs::path path = dir / "a" / "b.txt";
    atomic_write(path.string(), "payload");
    CHECK(fs::exists(path));
    CHECK_FALSE(fs::exists(path.string() + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("scattering data files carry radius and provenance") {
    ScatteringData data;
    data.layout = ScatteringData::Layout::Ray;
    data.ray = make_ray(5.0, 0.5);
    for (std::size_t i = 0; i < data.ray.v.size(); ++i)
        data.ray.v[i] = cplx(0.0, 0.1 * double(i));
    data.R = 5.0;
    data.phantom = "sigma1";
    data.m_z = 7;
    data.s_z = 2.1;
    data.tol = 1e-8;

    const fs::path path = tmp("nlft_tau.csv");
    save_scattering(data, path.string(), {"note=test"});
    const ScatteringData back = load_scattering(path.string());
    CHECK(back.layout == ScatteringData::Layout::Ray);
    CHECK(back.R == 5.0);
    CHECK(back.phantom == "sigma1");
    CHECK(back.m_z == 7);
    CHECK(back.s_z == 2.1);
    REQUIRE(back.ray.v.size() == data.ray.v.size());
    CHECK(back.ray.v[3] == data.ray.v[3]);
    fs::remove(path);
    fs::remove(path.string() + ".meta");
}

TEST_CASE("grid scattering data round trips with truncation radius") {
    const Grid2D g = make_grid(4, 3.0);
    ScatteringData data;
    data.layout = ScatteringData::Layout::Grid;
    data.field = ComplexField(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const cplx k = g.point(ix, iy);
            if (std::abs(k) < 2.5) data.field.at(ix, iy) = cplx(0.01, 0.02) * k;
        }
    data.R = 2.5;

    const fs::path path = tmp("nlft_tau_grid.nff");
    save_scattering(data, path.string());
    const ScatteringData back = load_scattering(path.string());
    CHECK(back.layout == ScatteringData::Layout::Grid);
    CHECK(back.R == 2.5);
    CHECK(back.field.grid == g);
    CHECK(value_at(back, cplx(3.0, 0.0)) == cplx(0.0));
    fs::remove(path);
    fs::remove(path.string() + ".meta");
}

TEST_CASE("truncation zeroes samples at and beyond the radius and is idempotent") {
    ScatteringData data;
    data.layout = ScatteringData::Layout::Ray;
    data.ray = make_ray(4.0, 0.5);
    for (auto& v : data.ray.v) v = cplx(1.0, 1.0);
    data.R = 4.0;

    const ScatteringData t2 = truncate(data, 2.0);
    CHECK(t2.R == 2.0);
    for (std::size_t i = 0; i < t2.ray.r.size(); ++i) {
        if (t2.ray.r[i] >= 2.0) CHECK(t2.ray.v[i] == cplx(0.0));
        else CHECK(t2.ray.v[i] == cplx(1.0, 1.0));
    }
    const ScatteringData t2b = truncate(t2, 2.0);
    for (std::size_t i = 0; i < t2.ray.r.size(); ++i) CHECK(t2b.ray.v[i] == t2.ray.v[i]);

    // Nested truncation: cutting at 3 then 2 equals cutting at 2 directly.
    const ScatteringData t32 = truncate(truncate(data, 3.0), 2.0);
    for (std::size_t i = 0; i < t2.ray.r.size(); ++i) CHECK(t32.ray.v[i] == t2.ray.v[i]);
}

TEST_CASE("radial data extends by the phase rule") {
    ScatteringData data;
    data.layout = ScatteringData::Layout::Ray;
    data.ray = make_ray(2.0, 0.5);
    for (std::size_t i = 0; i < data.ray.r.size(); ++i)
        data.ray.v[i] = cplx(0.0, data.ray.r[i]);  // tau(r) = i r
    data.R = 2.0;

    // tau(k) = (k/|k|) tau(|k|) = i k for this profile.
    const cplx k(0.6, 0.8);
    CHECK(std::abs(value_at(data, k) - cplx(0.0, 1.0) * k) <= 1e-12);
    CHECK(value_at(data, cplx(2.0, 0.0)) == cplx(0.0));  // at the radius: cut
}
