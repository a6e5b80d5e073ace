#include "nlft/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlft {

namespace {

double checkerboard(cplx z, int tiles, double lo, double hi) {
    if (std::abs(z) > 0.9) return 1.0;
    const double scale = tiles / 2.0;
    int i = static_cast<int>(std::floor((z.real() + 1.0) * scale));
    int j = static_cast<int>(std::floor((z.imag() + 1.0) * scale));
    i = std::clamp(i, 0, tiles - 1);
    j = std::clamp(j, 0, tiles - 1);
    return ((i + j) % 2 == 0) ? lo : hi;
}

}  // namespace

Phantom make_phantom(const std::string& id) {
    Phantom p;
    p.name = id;
    if (id == "unit") {
        p.radial = true;
        p.contrast = 0.0;
        p.eval = [](cplx) { return 1.0; };
    } else if (id == "sigma1") {
        p.radial = true;
        p.contrast = 1.0;
        p.eval = [](cplx z) { return std::abs(z) < 0.5 ? 2.0 : 1.0; };
    } else if (id == "sigma2") {
        p.radial = true;
        p.contrast = 1.0;
        p.eval = [](cplx z) {
            const double r = std::abs(z);
            const bool bump = r < 0.1 || (0.2 < r && r < 0.3) || (0.4 < r && r < 0.5);
            return bump ? 2.0 : 1.0;
        };
    } else if (id == "sigma3") {
        p.radial = false;
        p.contrast = 1.5;
        p.suggested_z0 = cplx(-0.88594, -0.88594);
        p.eval = [](cplx z) { return checkerboard(z, 4, 1.0, 2.5); };
    } else if (id == "sigma4") {
        p.radial = false;
        p.contrast = 2.8;
        p.suggested_z0 = cplx(0.0, 1.2656);
        p.eval = [](cplx z) { return checkerboard(z, 6, 1.0, 3.8); };
    } else {
        throw std::invalid_argument("make_phantom: unknown phantom id '" + id + "'");
    }
    return p;
}

Phantom load_phantom_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_phantom_file: cannot open " + path);

    struct Record {
        bool is_circle;
        double a, b, c, d;  // circle: cx, cy, r; rect: x0, y0, x1, y1
        double value;
    };
    std::vector<Record> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        Record rec{};
        if (tag == "circle") {
            rec.is_circle = true;
            if (!(ls >> rec.a >> rec.b >> rec.c >> rec.value) || rec.c <= 0.0)
                throw std::runtime_error("load_phantom_file: bad circle record at line " +
                                         std::to_string(lineno));
        } else if (tag == "rect") {
            rec.is_circle = false;
            if (!(ls >> rec.a >> rec.b >> rec.c >> rec.d >> rec.value) ||
                rec.c <= rec.a || rec.d <= rec.b)
                throw std::runtime_error("load_phantom_file: bad rect record at line " +
                                         std::to_string(lineno));
        } else {
            throw std::runtime_error("load_phantom_file: unknown shape '" + tag +
                                     "' at line " + std::to_string(lineno));
        }
        if (!(rec.value > 0.0))
            throw std::runtime_error("load_phantom_file: sigma must be positive at line " +
                                     std::to_string(lineno));
        records.push_back(rec);
    }
    if (records.empty())
        throw std::runtime_error("load_phantom_file: no records in " + path);

    Phantom p;
    p.name = "custom";
    p.radial = std::all_of(records.begin(), records.end(), [](const Record& r) {
        return r.is_circle && r.a == 0.0 && r.b == 0.0;
    });
    double lo = 1.0, hi = 1.0;
    for (const Record& rec : records) {
        lo = std::min(lo, rec.value);
        hi = std::max(hi, rec.value);
    }
    p.contrast = hi - lo;
    p.eval = [records](cplx z) {
        if (std::abs(z) >= 1.0) return 1.0;
        double value = 1.0;
        for (const Record& rec : records) {
            const bool inside =
                rec.is_circle
                    ? std::abs(z - cplx(rec.a, rec.b)) < rec.c
                    : (rec.a <= z.real() && z.real() < rec.c && rec.b <= z.imag() &&
                       z.imag() < rec.d);
            if (inside) value = rec.value;
        }
        return value;
    };
    return p;
}

double eval_sigma(const Phantom& p, cplx z) { return p.eval(z); }

ComplexField sample_sigma(const Phantom& p, const Grid2D& g) {
    ComplexField out(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            out.at(ix, iy) = p.eval(g.point(ix, iy));
    return out;
}

double mu_of_sigma(double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("mu_of_sigma: sigma must be positive");
    return (1.0 - sigma) / (1.0 + sigma);
}

double sigma_of_mu(double mu) {
    if (!(std::abs(mu) < 1.0)) throw std::domain_error("sigma_of_mu: need |mu| < 1");
    return (1.0 - mu) / (1.0 + mu);
}

BeltramiCoefficient mu_from_sigma(const ComplexField& sigma) {
    BeltramiCoefficient out;
    out.mu = ComplexField(sigma.grid);
    for (std::size_t i = 0; i < sigma.v.size(); ++i) {
        const cplx s = sigma.v[i];
        if (s.imag() != 0.0 || !(s.real() > 0.0))
            throw std::domain_error("mu_from_sigma: sigma must be real and positive");
        const double mu = (1.0 - s.real()) / (1.0 + s.real());
        out.mu.v[i] = mu;
        out.kappa = std::max(out.kappa, std::abs(mu));
    }
    return out;
}

ComplexField sigma_from_mu(const ComplexField& mu) {
    ComplexField out(mu.grid);
    for (std::size_t i = 0; i < mu.v.size(); ++i) {
        const cplx m = mu.v[i];
        if (!(std::abs(m) < 1.0))
            throw std::domain_error("sigma_from_mu: need |mu| < 1 everywhere");
        out.v[i] = (1.0 - m) / (1.0 + m);
    }
    return out;
}

BeltramiCoefficient sample_mu(const Phantom& p, const Grid2D& g) {
    return mu_from_sigma(sample_sigma(p, g));
}

}  // namespace nlft
