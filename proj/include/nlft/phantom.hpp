#pragma once

#include <functional>
#include <string>

#include "nlft/grid.hpp"

namespace nlft {

// Conductivity phantom: strictly positive, piecewise constant, identically 1
// outside the unit disc.
struct Phantom {
    std::string name;
    bool radial = false;
    double contrast = 0.0;          // max sigma - min sigma
    cplx suggested_z0{0.0, 1.2656}; // pivot default for transport runs
    std::function<double(cplx)> eval;
};

// Built-in ids: unit, sigma1, sigma2, sigma3, sigma4.
Phantom make_phantom(const std::string& id);

// Custom phantoms from a text file of records, applied in order on top of a
// background of 1 (later records win inside their shape):
//   circle <cx> <cy> <r> <value>
//   rect <x0> <y0> <x1> <y1> <value>
// Values must be positive; sigma is forced to 1 outside the unit disc.
Phantom load_phantom_file(const std::string& path);

double eval_sigma(const Phantom& p, cplx z);
ComplexField sample_sigma(const Phantom& p, const Grid2D& g);

struct BeltramiCoefficient {
    ComplexField mu;
    double kappa = 0.0;  // max |mu| over samples
};

double mu_of_sigma(double sigma);
double sigma_of_mu(double mu);

// Pointwise mu = (1 - sigma)/(1 + sigma); rejects non-positive sigma.
BeltramiCoefficient mu_from_sigma(const ComplexField& sigma);
// Pointwise sigma = (1 - mu)/(1 + mu); rejects |mu| >= 1.
ComplexField sigma_from_mu(const ComplexField& mu);

BeltramiCoefficient sample_mu(const Phantom& p, const Grid2D& g);

}  // namespace nlft
