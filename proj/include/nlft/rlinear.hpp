#pragma once

#include <functional>
#include <vector>

#include "nlft/grid.hpp"

namespace nlft {

// Application of a real-linear operator A (linear over R, not necessarily
// over C) to a complex vector.
using RealLinearOp = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

enum class KrylovMethod {
    // GMRES on the realified system: the complex unknown is treated as a 2N
    // real vector, realized here by running the Arnoldi process with the real
    // inner product Re<x, y>, which keeps every Hessenberg entry and update
    // coefficient real.
    Realified,
    // For A = I - L with L purely conjugate-linear, L∘L is C-linear, and
    // (I + L)(I - L) = I - L∘L turns the system into an ordinary complex
    // one solved by standard GMRES: (I - L∘L) x = b + L(b).
    TwoTerm,
};

struct KrylovOptions {
    double tol = 1e-8;        // target: ||A x - b|| <= tol * ||b||
    double abs_target = 0.0;  // if > 0, absolute residual target instead
    int max_iter = 500;
    int restart = 50;
    KrylovMethod method = KrylovMethod::Realified;
};

struct KrylovReport {
    bool converged = false;
    bool stagnated = false;
    int iterations = 0;                 // operator applications spent in Arnoldi
    double residual = 0.0;              // final true residual ||A x - b||
    std::vector<double> history;        // residual estimate per iteration
};

struct KrylovResult {
    std::vector<cplx> x;
    KrylovReport report;
};

KrylovResult rlinear_krylov(const RealLinearOp& A, const std::vector<cplx>& b,
                            const KrylovOptions& opt = {});

}  // namespace nlft
