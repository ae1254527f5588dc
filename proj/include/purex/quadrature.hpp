#pragma once

#include <functional>

namespace purex {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    bool converged = true;
};

// Adaptive Simpson integration of f on [a, b]. The recursion splits until the
// local Richardson error estimate falls below the local tolerance share or the
// depth cap is hit; a capped branch marks the result as non-converged but the
// best estimate is still accumulated.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, int max_depth = 48);

}  // namespace purex
