// quadrature.hpp -- adaptive Gauss-Kronrod integration on finite intervals.

#ifndef LATCHARGE_QUADRATURE_HPP
#define LATCHARGE_QUADRATURE_HPP

#include <functional>

namespace latcharge {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // accumulated Kronrod error estimate
};

// Adaptive 7/15-point Gauss-Kronrod bisection on [a, b].
// Subdivides until the local error estimate is below
// max(abs_tol, rel_tol * |integral|) distributed over the interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-12, double abs_tol = 1e-300,
                     int max_depth = 48);

}  // namespace latcharge

#endif
