// special_functions.hpp -- Jacobi theta functions, translated lattice theta
// functions, the upper incomplete gamma function and the analytically
// continued Epstein zeta function.
//
// All evaluations are double precision with certified truncation tails.

#ifndef LATCHARGE_SPECIAL_FUNCTIONS_HPP
#define LATCHARGE_SPECIAL_FUNCTIONS_HPP

#include <complex>

#include "latcharge/lattice.hpp"

namespace latcharge {

// Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt for real a (negative a reached by
// the recurrence Gamma(a,x) = (Gamma(a+1,x) - x^a e^(-x)) / a).
// Throws std::domain_error for x < 0, or x = 0 with a <= 0.
double upper_incomplete_gamma(double a, double x);

// theta_3(beta; it) = sum_k exp(-pi k^2 t + 2 pi i k beta), summed
// symmetrically until the Gaussian tail bound drops below tol.
double jacobi_theta3_series(double beta, double t, double tol = 1e-13);

// Same function through the triple-product representation.
double jacobi_theta3_product(double beta, double t, double tol = 1e-13);

enum class ThetaBranch { Direct, Dual };

struct ThetaEvaluation {
    double value = 0.0;
    double truncation_radius = 0.0;
    double tail_bound = 0.0;
    ThetaBranch branch = ThetaBranch::Direct;
};

// theta_{X+z}(alpha) = sum_{x in X} exp(-pi alpha |x+z|^2).
// Uses the direct sum for alpha >= 1 (effective, after density rescaling)
// and the dual-sum representation otherwise, so the summed Gaussian always
// has width >= 1.
ThetaEvaluation translated_theta(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                 double alpha, double tol = 1e-12);

// |theta_{X+z}(alpha) - alpha^(-d/2) sum_p e^{2 pi i p.z} e^{-pi |p|^2/alpha}|
// with both sides summed directly; a self-test of Jacobi's transformation.
// Requires a unit-density lattice.
double jacobi_transform_residual(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                 double alpha, double tol = 1e-12);

// Epstein zeta Z(0; z)(q_X; s) = sum_{n != 0} e^{2 pi i n.z} / q_X(n)^{s/2},
// analytically continued to Re s > 0. `z` holds the fractional coordinates
// of the shift in the dual basis; it must stay away from Z^d.
// Only real s is supported; the result keeps its (numerically tiny)
// imaginary part so symmetry can be checked by the caller.
std::complex<double> epstein_zeta(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                  double s, double tol = 1e-12);

// Upper bound for sum over lattice points with |x + offset| > radius of
// exp(-rate |x + offset|^2), where offset_norm = |offset|. Conservative
// box-count estimate; used to certify truncated Gaussian lattice sums.
double gaussian_lattice_tail_bound(const BravaisLattice& lattice, double radius,
                                   double offset_norm, double rate);

// Smallest radius whose certified tail bound is below tol.
double gaussian_truncation_radius(const BravaisLattice& lattice, double offset_norm,
                                  double rate, double tol);

}  // namespace latcharge

#endif
