// energy.hpp -- per-particle energy of a periodic charge configuration by
// four routes (direct sum, convergence-factor extrapolation, spectral mode
// decomposition, Ewald summation) plus the Epstein-zeta identity for Riesz
// potentials.

#ifndef LATCHARGE_ENERGY_HPP
#define LATCHARGE_ENERGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "latcharge/charges.hpp"
#include "latcharge/potentials.hpp"

namespace latcharge {

inline constexpr double kDefaultEwaldAlpha = 1.7724538509055160273;  // sqrt(pi)

enum class EnergyRoute { Direct, ConvergenceFactor, Ewald, Spectral, Epstein };

std::string route_name(EnergyRoute route);

struct ModeEnergy {
    Eigen::VectorXi k;  // dual coordinates in {0..N-1}^d
    double value = 0.0;
};

struct EnergyReport {
    double value = 0.0;
    EnergyRoute route = EnergyRoute::Direct;
    double alpha = 0.0;            // splitting parameter, Ewald-type routes
    double radius_real = 0.0;      // truncation radii actually used
    double radius_dual = 0.0;
    double estimated_error = 0.0;
    bool converged = true;
    bool boundary_s = false;       // Epstein route evaluated at s = d
    std::vector<ModeEnergy> mode_table;  // E[k] or F[k] for spectral routes
};

// (1/2N^d) sum_{0<|x|<=R} s_x f(x) with an integral-comparison tail bound.
// Requires a summable potential.
EnergyReport energy_direct(const Potential& potential, const ChargeConfiguration& phi,
                           double radius);

// Screened sums at eta in `etas` (default geometric sequence), extrapolated
// to eta = 0 by Neville polynomial extrapolation; the slow independent
// oracle for the Ewald route.
EnergyReport energy_convergence_factor(const Potential& potential,
                                       const ChargeConfiguration& phi,
                                       std::vector<double> etas = {},
                                       double tol = 1e-13);

// Ewald summation at splitting parameter alpha (Gaussian-screen split);
// exact in alpha. Non-summable potentials require a neutral configuration.
EnergyReport energy_ewald(const Potential& potential, const ChargeConfiguration& phi,
                          double alpha = kDefaultEwaldAlpha, double tol = 1e-12);

// Mode energy E[k] = sum_{x != 0} e^{2 pi i x.k / N} f(x) for summable f,
// computed through the theta-function integral representation.
double mode_energy_summable(const BravaisLattice& lattice, const Potential& potential,
                            const Eigen::VectorXi& k, int N, double tol = 1e-12);

// Ewald mode energy
// F[k] = sum_{x != 0} e^{2 pi i x.k/N} f1(x) + (1/covol) sum_q f2(q + k/N);
// F[k] - mu(alpha) is independent of alpha. The zero mode (k in N X*) is
// rejected for non-summable potentials.
double mode_energy_ewald(const BravaisLattice& lattice, const Potential& potential,
                         const Eigen::VectorXi& k, int N,
                         double alpha = kDefaultEwaldAlpha, double tol = 1e-12);

// (1/2N^d) sum_k xi_k E[k]  (summable)
// (1/2N^d) sum_k xi_k F[k] - mu/2  (general, neutral phi); mode table included.
EnergyReport energy_spectral(const Potential& potential, const ChargeConfiguration& phi,
                             std::optional<double> alpha = std::nullopt, double tol = 1e-12);

// E = (1/2N^d) sum_k xi_k Z(0; k/N)(q_X; s) for the Riesz potential with
// 0 < s <= d and neutral phi.
EnergyReport energy_epstein(double s, const ChargeConfiguration& phi, double tol = 1e-12);

// Periodic interaction matrix M over K_N x K_N with
// phi^T M phi = E_{X,f}[phi] for ||phi||^2 = N^d; assembled through the
// Ewald split (the zero dual mode is dropped for non-summable potentials,
// which restricts validity to neutral phi).
Eigen::MatrixXd interaction_matrix(const BravaisLattice& lattice, const Potential& potential,
                                   int N, double alpha = kDefaultEwaldAlpha,
                                   double tol = 1e-12);

}  // namespace latcharge

#endif
