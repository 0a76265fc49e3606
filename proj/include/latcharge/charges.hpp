// charges.hpp -- N-periodic charge configurations on K_N, the discrete
// Fourier transform on Lambda_N(X), autocorrelation and spectral density.

#ifndef LATCHARGE_CHARGES_HPP
#define LATCHARGE_CHARGES_HPP

#include <Eigen/Dense>

#include "latcharge/lattice.hpp"

namespace latcharge {

class ChargeConfiguration {
public:
    // values indexed lexicographically over {0..N-1}^d.
    ChargeConfiguration(const BravaisLattice& lattice, int N, Eigen::VectorXd values);

    const BravaisLattice& lattice() const { return lattice_; }
    int period() const { return N_; }
    const Eigen::VectorXd& values() const { return values_; }
    const MultiIndex& indexing() const { return index_; }

    double value_at(const Eigen::VectorXi& m) const { return values_(index_.index(m)); }
    double total_charge() const { return values_.sum(); }
    // (1/N^d) sum phi^2
    double normalization() const {
        return values_.squaredNorm() / static_cast<double>(index_.size());
    }
    bool is_normalized(double tol = 1e-10) const { return std::abs(normalization() - 1.0) < tol; }
    bool is_neutral(double tol = 1e-10) const { return std::abs(total_charge()) < tol; }

    // phi shifted by the lattice vector with coordinates `shift`.
    ChargeConfiguration translated(const Eigen::VectorXi& shift) const;
    // Representative among all lattice translates and the global sign flip
    // with maximal charge at the origin, ties broken lexicographically.
    ChargeConfiguration canonicalized() const;

private:
    BravaisLattice lattice_;
    int N_;
    MultiIndex index_;
    Eigen::VectorXd values_;
};

struct Autocorrelation {
    int d = 0;
    int N = 0;
    Eigen::VectorXd values;  // s_m on K_N, lexicographic
};

struct SpectralDensity {
    int d = 0;
    int N = 0;
    Eigen::VectorXd values;  // xi_k on K_N^*, lexicographic
};

// Unitary DFT pair on {0..N-1}^d:
//   (dft phi)(k)  = N^{-d/2} sum_m phi_m e^{-2 pi i m.k / N}
//   (idft psi)(m) = N^{-d/2} sum_k psi_k e^{+2 pi i m.k / N}
Eigen::VectorXcd dft(const Eigen::VectorXcd& phi, int d, int N);
Eigen::VectorXcd idft(const Eigen::VectorXcd& psi, int d, int N);

// s_m = sum_y phi_y phi_{y+m}
Autocorrelation autocorrelation(const ChargeConfiguration& phi);

// xi_k = (1/N^d) sum_m s_m e^{2 pi i m.k / N}; tiny negative round-off is
// clamped to zero, larger violations throw.
SpectralDensity spectral_density(const ChargeConfiguration& phi);

// phi_x = N^{-d/2} sum_k sqrt(xi_k) cos(2 pi x.k / N) for a symmetric
// nonnegative spectrum with (1/N^d) sum xi = 1.
ChargeConfiguration reconstruct_from_spectrum(const BravaisLattice& lattice,
                                              const SpectralDensity& xi);

// phi(sum m_i u_i) = (-1)^{sum m_i}; N = 2.
ChargeConfiguration alternating(const BravaisLattice& lattice);

// phi(m u_1 + n u_2) = sqrt(2) cos(2 pi (m-n)/3) on the triangular lattice:
// +sqrt(2) on the index-3 triangular sublattice, -sqrt(2)/2 on the
// complementary honeycomb.
ChargeConfiguration honeycomb_triangular();

// phi(x) = c cos(2 pi x . z0) with z0 = (dual vector) k0 / N given through
// integer dual coordinates k0; c fixed by the normalization constraint.
ChargeConfiguration cosine_config(const BravaisLattice& lattice, int N,
                                  const Eigen::VectorXi& k0);

}  // namespace latcharge

#endif
