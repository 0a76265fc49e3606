// lattice.hpp -- Bravais lattices, dual lattices and point enumeration.
//
// A lattice is stored through its generator matrix (columns u_1..u_d).
// All operations are pure; BravaisLattice is immutable after construction
// and safe to share between threads.

#ifndef LATCHARGE_LATTICE_HPP
#define LATCHARGE_LATTICE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace latcharge {

class BravaisLattice {
public:
    // Throws std::invalid_argument if the generator is (near-)singular,
    // d < 1 or d > 4.
    explicit BravaisLattice(const Eigen::MatrixXd& generator);

    int dimension() const { return static_cast<int>(generator_.cols()); }
    const Eigen::MatrixXd& generator() const { return generator_; }
    // Columns are the dual basis u_1*..u_d* (inverse transpose of A).
    const Eigen::MatrixXd& dual_generator() const { return dual_generator_; }
    double covolume() const { return covolume_; }
    // Euclidean norm of a shortest nonzero lattice vector.
    double shortest_vector_norm() const { return shortest_; }

    // Lattice vector of integer coordinates n.
    Eigen::VectorXd point(const Eigen::VectorXi& n) const {
        return generator_ * n.cast<double>();
    }
    // |sum_i n_i u_i|^2
    double quadratic_form(const Eigen::VectorXi& n) const {
        return point(n).squaredNorm();
    }

    BravaisLattice dual() const;
    // Rescaled copy with covolume 1.
    BravaisLattice normalize_density() const;

private:
    Eigen::MatrixXd generator_;
    Eigen::MatrixXd dual_generator_;
    double covolume_ = 0.0;
    double shortest_ = 0.0;
};

BravaisLattice orthorhombic(const std::vector<double>& a);
BravaisLattice cubic(int d);
// Unit-density triangular lattice in d=2.
BravaisLattice triangular();

struct LatticePoint {
    Eigen::VectorXi n;   // integer coordinates
    Eigen::VectorXd x;   // n mapped through the generator, plus offset if any
    double norm2 = 0.0;  // |x|^2
};

// All x = A n + offset with |x| <= radius, in lexicographic order of n.
// Throws std::length_error if the enclosing coordinate box exceeds cap.
std::vector<LatticePoint> points_in_ball(const BravaisLattice& lattice,
                                         double radius,
                                         bool include_origin = true,
                                         const Eigen::VectorXd& offset = Eigen::VectorXd(),
                                         std::int64_t cap = 50'000'000);

struct SublatticePoint {
    Eigen::VectorXi coords;    // in {0..N-1}^d
    Eigen::VectorXd position;  // A coords
};

// The N^d points of K_N in lexicographic coordinate order.
std::vector<SublatticePoint> sublattice_points(const BravaisLattice& lattice, int N);

// Upper bound on the number of lattice points x with |x + c| in [r, r+1]
// for any center c, from disjoint Voronoi cells of volume covol.
double shell_point_count_bound(const BravaisLattice& lattice, double r);

// Lexicographic linear indexing of {0..N-1}^d (first coordinate slowest).
class MultiIndex {
public:
    MultiIndex(int d, int N) : d_(d), N_(N) {
        if (d < 1 || N < 1) throw std::invalid_argument("MultiIndex: d and N must be >= 1");
        size_ = 1;
        for (int i = 0; i < d; ++i) size_ *= static_cast<std::int64_t>(N);
    }
    int dimension() const { return d_; }
    int period() const { return N_; }
    std::int64_t size() const { return size_; }
    Eigen::VectorXi coords(std::int64_t idx) const;
    // Coordinates are reduced mod N, so any integer vector is accepted.
    std::int64_t index(const Eigen::VectorXi& m) const;

private:
    int d_;
    int N_;
    std::int64_t size_;
};

}  // namespace latcharge

#endif
