// lattice.cpp -- Bravais lattice construction and point enumeration.

#include "latcharge/lattice.hpp"

#include <cmath>
#include <limits>

namespace latcharge {

namespace {

// Shortest nonzero vector by scanning the ball of radius min_i |u_i|.
double shortest_vector(const Eigen::MatrixXd& A) {
    const int d = static_cast<int>(A.cols());
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) r = std::min(r, A.col(i).norm());
    const Eigen::MatrixXd Ainv = A.inverse();
    Eigen::VectorXi lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        const double bound = r * Ainv.row(i).norm();
        lo(i) = -static_cast<int>(std::floor(bound + 1e-9));
        hi(i) = -lo(i);
    }
    double best2 = r * r;
    Eigen::VectorXi n = lo;
    while (true) {
        if (!n.isZero()) best2 = std::min(best2, (A * n.cast<double>()).squaredNorm());
        int i = d - 1;
        while (i >= 0 && n(i) == hi(i)) { n(i) = lo(i); --i; }
        if (i < 0) break;
        ++n(i);
    }
    return std::sqrt(best2);
}

}  // namespace

BravaisLattice::BravaisLattice(const Eigen::MatrixXd& generator) : generator_(generator) {
    const int d = static_cast<int>(generator.cols());
    if (d < 1 || d > 4 || generator.rows() != d)
        throw std::invalid_argument("BravaisLattice: generator must be square with 1 <= d <= 4");
    if (!generator.allFinite())
        throw std::invalid_argument("BravaisLattice: generator entries must be finite");
    const double det = generator.determinant();
    double scale = 1.0;
    for (int i = 0; i < d; ++i) scale *= generator.col(i).norm();
    if (!(std::abs(det) > 1e-12 * scale))
        throw std::invalid_argument("BravaisLattice: generator is singular or near-singular");
    covolume_ = std::abs(det);
    dual_generator_ = generator.inverse().transpose();
    shortest_ = shortest_vector(generator_);
}

BravaisLattice BravaisLattice::dual() const {
    return BravaisLattice(dual_generator_);
}

BravaisLattice BravaisLattice::normalize_density() const {
    const double lambda = std::pow(covolume_, -1.0 / dimension());
    return BravaisLattice(lambda * generator_);
}

BravaisLattice orthorhombic(const std::vector<double>& a) {
    const int d = static_cast<int>(a.size());
    if (d < 1 || d > 4) throw std::invalid_argument("orthorhombic: need 1 <= d <= 4 side lengths");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        if (!(a[i] > 0.0)) throw std::invalid_argument("orthorhombic: side lengths must be positive");
        A(i, i) = a[i];
    }
    return BravaisLattice(A);
}

BravaisLattice cubic(int d) {
    return BravaisLattice(Eigen::MatrixXd::Identity(d, d));
}

BravaisLattice triangular() {
    const double c = std::sqrt(2.0 / std::sqrt(3.0));
    Eigen::MatrixXd A(2, 2);
    A << c, c * 0.5,
         0.0, c * std::sqrt(3.0) / 2.0;
    return BravaisLattice(A);
}

std::vector<LatticePoint> points_in_ball(const BravaisLattice& lattice, double radius,
                                         bool include_origin, const Eigen::VectorXd& offset,
                                         std::int64_t cap) {
    if (!(radius > 0.0)) throw std::invalid_argument("points_in_ball: radius must be positive");
    const int d = lattice.dimension();
    const Eigen::MatrixXd& A = lattice.generator();
    const Eigen::MatrixXd Ainv = A.inverse();
    Eigen::VectorXd c = offset.size() == 0 ? Eigen::VectorXd::Zero(d) : offset;
    if (c.size() != d) throw std::invalid_argument("points_in_ball: offset dimension mismatch");
    const Eigen::VectorXd center = -Ainv * c;  // |A n + c| <= R  <=>  |n - center|_A <= R

    Eigen::VectorXi lo(d), hi(d);
    std::int64_t box = 1;
    for (int i = 0; i < d; ++i) {
        const double bound = radius * Ainv.row(i).norm();
        lo(i) = static_cast<int>(std::floor(center(i) - bound - 1e-9));
        hi(i) = static_cast<int>(std::ceil(center(i) + bound + 1e-9));
        box *= static_cast<std::int64_t>(hi(i) - lo(i) + 1);
        if (box > cap) throw std::length_error("points_in_ball: coordinate box exceeds cap");
    }

    const double r2 = radius * radius * (1.0 + 1e-14) + 1e-300;
    const bool has_offset = c.squaredNorm() > 0.0;
    std::vector<LatticePoint> out;
    Eigen::VectorXi n = lo;
    while (true) {
        Eigen::VectorXd x = A * n.cast<double>() + c;
        const double q = x.squaredNorm();
        if (q <= r2 && (include_origin || has_offset || !n.isZero())) {
            out.push_back(LatticePoint{n, std::move(x), q});
        }
        int i = d - 1;
        while (i >= 0 && n(i) == hi(i)) { n(i) = lo(i); --i; }
        if (i < 0) break;
        ++n(i);
    }
    return out;
}

std::vector<SublatticePoint> sublattice_points(const BravaisLattice& lattice, int N) {
    if (N < 1) throw std::invalid_argument("sublattice_points: N must be >= 1");
    const MultiIndex mi(lattice.dimension(), N);
    std::vector<SublatticePoint> out;
    out.reserve(static_cast<std::size_t>(mi.size()));
    for (std::int64_t i = 0; i < mi.size(); ++i) {
        Eigen::VectorXi m = mi.coords(i);
        out.push_back(SublatticePoint{m, lattice.point(m)});
    }
    return out;
}

double shell_point_count_bound(const BravaisLattice& lattice, double r) {
    const int d = lattice.dimension();
    double cover = 0.0;  // covering radius bound (1/2) sum |u_i|
    for (int i = 0; i < d; ++i) cover += 0.5 * lattice.generator().col(i).norm();
    const double vd = std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    const double outer = r + 1.0 + cover;
    const double inner = std::max(r - cover, 0.0);
    return vd * (std::pow(outer, d) - std::pow(inner, d)) / lattice.covolume();
}

Eigen::VectorXi MultiIndex::coords(std::int64_t idx) const {
    if (idx < 0 || idx >= size_) throw std::out_of_range("MultiIndex::coords");
    Eigen::VectorXi m(d_);
    for (int i = d_ - 1; i >= 0; --i) {
        m(i) = static_cast<int>(idx % N_);
        idx /= N_;
    }
    return m;
}

std::int64_t MultiIndex::index(const Eigen::VectorXi& m) const {
    if (m.size() != d_) throw std::invalid_argument("MultiIndex::index: dimension mismatch");
    std::int64_t idx = 0;
    for (int i = 0; i < d_; ++i) {
        int r = m(i) % N_;
        if (r < 0) r += N_;
        idx = idx * N_ + r;
    }
    return idx;
}

}  // namespace latcharge
