#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latcharge/lattice.hpp"

using namespace latcharge;

namespace {

// brute-force integer scan over a generous box, the enumeration oracle
std::vector<Eigen::VectorXi> scan_ball(const Eigen::MatrixXd& A, double radius, int box,
                                       bool include_origin) {
    const int d = static_cast<int>(A.cols());
    std::vector<Eigen::VectorXi> out;
    Eigen::VectorXi n = Eigen::VectorXi::Constant(d, -box);
    while (true) {
        const double q = (A * n.cast<double>()).squaredNorm();
        if (q <= radius * radius * (1.0 + 1e-14) && (include_origin || !n.isZero()))
            out.push_back(n);
        int i = d - 1;
        while (i >= 0 && n(i) == box) { n(i) = -box; --i; }
        if (i < 0) break;
        ++n(i);
    }
    return out;
}

}  // namespace

TEST_CASE("constructors and presets") {
    const BravaisLattice c3 = cubic(3);
    CHECK(c3.dimension() == 3);
    CHECK(c3.covolume() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c3.generator().isIdentity(1e-14));

    const BravaisLattice ortho = orthorhombic({1.0, 2.0});
    CHECK(ortho.dual_generator()(0, 0) == doctest::Approx(1.0));
    CHECK(ortho.dual_generator()(1, 1) == doctest::Approx(0.5));

    const BravaisLattice line = orthorhombic({2.0});
    CHECK(line.dual_generator()(0, 0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(orthorhombic({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(orthorhombic({}), std::invalid_argument);

    Eigen::MatrixXd singular(2, 2);
    singular << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(BravaisLattice{singular}, std::invalid_argument);
}

TEST_CASE("triangular lattice of unit density") {
    const BravaisLattice tri = triangular();
    const double c = std::sqrt(2.0 / std::sqrt(3.0));
    CHECK(tri.covolume() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(tri.generator()(0, 0) == doctest::Approx(c));
    CHECK(tri.generator()(0, 1) == doctest::Approx(c / 2.0));
    CHECK(tri.generator()(1, 1) == doctest::Approx(c * std::sqrt(3.0) / 2.0));
    // dual basis from the inverse transpose
    CHECK(tri.dual_generator().col(0)(0) == doctest::Approx(c * std::sqrt(3.0) / 2.0));
    CHECK(tri.dual_generator().col(0)(1) == doctest::Approx(-c / 2.0));
    CHECK(tri.dual_generator().col(1)(0) == doctest::Approx(0.0));
    CHECK(tri.dual_generator().col(1)(1) == doctest::Approx(c));
    // all four basis vectors share one length
    const double len = tri.generator().col(0).norm();
    CHECK(tri.generator().col(1).norm() == doctest::Approx(len));
    CHECK(tri.dual_generator().col(0).norm() == doctest::Approx(len));
    CHECK(tri.dual_generator().col(1).norm() == doctest::Approx(len));
    CHECK(tri.quadratic_form(Eigen::Vector2i(1, 0)) ==
          doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("dual lattice") {
    CHECK(cubic(3).dual().generator().isIdentity(1e-14));

    const BravaisLattice ortho = orthorhombic({2.0, 0.5});
    CHECK(ortho.dual().generator()(0, 0) == doctest::Approx(0.5));
    CHECK(ortho.dual().generator()(1, 1) == doctest::Approx(2.0));

    // triangular dual is the same lattice up to rotation: equal Gram spectra
    const BravaisLattice tri = triangular();
    const Eigen::Matrix2d g1 = tri.generator().transpose() * tri.generator();
    const Eigen::Matrix2d g2 = tri.dual().generator().transpose() * tri.dual().generator();
    CHECK(g1.trace() == doctest::Approx(g2.trace()).epsilon(1e-12));
    CHECK(g1.determinant() == doctest::Approx(g2.determinant()).epsilon(1e-12));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 4;
        Eigen::MatrixXd A(d, d);
        do {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) A(i, j) = u(rng);
        } while (std::abs(A.determinant()) < 0.1);
        const BravaisLattice L(A);
        CHECK((L.dual().dual().generator() - A).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(L.dual().covolume() * L.covolume() == doctest::Approx(1.0).epsilon(1e-12));
        // u_i . u_j* = delta_ij
        CHECK((L.generator().transpose() * L.dual_generator() -
               Eigen::MatrixXd::Identity(d, d))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("normalize_density") {
    CHECK(orthorhombic({2.0, 2.0}).normalize_density().covolume() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK((triangular().normalize_density().generator() - triangular().generator())
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK(orthorhombic({4.0}).normalize_density().generator()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("points_in_ball basics") {
    const BravaisLattice z2 = cubic(2);
    CHECK(points_in_ball(z2, 1.0, false).size() == 4);
    CHECK(points_in_ball(z2, 1.5, false).size() == 8);
    CHECK(points_in_ball(z2, 1.0, true).size() == 5);

    const BravaisLattice tri = triangular();
    const double r1 = tri.generator().col(0).norm();
    CHECK(points_in_ball(tri, 1.1 * r1, false).size() == 6);
    CHECK(tri.shortest_vector_norm() == doctest::Approx(r1).epsilon(1e-13));

    CHECK_THROWS_AS(points_in_ball(z2, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(points_in_ball(z2, 1e6, true, Eigen::VectorXd(), 1000),
                    std::length_error);
}

TEST_CASE("points_in_ball matches brute-force scan on random lattices") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_real_distribution<double> ur(0.3, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 3;
        Eigen::MatrixXd A(d, d);
        double cond;
        do {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) A(i, j) = u(rng);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
            cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
        } while (!(cond < 50.0) || std::abs(A.determinant()) < 1e-3);
        const BravaisLattice L(A);
        const double radius = ur(rng);
        const auto got = points_in_ball(L, radius, false);
        // box size from the inverse generator row norms, padded
        int box = 2;
        for (int i = 0; i < d; ++i)
            box = std::max(box, static_cast<int>(
                                    std::ceil(radius * A.inverse().row(i).norm())) + 1);
        const auto expect = scan_ball(A, radius, box, false);
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].n == expect[i]);  // same lexicographic order
            CHECK(got[i].norm2 ==
                  doctest::Approx((A * got[i].n.cast<double>()).squaredNorm()));
        }
    }
}

TEST_CASE("points_in_ball with offset") {
    const BravaisLattice z1 = cubic(1);
    Eigen::VectorXd off(1);
    off << 0.5;
    const auto pts = points_in_ball(z1, 1.0, true, off);
    REQUIRE(pts.size() == 2);  // -0.5 and 0.5
    CHECK(pts[0].x(0) == doctest::Approx(-0.5));
    CHECK(pts[1].x(0) == doctest::Approx(0.5));

    // explicit zero offset behaves like no offset
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
    CHECK(points_in_ball(z1, 2.0, false, zero).size() ==
          points_in_ball(z1, 2.0, false).size());
}

TEST_CASE("sublattice_points and quadratic_form") {
    CHECK(sublattice_points(cubic(2), 2).size() == 4);
    CHECK(sublattice_points(cubic(3), 2).size() == 8);

    const auto k3 = sublattice_points(orthorhombic({1.5}), 3);
    REQUIRE(k3.size() == 3);
    CHECK(k3[0].position(0) == doctest::Approx(0.0));
    CHECK(k3[1].position(0) == doctest::Approx(1.5));
    CHECK(k3[2].position(0) == doctest::Approx(3.0));

    CHECK(cubic(3).quadratic_form(Eigen::Vector3i(1, 1, 1)) == doctest::Approx(3.0));
    CHECK(cubic(3).quadratic_form(Eigen::Vector3i(0, 0, 0)) == doctest::Approx(0.0));

    // quadratic_form consistent with sublattice positions
    const BravaisLattice tri = triangular();
    for (const auto& p : sublattice_points(tri, 4))
        CHECK(tri.quadratic_form(p.coords) == doctest::Approx(p.position.squaredNorm()));
}

TEST_CASE("MultiIndex round trip") {
    const MultiIndex mi(3, 4);
    CHECK(mi.size() == 64);
    for (std::int64_t i = 0; i < mi.size(); ++i) CHECK(mi.index(mi.coords(i)) == i);
    // mod-N reduction of arbitrary integer vectors
    CHECK(mi.index(Eigen::Vector3i(-1, 4, 7)) == mi.index(Eigen::Vector3i(3, 0, 3)));
}

TEST_CASE("shell_point_count_bound dominates true shell counts") {
    const BravaisLattice tri = triangular();
    for (double r = 1.0; r < 6.0; r += 0.7) {
        const std::size_t inner = points_in_ball(tri, r, true).size();
        const std::size_t outer = points_in_ball(tri, r + 1.0, true).size();
        CHECK(shell_point_count_bound(tri, r) >= static_cast<double>(outer - inner));
    }
}
