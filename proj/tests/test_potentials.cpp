#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latcharge/potentials.hpp"
#include "latcharge/quadrature.hpp"

using namespace latcharge;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Potential riesz_as_custom(double s, bool summable) {
    CustomDensityKind k;
    k.density = [s](double t) { return riesz_measure_density(s, t); };
    k.summable = summable;
    k.quad_tol = 1e-12;
    return Potential::custom(k);
}

}  // namespace

TEST_CASE("evaluate") {
    CHECK(Potential::riesz(2.0).evaluate_sq(4.0) == doctest::Approx(0.25));
    Eigen::VectorXd x(2);
    x << 3.0, 4.0;
    CHECK(Potential::riesz(1.0).evaluate(x) == doctest::Approx(0.2));
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
    CHECK(Potential::gaussian(kPi).evaluate(e1) == doctest::Approx(std::exp(-kPi)));
    CHECK_THROWS_AS(Potential::riesz(1.0).evaluate_sq(0.0), std::domain_error);
    CHECK_THROWS_AS(Potential::riesz(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Potential::gaussian(0.0), std::invalid_argument);
}

TEST_CASE("summability") {
    CHECK(Potential::riesz(3.0).summable(2));
    CHECK_FALSE(Potential::riesz(2.0).summable(2));
    CHECK_FALSE(Potential::riesz(1.0).summable(3));
    CHECK(Potential::gaussian(1.0).summable(3));
    CHECK(riesz_as_custom(3.0, true).summable(2));
}

TEST_CASE("split_short") {
    const double a = std::sqrt(kPi);
    CHECK(Potential::riesz(1.0).split_short_sq(a, 1.0) ==
          doctest::Approx(std::erfc(a)).epsilon(1e-10));
    CHECK(Potential::riesz(1.0).split_short_sq(a, 1.0) ==
          doctest::Approx(0.0121888822).epsilon(1e-8));
    // alpha -> 0 recovers the full potential
    CHECK(Potential::riesz(2.5).split_short_sq(1e-7, 2.0) ==
          doctest::Approx(Potential::riesz(2.5).evaluate_sq(2.0)).epsilon(1e-10));
    // Gaussian atom below alpha^2 contributes nothing short-range
    CHECK(Potential::gaussian(1.0).split_short_sq(2.0, 1.0) == 0.0);
    CHECK(Potential::gaussian(5.0).split_short_sq(2.0, 1.0) ==
          doctest::Approx(std::exp(-5.0)));
    CHECK_THROWS_AS(Potential::riesz(1.0).split_short_sq(1.0, 0.0), std::domain_error);
}

TEST_CASE("split_long") {
    // Gaussian atom inside [0, alpha^2]
    Eigen::VectorXd w(2);
    w << 0.4, -0.3;
    CHECK(Potential::gaussian(1.0).split_long(2.0, w) ==
          doctest::Approx(kPi * std::exp(-kPi * kPi * w.squaredNorm())).epsilon(1e-12));
    // Riesz closed form vs the defining integral
    const double a = std::sqrt(kPi);
    auto oracle = [&](double s, int d, double w2, double alpha) {
        auto f = [&](double t) {
            return std::pow(t, -0.5 * d) * std::exp(-kPi * kPi * w2 / t) *
                   riesz_measure_density(s, t);
        };
        // t = u^2 softens the endpoint
        auto sub = [&](double u) { return 2.0 * u * f(u * u); };
        return std::pow(kPi, 0.5 * d) * integrate(sub, 0.0, alpha, 1e-13).value;
    };
    CHECK(Potential::riesz(1.0).split_long_sq(3, a, 1.0) ==
          doctest::Approx(oracle(1.0, 3, 1.0, a)).epsilon(1e-10));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> us(0.3, 5.0);
    std::uniform_real_distribution<double> uw(0.2, 2.5);
    std::uniform_real_distribution<double> ua(0.4, 2.5);
    for (int i = 0; i < 50; ++i) {
        const double s = us(rng);
        const int d = 1 + i % 3;
        const double w2 = uw(rng);
        const double alpha = ua(rng);
        CHECK(Potential::riesz(s).split_long_sq(d, alpha, w2) ==
              doctest::Approx(oracle(s, d, w2, alpha)).epsilon(1e-9));
    }

    // strictly decreasing in |w|
    const Potential p = Potential::riesz(1.5);
    double prev = p.split_long_sq(2, 1.0, 0.1);
    for (double w2 = 0.3; w2 < 3.0; w2 += 0.2) {
        const double cur = p.split_long_sq(2, 1.0, w2);
        CHECK(cur < prev);
        prev = cur;
    }

    // divergent zero mode
    CHECK_THROWS_AS(Potential::riesz(1.0).split_long_sq(3, 1.0, 0.0), std::domain_error);
    // integrable zero mode: s > d, closed form 2 pi^{d/2} alpha^{s-d}/((s-d)Gamma(s/2))
    CHECK(Potential::riesz(3.0).split_long_sq(2, a, 0.0) ==
          doctest::Approx(2.0 * kPi * std::pow(a, 1.0) / std::tgamma(1.5)).epsilon(1e-12));
}

TEST_CASE("measure_mass") {
    CHECK(Potential::riesz(2.0).measure_mass(1.0) == doctest::Approx(1.0));
    CHECK(Potential::riesz(1.0).measure_mass(std::sqrt(kPi)) == doctest::Approx(2.0));
    CHECK(Potential::gaussian(5.0).measure_mass(1.0) == 0.0);
    CHECK(Potential::gaussian(0.5, 2.0).measure_mass(1.0) == doctest::Approx(2.0));
}

TEST_CASE("gaussian boundary atom goes to the long-range piece") {
    // t0 = alpha^2 exactly: the split must not double-count the atom
    const Potential g = Potential::gaussian(kPi);
    const double a = std::sqrt(kPi);
    CHECK(g.split_short_sq(a, 1.0) == 0.0);
    CHECK(g.measure_mass(a) == doctest::Approx(1.0));
    CHECK(g.split_long_sq(2, a, 1.0) ==
          doctest::Approx(std::pow(kPi / kPi, 1.0) * kPi / kPi * std::exp(-kPi)));
}

TEST_CASE("riesz measure density") {
    CHECK(riesz_measure_density(2.0, 3.0) == doctest::Approx(1.0));
    CHECK(riesz_measure_density(4.0, 2.0) == doctest::Approx(2.0));
    // Laplace transform at q=1 recovers f(1) = 1
    auto f = [](double t) { return std::exp(-t) * riesz_measure_density(1.0, t); };
    auto sub = [&](double u) { return 2.0 * u * f(u * u); };
    CHECK(integrate(sub, 0.0, 10.0, 1e-13).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(riesz_measure_density(1.0, 0.0), std::domain_error);
}

TEST_CASE("split consistency and integrate_measure") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ua(0.3, 3.0);
    std::uniform_real_distribution<double> ur(0.5, 3.0);
    const std::vector<Potential> pots = {Potential::riesz(1.0), Potential::riesz(2.7),
                                         Potential::gaussian(2.0, 1.3),
                                         riesz_as_custom(1.8, false)};
    for (const Potential& p : pots) {
        for (int i = 0; i < 25; ++i) {
            const double alpha = ua(rng);
            const double r = ur(rng);
            const double q = r * r;
            const double low =
                p.integrate_measure([q](double t) { return std::exp(-t * q); }, 0.0,
                                    alpha * alpha);
            CHECK(low + p.split_short_sq(alpha, q) ==
                  doctest::Approx(p.evaluate_sq(q)).epsilon(1e-9));
            // mass through the generic path
            CHECK(p.integrate_measure([](double) { return 1.0; }, 0.0, alpha * alpha) ==
                  doctest::Approx(p.measure_mass(alpha)).epsilon(1e-9));
        }
    }
}

TEST_CASE("custom density matches riesz closed forms") {
    const Potential custom = riesz_as_custom(2.3, false);
    const Potential exact = Potential::riesz(2.3);
    for (double q : {0.5, 1.0, 2.2}) {
        CHECK(custom.evaluate_sq(q) == doctest::Approx(exact.evaluate_sq(q)).epsilon(1e-9));
        CHECK(custom.split_short_sq(1.1, q) ==
              doctest::Approx(exact.split_short_sq(1.1, q)).epsilon(1e-8));
        CHECK(custom.split_long_sq(2, 1.1, q) ==
              doctest::Approx(exact.split_long_sq(2, 1.1, q)).epsilon(1e-8));
    }
    CHECK(custom.measure_mass(1.3) == doctest::Approx(exact.measure_mass(1.3)).epsilon(1e-9));
}

TEST_CASE("split_short is nonincreasing in alpha") {
    for (const Potential& p : {Potential::riesz(1.0), Potential::riesz(3.5),
                               Potential::gaussian(2.0)}) {
        double prev = p.split_short_sq(0.2, 1.3);
        for (double alpha = 0.4; alpha < 3.0; alpha += 0.2) {
            const double cur = p.split_short_sq(alpha, 1.3);
            CHECK(cur <= prev + 1e-14);
            prev = cur;
        }
    }
}

TEST_CASE("complete monotonicity spot check") {
    // finite differences in q = |x|^2 alternate in sign for f(q) = q^{-s/2}
    for (double s : {1.0, 2.0, 3.5}) {
        const Potential p = Potential::riesz(s);
        const double h = 0.25;
        std::vector<double> v;
        for (int i = 0; i < 12; ++i) v.push_back(p.evaluate_sq(1.0 + h * i));
        for (int k = 1; k <= 4; ++k) {
            for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
            v.pop_back();
            for (double diff : v) CHECK(diff * (k % 2 == 0 ? 1.0 : -1.0) > 0.0);
        }
    }
}
