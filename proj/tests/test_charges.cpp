#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latcharge/charges.hpp"

using namespace latcharge;

namespace {

ChargeConfiguration random_normalized(const BravaisLattice& L, int N, std::mt19937& rng,
                                      bool neutral) {
    const MultiIndex mi(L.dimension(), N);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd phi(mi.size());
    for (std::int64_t i = 0; i < mi.size(); ++i) phi(i) = g(rng);
    if (neutral) phi.array() -= phi.mean();
    phi *= std::sqrt(static_cast<double>(mi.size())) / phi.norm();
    return ChargeConfiguration(L, N, phi);
}

}  // namespace

TEST_CASE("dft/idft unitary pair") {
    const int d = 2, N = 3;
    const MultiIndex mi(d, N);

    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(mi.size());
    const Eigen::VectorXcd ones_hat = dft(ones, d, N);
    CHECK(std::abs(ones_hat(0) - std::complex<double>(3.0, 0.0)) < 1e-12);  // N^{d/2}
    for (std::int64_t k = 1; k < mi.size(); ++k) CHECK(std::abs(ones_hat(k)) < 1e-12);

    Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(mi.size());
    delta(0) = 1.0;
    const Eigen::VectorXcd flat = dft(delta, d, N);
    for (std::int64_t k = 0; k < mi.size(); ++k)
        CHECK(std::abs(flat(k)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    std::mt19937 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(mi.size());
    for (std::int64_t i = 0; i < mi.size(); ++i) v(i) = {g(rng), g(rng)};
    CHECK(dft(v, d, N).norm() == doctest::Approx(v.norm()).epsilon(1e-12));  // Plancherel
    CHECK((idft(dft(v, d, N), d, N) - v).norm() < 1e-12);
}

TEST_CASE("autocorrelation") {
    const ChargeConfiguration alt1 = alternating(cubic(1));
    const Autocorrelation s = autocorrelation(alt1);
    CHECK(s.values(0) == doctest::Approx(2.0));
    CHECK(s.values(1) == doctest::Approx(-2.0));

    const ChargeConfiguration const1(cubic(1), 2, Eigen::Vector2d(1.0, 1.0));
    const Autocorrelation sc = autocorrelation(const1);
    CHECK(sc.values(0) == doctest::Approx(2.0));
    CHECK(sc.values(1) == doctest::Approx(2.0));

    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 3;
        const int N = 2 + trial % 3;
        const ChargeConfiguration phi = random_normalized(cubic(d), N, rng, trial % 2 == 0);
        const Autocorrelation sr = autocorrelation(phi);
        const MultiIndex& mi = phi.indexing();
        CHECK(sr.values(0) == doctest::Approx(static_cast<double>(mi.size())).epsilon(1e-10));
        CHECK(sr.values.sum() ==
              doctest::Approx(phi.total_charge() * phi.total_charge()).epsilon(1e-8));
        for (std::int64_t i = 0; i < mi.size(); ++i) {
            const Eigen::VectorXi neg = -mi.coords(i);
            CHECK(sr.values(i) == doctest::Approx(sr.values(mi.index(neg))).epsilon(1e-10));
        }
        // s = N^{d/2} idft(|dft(phi)|^2)
        const Eigen::VectorXcd hat = dft(phi.values().cast<std::complex<double>>(), d, N);
        const Eigen::VectorXcd back = idft(hat.cwiseAbs2().cast<std::complex<double>>(), d, N);
        const double scale = std::pow(static_cast<double>(N), 0.5 * d);
        for (std::int64_t i = 0; i < mi.size(); ++i)
            CHECK(sr.values(i) == doctest::Approx(scale * back(i).real()).epsilon(1e-9));
    }
}

TEST_CASE("spectral density of the alternating configuration") {
    const ChargeConfiguration alt = alternating(cubic(3));
    CHECK(alt.is_normalized());
    CHECK(alt.is_neutral());
    const SpectralDensity xi = spectral_density(alt);
    const MultiIndex mi(3, 2);
    for (std::int64_t k = 0; k < mi.size(); ++k) {
        const double expect = k == mi.size() - 1 ? 8.0 : 0.0;  // k = (1,1,1)
        CHECK(xi.values(k) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("spectral density of the honeycomb configuration") {
    const ChargeConfiguration hc = honeycomb_triangular();
    CHECK(hc.is_normalized());
    CHECK(hc.is_neutral());
    CHECK(hc.value_at(Eigen::Vector2i(0, 0)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(hc.value_at(Eigen::Vector2i(1, 0)) == doctest::Approx(-std::sqrt(2.0) / 2.0));
    CHECK(hc.value_at(Eigen::Vector2i(2, 2)) == doctest::Approx(std::sqrt(2.0)));

    const SpectralDensity xi = spectral_density(hc);
    const MultiIndex mi(2, 3);
    // split equally between the barycenter pair (1,2) and (2,1), each N^d / 2
    for (std::int64_t k = 0; k < mi.size(); ++k) {
        const Eigen::VectorXi kk = mi.coords(k);
        const bool carrier = (kk(0) == 1 && kk(1) == 2) || (kk(0) == 2 && kk(1) == 1);
        CHECK(xi.values(k) == doctest::Approx(carrier ? 4.5 : 0.0).epsilon(1e-12));
    }
    CHECK(xi.values.sum() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("spectral density invariants on random configurations") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + trial % 3;
        const int N = 2 + trial % 3;
        const bool neutral = trial % 2 == 0;
        const ChargeConfiguration phi = random_normalized(cubic(d), N, rng, neutral);
        const SpectralDensity xi = spectral_density(phi);
        const MultiIndex& mi = phi.indexing();
        const double nd = static_cast<double>(mi.size());
        CHECK(xi.values.minCoeff() >= 0.0);
        CHECK(xi.values.sum() / nd == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(xi.values(0) ==
              doctest::Approx(phi.total_charge() * phi.total_charge() / nd).epsilon(1e-8));
        if (neutral) CHECK(xi.values(0) < 1e-10);
        for (std::int64_t k = 0; k < mi.size(); ++k) {
            CHECK(xi.values(k) ==
                  doctest::Approx(xi.values(mi.index(-mi.coords(k)))).epsilon(1e-10));
        }
        // definitional route vs |idft(phi)|^2 route
        const Eigen::VectorXcd check =
            idft(phi.values().cast<std::complex<double>>(), d, N);
        const double scale = std::pow(static_cast<double>(N), -0.5 * d);
        for (std::int64_t k = 0; k < mi.size(); ++k)
            CHECK(xi.values(k) ==
                  doctest::Approx(scale * std::norm(check(k)) * std::pow(nd, 0.5)) //
                      .epsilon(1e-9));
        // translation leaves the spectrum unchanged
        Eigen::VectorXi shift(d);
        for (int i = 0; i < d; ++i) shift(i) = trial + i;
        const SpectralDensity xit = spectral_density(phi.translated(shift));
        CHECK((xit.values - xi.values).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("reconstruct_from_spectrum") {
    // concentrated spectrum reproduces the alternating configuration
    const MultiIndex mi(3, 2);
    SpectralDensity xi;
    xi.d = 3;
    xi.N = 2;
    xi.values = Eigen::VectorXd::Zero(mi.size());
    xi.values(mi.size() - 1) = 8.0;  // k = (1,1,1), self-symmetric
    const ChargeConfiguration alt = reconstruct_from_spectrum(cubic(3), xi);
    for (std::int64_t i = 0; i < mi.size(); ++i) {
        const int parity = mi.coords(i).sum() % 2;
        CHECK(alt.values()(i) == doctest::Approx(parity == 0 ? 1.0 : -1.0).epsilon(1e-12));
    }

    // flat spectrum gives the delta configuration
    SpectralDensity flat;
    flat.d = 2;
    flat.N = 2;
    flat.values = Eigen::VectorXd::Ones(4);
    const ChargeConfiguration delta = reconstruct_from_spectrum(cubic(2), flat);
    CHECK(delta.values()(0) == doctest::Approx(2.0));  // N^{d/2}
    for (int i = 1; i < 4; ++i) CHECK(delta.values()(i) == doctest::Approx(0.0));

    // round trip on random symmetric nonnegative spectra
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 3;
        const int N = 2 + trial % 3;
        const MultiIndex mr(d, N);
        Eigen::VectorXd v(mr.size());
        for (std::int64_t i = 0; i < mr.size(); ++i) v(i) = u(rng);
        Eigen::VectorXd sym(mr.size());
        for (std::int64_t i = 0; i < mr.size(); ++i)
            sym(i) = 0.5 * (v(i) + v(mr.index(-mr.coords(i))));
        sym *= static_cast<double>(mr.size()) / sym.sum();
        SpectralDensity spec;
        spec.d = d;
        spec.N = N;
        spec.values = sym;
        const ChargeConfiguration phi = reconstruct_from_spectrum(cubic(d), spec);
        CHECK(phi.is_normalized(1e-9));
        const SpectralDensity back = spectral_density(phi);
        CHECK((back.values - sym).cwiseAbs().maxCoeff() < 1e-9);
    }

    // invariant violations rejected
    SpectralDensity bad = flat;
    bad.values(1) = 3.0;
    CHECK_THROWS_AS(reconstruct_from_spectrum(cubic(2), bad), std::invalid_argument);
}

TEST_CASE("alternating configuration") {
    const ChargeConfiguration a1 = alternating(cubic(1));
    CHECK(a1.values()(0) == doctest::Approx(1.0));
    CHECK(a1.values()(1) == doctest::Approx(-1.0));

    const ChargeConfiguration a3 = alternating(cubic(3));
    CHECK(a3.value_at(Eigen::Vector3i(1, 1, 0)) == doctest::Approx(1.0));
    CHECK(a3.total_charge() == doctest::Approx(0.0));
    CHECK(a3.is_normalized());
}

TEST_CASE("cosine_config") {
    // orthorhombic center mode reproduces the alternating signs with c = 1
    const BravaisLattice ortho = orthorhombic({1.0, 2.0, 0.5});
    const ChargeConfiguration cos3 = cosine_config(ortho, 2, Eigen::Vector3i(1, 1, 1));
    const ChargeConfiguration alt3 = alternating(ortho);
    CHECK((cos3.values() - alt3.values()).cwiseAbs().maxCoeff() < 1e-12);

    // triangular barycenter mode reproduces the honeycomb with c = sqrt(2)
    const ChargeConfiguration ctri = cosine_config(triangular(), 3, Eigen::Vector2i(1, 2));
    CHECK((ctri.values() - honeycomb_triangular().values()).cwiseAbs().maxCoeff() < 1e-12);

    // zero mode gives the constant configuration
    const ChargeConfiguration czero = cosine_config(cubic(2), 2, Eigen::Vector2i(0, 0));
    CHECK(czero.values().isApproxToConstant(1.0, 1e-12));
    CHECK_FALSE(czero.is_neutral());
}

TEST_CASE("translation and canonicalization") {
    const ChargeConfiguration hc = honeycomb_triangular();
    const ChargeConfiguration moved = hc.translated(Eigen::Vector2i(1, 0));
    CHECK(moved.value_at(Eigen::Vector2i(0, 0)) == doctest::Approx(-std::sqrt(2.0) / 2.0));
    CHECK((moved.canonicalized().values() - hc.canonicalized().values())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    // sign flips are also quotiented out
    const ChargeConfiguration flipped(hc.lattice(), 3, -hc.values());
    CHECK((flipped.canonicalized().values() - hc.canonicalized().values())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    // canonical representative has the maximal charge at the origin
    CHECK(hc.canonicalized().values()(0) == doctest::Approx(std::sqrt(2.0)));
}
