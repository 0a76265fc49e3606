// energy.cpp -- periodic per-particle energies through four independent
// summation routes.

#include "latcharge/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "latcharge/quadrature.hpp"
#include "latcharge/special_functions.hpp"

namespace latcharge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double cos_mode(long dot, int N) {
    int r = static_cast<int>(dot % N);
    if (r < 0) r += N;
    return std::cos(2.0 * kPi * r / N);
}

long int_dot(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    long dot = 0;
    for (int i = 0; i < a.size(); ++i) dot += static_cast<long>(a(i)) * b(i);
    return dot;
}

// kappa reduced to {0..N-1}^d and its centered copy in (-N/2, N/2].
Eigen::VectorXi reduce_mod(const Eigen::VectorXi& k, int N) {
    Eigen::VectorXi out = k;
    for (int i = 0; i < out.size(); ++i) {
        out(i) %= N;
        if (out(i) < 0) out(i) += N;
    }
    return out;
}

Eigen::VectorXi center_mod(const Eigen::VectorXi& k, int N) {
    Eigen::VectorXi out = reduce_mod(k, N);
    for (int i = 0; i < out.size(); ++i)
        if (2 * out(i) > N) out(i) -= N;
    return out;
}

// Squared norms |q + w0|^2 over the dual lattice, truncated so the Gaussian
// sum with the given rate is accurate to tol.
std::vector<double> dual_shell_norms(const BravaisLattice& dual, const Eigen::VectorXd& w0,
                                     double rate, double tol) {
    const double radius = gaussian_truncation_radius(dual, w0.norm(), rate, tol);
    std::vector<double> q2;
    for (const auto& p : points_in_ball(dual, radius, true, w0)) q2.push_back(p.norm2);
    return q2;
}

// Tail of sum_{|x| > R} f(|x|^2) by shell counting; f must be decreasing.
double direct_tail_bound(const BravaisLattice& lattice, const Potential& potential,
                         double radius) {
    const int d = lattice.dimension();
    if (potential.is_riesz()) {
        const double s = potential.riesz_kind().s;
        double cover = 0.0;
        for (int i = 0; i < d; ++i) cover += 0.5 * lattice.generator().col(i).norm();
        const double vd = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        // integral comparison: shell density <= vd d (r+1+cover)^{d-1} / covol
        const double stretch = std::pow((radius + 1.0 + cover) / radius, d - 1);
        const double integral =
            vd * d / lattice.covolume() * stretch * std::pow(radius, d - s) / (s - d);
        return integral + shell_point_count_bound(lattice, radius) * std::pow(radius, -s);
    }
    if (potential.is_gaussian()) {
        const auto& g = potential.gaussian_kind();
        return g.weight * gaussian_lattice_tail_bound(lattice, radius, 0.0, g.t0);
    }
    double bound = 0.0;
    for (int j = 0; j < 100000; ++j) {
        const double r = radius + j;
        const double term =
            shell_point_count_bound(lattice, r) * potential.evaluate_sq(r * r);
        bound += term;
        if (term < 1e-8 * bound) return bound;
    }
    return std::numeric_limits<double>::infinity();
}

// Neville polynomial extrapolation of (x_i, y_i) to x = 0; last correction
// applied to the top entry is returned as the error estimate.
std::pair<double, double> neville_to_zero(const std::vector<double>& x,
                                          std::vector<double> y) {
    const int n = static_cast<int>(x.size());
    double prev = y[0];
    for (int m = 1; m < n; ++m) {
        for (int i = 0; i + m < n; ++i)
            y[i] = (x[i] * y[i + 1] - x[i + m] * y[i]) / (x[i] - x[i + m]);
        prev = m == n - 1 ? prev : y[0];
    }
    return {y[0], std::abs(y[0] - prev)};
}

}  // namespace

std::string route_name(EnergyRoute route) {
    switch (route) {
        case EnergyRoute::Direct: return "direct";
        case EnergyRoute::ConvergenceFactor: return "convergence-factor";
        case EnergyRoute::Ewald: return "ewald";
        case EnergyRoute::Spectral: return "spectral";
        case EnergyRoute::Epstein: return "epstein";
    }
    return "unknown";
}

EnergyReport energy_direct(const Potential& potential, const ChargeConfiguration& phi,
                           double radius) {
    const BravaisLattice& L = phi.lattice();
    const int d = L.dimension();
    if (!potential.summable(d))
        throw std::domain_error("energy_direct: potential is not summable");
    const Autocorrelation s = autocorrelation(phi);
    const MultiIndex& mi = phi.indexing();
    const double nd = static_cast<double>(mi.size());

    double sum = 0.0;
    for (const auto& p : points_in_ball(L, radius, false))
        sum += s.values(mi.index(p.n)) * potential.evaluate_sq(p.norm2);

    EnergyReport rep;
    rep.route = EnergyRoute::Direct;
    rep.value = sum / (2.0 * nd);
    rep.radius_real = radius;
    const double smax = s.values.cwiseAbs().maxCoeff();
    rep.estimated_error = smax * direct_tail_bound(L, potential, radius) / (2.0 * nd);
    rep.converged = std::isfinite(rep.estimated_error) &&
                    rep.estimated_error < 1e-6 * std::max(1.0, std::abs(rep.value));
    return rep;
}

EnergyReport energy_convergence_factor(const Potential& potential,
                                       const ChargeConfiguration& phi,
                                       std::vector<double> etas, double tol) {
    const BravaisLattice& L = phi.lattice();
    const int d = L.dimension();
    if (!potential.summable(d) && !phi.is_neutral())
        throw std::domain_error(
            "energy_convergence_factor: non-summable potential requires a neutral "
            "configuration");
    if (etas.empty()) etas = {0.2, 0.1, 0.05, 0.025};
    std::sort(etas.begin(), etas.end(), std::greater<>());
    if (!(etas.back() > 0.0))
        throw std::invalid_argument("energy_convergence_factor: etas must be positive");

    const Autocorrelation s = autocorrelation(phi);
    const MultiIndex& mi = phi.indexing();
    const double nd = static_cast<double>(mi.size());
    const double smax = std::max(s.values.cwiseAbs().maxCoeff(), 1e-300);
    const double r0 = L.shortest_vector_norm();
    const double fmax = potential.evaluate_sq(r0 * r0);

    const double eta_min = etas.back();
    const double radius = gaussian_truncation_radius(
        L, 0.0, eta_min, std::min(tol, 1e-14) / std::max(1.0, smax * fmax));
    std::vector<double> q, c;
    for (const auto& p : points_in_ball(L, radius, false)) {
        q.push_back(p.norm2);
        c.push_back(s.values(mi.index(p.n)) * potential.evaluate_sq(p.norm2));
    }

    std::vector<double> vals(etas.size());
    for (std::size_t j = 0; j < etas.size(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) sum += c[i] * std::exp(-etas[j] * q[i]);
        vals[j] = sum / (2.0 * nd);
    }
    const auto [value, err] = neville_to_zero(etas, vals);

    EnergyReport rep;
    rep.route = EnergyRoute::ConvergenceFactor;
    rep.value = value;
    rep.radius_real = radius;
    rep.estimated_error = err;
    rep.converged = err < 1e-6 * std::max(1.0, std::abs(value));
    return rep;
}

EnergyReport energy_ewald(const Potential& potential, const ChargeConfiguration& phi,
                          double alpha, double tol) {
    if (!(alpha > 0.0)) throw std::domain_error("energy_ewald: alpha must be positive");
    const BravaisLattice& L = phi.lattice();
    const int d = L.dimension();
    const int N = phi.period();
    const bool summable = potential.summable(d);
    if (!summable && !phi.is_neutral())
        throw std::domain_error(
            "energy_ewald: non-summable potential requires a neutral configuration");

    const Autocorrelation s = autocorrelation(phi);
    const SpectralDensity xi = spectral_density(phi);
    const MultiIndex& mi = phi.indexing();
    const double nd = static_cast<double>(mi.size());
    const double smax = std::max(s.values.cwiseAbs().maxCoeff(), 1e-300);
    const double ximax = std::max(xi.values.maxCoeff(), 1e-300);

    EnergyReport rep;
    rep.route = EnergyRoute::Ewald;
    rep.alpha = alpha;

    // real-space half: (1/2N^d) sum_{x != 0} s_x f1(x)
    const double rate_r = potential.short_range_rate(alpha);
    const double radius_r =
        gaussian_truncation_radius(L, 0.0, rate_r, 0.1 * tol / std::max(1.0, smax));
    double sum1 = 0.0;
    if (!(potential.is_gaussian() &&
          potential.gaussian_kind().t0 <= alpha * alpha)) {  // f1 vanishes there
        for (const auto& p : points_in_ball(L, radius_r, false))
            sum1 += s.values(mi.index(p.n)) * potential.split_short_sq(alpha, p.norm2);
    }
    rep.radius_real = radius_r;

    // dual-space half: (1/2N^d covol) sum_p xi_p f2(p / N)
    const BravaisLattice dual = L.dual();
    const double rate_d = kPi * kPi / (static_cast<double>(N) * N * alpha * alpha);
    const double radius_d =
        gaussian_truncation_radius(dual, 0.0, rate_d, 0.1 * tol / std::max(1.0, ximax));
    double sum2 = 0.0;
    for (const auto& p : points_in_ball(dual, radius_d, false)) {
        const double w = xi.values(mi.index(p.n));
        if (w > 1e-300) sum2 += w * potential.split_long_sq(d, alpha, p.norm2 / (N * (double)N));
    }
    if (summable) sum2 += xi.values(0) * potential.split_long_sq(d, alpha, 0.0);
    rep.radius_dual = radius_d;

    const double mu = potential.measure_mass(alpha);
    const double norm2 = phi.values().squaredNorm();
    rep.value = sum1 / (2.0 * nd) + sum2 / (2.0 * nd * L.covolume()) - mu * norm2 / (2.0 * nd);

    const double tail_r = smax * gaussian_lattice_tail_bound(L, radius_r, 0.0, rate_r) *
                          std::max(potential.split_short_sq(alpha, radius_r * radius_r) *
                                       std::exp(rate_r * radius_r * radius_r),
                                   1.0);
    const double tail_d =
        ximax * gaussian_lattice_tail_bound(dual, radius_d, 0.0, rate_d) *
        std::max(potential.split_long_sq(d, alpha, radius_d * radius_d / (N * (double)N)) *
                     std::exp(rate_d * radius_d * radius_d),
                 1.0);
    rep.estimated_error = tail_r / (2.0 * nd) + tail_d / (2.0 * nd * L.covolume());
    rep.converged = rep.estimated_error < std::max(tol * 10.0, 1e-10);
    return rep;
}

double mode_energy_summable(const BravaisLattice& lattice, const Potential& potential,
                            const Eigen::VectorXi& k, int N, double tol) {
    const int d = lattice.dimension();
    if (k.size() != d) throw std::invalid_argument("mode_energy_summable: k dimension mismatch");
    if (!potential.summable(d))
        throw std::domain_error("mode_energy_summable: potential is not summable");
    const Eigen::VectorXi kappa = reduce_mod(k, N);
    const Eigen::VectorXi kc = center_mod(k, N);
    const double alpha2 = kPi;  // split at alpha = sqrt(pi)

    // short-range half, summed directly with the mode phases
    const double rate_r = potential.short_range_rate(std::sqrt(alpha2));
    const double radius_r = gaussian_truncation_radius(lattice, 0.0, rate_r, 0.1 * tol);
    double sum = 0.0;
    if (!(potential.is_gaussian() && potential.gaussian_kind().t0 <= alpha2)) {
        for (const auto& p : points_in_ball(lattice, radius_r, false))
            sum += cos_mode(int_dot(p.n, kappa), N) *
                   potential.split_short_sq(std::sqrt(alpha2), p.norm2);
    }

    // long-range half through the dual theta representation:
    // int_0^{alpha^2} [ (1/covol)(pi/t)^{d/2} sum_q e^{-pi^2 |q+w0|^2/t} - 1 ] dmu(t)
    const BravaisLattice dual = lattice.dual();
    const Eigen::VectorXd w0 = dual.generator() * kc.cast<double>() / N;
    const std::vector<double> q2 =
        dual_shell_norms(dual, w0, kPi * kPi / alpha2, 0.01 * tol);
    const double covol = lattice.covolume();
    auto g = [&](double t) {
        double theta = 0.0;
        for (double v : q2) theta += std::exp(-kPi * kPi * v / t);
        return std::pow(kPi / t, 0.5 * d) * theta / covol - 1.0;
    };
    sum += potential.integrate_measure(g, 0.0, alpha2);
    return sum;
}

double mode_energy_ewald(const BravaisLattice& lattice, const Potential& potential,
                         const Eigen::VectorXi& k, int N, double alpha, double tol) {
    const int d = lattice.dimension();
    if (k.size() != d) throw std::invalid_argument("mode_energy_ewald: k dimension mismatch");
    if (!(alpha > 0.0)) throw std::domain_error("mode_energy_ewald: alpha must be positive");
    const Eigen::VectorXi kappa = reduce_mod(k, N);
    const bool zero_mode = kappa.isZero();
    if (zero_mode && !potential.summable(d))
        throw std::domain_error("mode_energy_ewald: zero mode diverges for this potential");

    const double rate_r = potential.short_range_rate(alpha);
    const double radius_r = gaussian_truncation_radius(lattice, 0.0, rate_r, 0.1 * tol);
    double sum1 = 0.0;
    if (!(potential.is_gaussian() && potential.gaussian_kind().t0 <= alpha * alpha)) {
        for (const auto& p : points_in_ball(lattice, radius_r, false))
            sum1 += cos_mode(int_dot(p.n, kappa), N) *
                    potential.split_short_sq(alpha, p.norm2);
    }

    const BravaisLattice dual = lattice.dual();
    const Eigen::VectorXi kc = center_mod(k, N);
    const Eigen::VectorXd w0 = dual.generator() * kc.cast<double>() / N;
    const double rate_d = kPi * kPi / (alpha * alpha);
    const double radius_d = gaussian_truncation_radius(dual, w0.norm(), rate_d, 0.1 * tol);
    double sum2 = 0.0;
    for (const auto& p : points_in_ball(dual, radius_d, true, w0)) {
        if (zero_mode && p.norm2 <= 0.0) {
            sum2 += potential.split_long_sq(d, alpha, 0.0);
        } else {
            sum2 += potential.split_long_sq(d, alpha, p.norm2);
        }
    }
    return sum1 + sum2 / lattice.covolume();
}

EnergyReport energy_spectral(const Potential& potential, const ChargeConfiguration& phi,
                             std::optional<double> alpha, double tol) {
    const BravaisLattice& L = phi.lattice();
    const int d = L.dimension();
    const int N = phi.period();
    const bool summable = potential.summable(d);
    if (!summable && !phi.is_neutral())
        throw std::domain_error(
            "energy_spectral: non-summable potential requires a neutral configuration");

    const SpectralDensity xi = spectral_density(phi);
    const MultiIndex& mi = phi.indexing();
    const double nd = static_cast<double>(mi.size());
    const double thresh = 1e-13 * nd;

    EnergyReport rep;
    rep.route = EnergyRoute::Spectral;
    const bool use_ewald_modes = alpha.has_value() || !summable;
    const double a = alpha.value_or(kDefaultEwaldAlpha);
    rep.alpha = use_ewald_modes ? a : 0.0;

    double acc = 0.0;
    for (std::int64_t ik = 0; ik < mi.size(); ++ik) {
        const double w = xi.values(ik);
        if (w <= thresh) continue;
        const Eigen::VectorXi k = mi.coords(ik);
        if (!summable && k.isZero())
            throw std::domain_error("energy_spectral: nonzero spectral weight at the zero mode");
        const double ek = use_ewald_modes ? mode_energy_ewald(L, potential, k, N, a, tol)
                                          : mode_energy_summable(L, potential, k, N, tol);
        acc += w * ek;
        rep.mode_table.push_back(ModeEnergy{k, ek});
    }
    rep.value = acc / (2.0 * nd);
    if (use_ewald_modes) {
        const double mu = potential.measure_mass(a);
        rep.value -= mu * phi.values().squaredNorm() / (2.0 * nd);
    }
    rep.estimated_error = 10.0 * tol;
    return rep;
}

EnergyReport energy_epstein(double s, const ChargeConfiguration& phi, double tol) {
    const BravaisLattice& L = phi.lattice();
    const int d = L.dimension();
    if (!(s > 0.0) || s > d)
        throw std::domain_error("energy_epstein: s must lie in (0, d]");
    if (!phi.is_neutral())
        throw std::domain_error("energy_epstein: configuration must be neutral");

    const SpectralDensity xi = spectral_density(phi);
    const MultiIndex& mi = phi.indexing();
    const int N = phi.period();
    const double nd = static_cast<double>(mi.size());
    const double thresh = 1e-13 * nd;

    EnergyReport rep;
    rep.route = EnergyRoute::Epstein;
    rep.boundary_s = std::abs(s - d) < 1e-12;
    double acc = 0.0;
    for (std::int64_t ik = 0; ik < mi.size(); ++ik) {
        const double w = xi.values(ik);
        if (w <= thresh) continue;
        const Eigen::VectorXi k = mi.coords(ik);
        if (k.isZero())
            throw std::domain_error("energy_epstein: nonzero spectral weight at the zero mode");
        const Eigen::VectorXd z = k.cast<double>() / N;
        const double zk = epstein_zeta(L, z, s, tol).real();
        acc += w * zk;
        rep.mode_table.push_back(ModeEnergy{k, zk});
    }
    rep.value = acc / (2.0 * nd);
    rep.estimated_error = 10.0 * tol;
    return rep;
}

Eigen::MatrixXd interaction_matrix(const BravaisLattice& lattice, const Potential& potential,
                                   int N, double alpha, double tol) {
    if (N < 1) throw std::invalid_argument("interaction_matrix: N must be >= 1");
    if (!(alpha > 0.0)) throw std::domain_error("interaction_matrix: alpha must be positive");
    const int d = lattice.dimension();
    const bool summable = potential.summable(d);
    const MultiIndex mi(d, N);
    const double nd = static_cast<double>(mi.size());

    // G1(m) = sum over x = m (mod N), x != 0, of f1(x)
    Eigen::VectorXd g1 = Eigen::VectorXd::Zero(mi.size());
    if (!(potential.is_gaussian() && potential.gaussian_kind().t0 <= alpha * alpha)) {
        const double rate_r = potential.short_range_rate(alpha);
        const double radius_r = gaussian_truncation_radius(lattice, 0.0, rate_r, 0.1 * tol);
        for (const auto& p : points_in_ball(lattice, radius_r, false))
            g1(mi.index(p.n)) += potential.split_short_sq(alpha, p.norm2);
    }

    // G2(m) = (1/N^d) sum_p cos(2 pi m.n_p / N) f2(p / N)
    Eigen::VectorXd g2 = Eigen::VectorXd::Zero(mi.size());
    const BravaisLattice dual = lattice.dual();
    const double rate_d = kPi * kPi / (static_cast<double>(N) * N * alpha * alpha);
    const double radius_d = gaussian_truncation_radius(dual, 0.0, rate_d, 0.1 * tol);
    for (const auto& p : points_in_ball(dual, radius_d, summable)) {
        const double f2 = p.norm2 > 0.0
                              ? potential.split_long_sq(d, alpha, p.norm2 / (N * (double)N))
                              : potential.split_long_sq(d, alpha, 0.0);
        for (std::int64_t im = 0; im < mi.size(); ++im)
            g2(im) += cos_mode(int_dot(mi.coords(im), p.n), N) * f2 / nd;
    }

    const double mu = potential.measure_mass(alpha);
    const double covol = lattice.covolume();
    Eigen::MatrixXd M(mi.size(), mi.size());
    for (std::int64_t iy = 0; iy < mi.size(); ++iy) {
        const Eigen::VectorXi y = mi.coords(iy);
        for (std::int64_t iz = 0; iz < mi.size(); ++iz) {
            const std::int64_t im = mi.index(mi.coords(iz) - y);
            double v = (g1(im) + g2(im) / covol) / (2.0 * nd);
            if (iy == iz) v -= mu / (2.0 * nd);
            M(iy, iz) = v;
        }
    }
    return M;
}

}  // namespace latcharge
