// potentials.cpp -- interaction potentials and Ewald split pieces.

#include "latcharge/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "latcharge/quadrature.hpp"
#include "latcharge/special_functions.hpp"

namespace latcharge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Integrate rho over [a, b] with a t = u^2 substitution near zero to absorb
// integrable endpoint singularities.
double measure_integral(const CustomDensityKind& k, const std::function<double(double)>& g,
                        double a, double b) {
    if (k.support_end > 0.0) b = std::min(b, k.support_end);
    if (b <= a) return 0.0;
    auto integrand = [&](double t) { return g(t) * k.density(t); };
    double total = 0.0;
    const double split = std::min(b, std::max(a, 1.0));
    if (a < split) {
        // t = u^2
        auto sub = [&](double u) { return 2.0 * u * integrand(u * u); };
        total += integrate(sub, std::sqrt(a), std::sqrt(split), k.quad_tol).value;
    }
    if (split < b) total += integrate(integrand, split, b, k.quad_tol).value;
    return total;
}

// The boundary atom t0 = alpha^2 belongs to the long-range piece; compared
// with a relative slack so alpha = sqrt(t0) lands on the boundary exactly.
bool atom_in_long_range(double t0, double a2) { return t0 <= a2 * (1.0 + 1e-12); }

double custom_upper_limit(const CustomDensityKind& k, double r2) {
    if (k.support_end > 0.0) return k.support_end;
    return (std::log(1.0 / k.quad_tol) + 30.0) / std::max(r2, 1e-8);
}

}  // namespace

Potential Potential::riesz(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("Potential::riesz: s must be positive");
    Potential p;
    p.kind_ = RieszKind{s};
    return p;
}

Potential Potential::gaussian(double t0, double weight) {
    if (!(t0 > 0.0) || weight < 0.0)
        throw std::invalid_argument("Potential::gaussian: need t0 > 0 and weight >= 0");
    Potential p;
    p.kind_ = GaussianKind{t0, weight};
    return p;
}

Potential Potential::custom(CustomDensityKind kind) {
    if (!kind.density) throw std::invalid_argument("Potential::custom: density required");
    Potential p;
    p.kind_ = std::move(kind);
    return p;
}

bool Potential::summable(int d) const {
    if (is_riesz()) return riesz_kind().s > d;
    if (is_gaussian()) return true;
    return std::get<CustomDensityKind>(kind_).summable;
}

double Potential::evaluate_sq(double r2) const {
    if (!(r2 > 0.0)) throw std::domain_error("Potential::evaluate: x must be nonzero");
    if (is_riesz()) return std::pow(r2, -0.5 * riesz_kind().s);
    if (is_gaussian()) {
        const auto& g = gaussian_kind();
        return g.weight * std::exp(-g.t0 * r2);
    }
    const auto& k = std::get<CustomDensityKind>(kind_);
    return measure_integral(k, [r2](double t) { return std::exp(-t * r2); }, 0.0,
                            custom_upper_limit(k, r2));
}

double Potential::evaluate(const Eigen::VectorXd& x) const { return evaluate_sq(x.squaredNorm()); }

double Potential::split_short_sq(double alpha, double r2) const {
    if (!(r2 > 0.0)) throw std::domain_error("Potential::split_short: x must be nonzero");
    if (!(alpha > 0.0)) throw std::domain_error("Potential::split_short: alpha must be positive");
    const double a2 = alpha * alpha;
    if (is_riesz()) {
        const double s = riesz_kind().s;
        return upper_incomplete_gamma(0.5 * s, a2 * r2) /
               (std::tgamma(0.5 * s) * std::pow(r2, 0.5 * s));
    }
    if (is_gaussian()) {
        const auto& g = gaussian_kind();
        return atom_in_long_range(g.t0, a2) ? 0.0 : g.weight * std::exp(-g.t0 * r2);
    }
    const auto& k = std::get<CustomDensityKind>(kind_);
    return measure_integral(k, [r2](double t) { return std::exp(-t * r2); }, a2,
                            std::max(custom_upper_limit(k, r2), a2));
}

double Potential::split_short(double alpha, const Eigen::VectorXd& x) const {
    return split_short_sq(alpha, x.squaredNorm());
}

double Potential::split_long_sq(int d, double alpha, double w2) const {
    if (!(alpha > 0.0)) throw std::domain_error("Potential::split_long: alpha must be positive");
    const double a2 = alpha * alpha;
    if (is_riesz()) {
        const double s = riesz_kind().s;
        if (w2 <= 0.0) {
            if (s <= d)
                throw std::domain_error("Potential::split_long: divergent zero mode for s <= d");
            return std::pow(kPi, 0.5 * d) * 2.0 * std::pow(alpha, s - d) /
                   ((s - d) * std::tgamma(0.5 * s));
        }
        // substitution u = pi^2 |w|^2 / t in the defining integral
        const double x = kPi * kPi * w2 / a2;
        return std::pow(kPi, s - 0.5 * d) * std::pow(w2, 0.5 * (s - d)) *
               upper_incomplete_gamma(0.5 * (d - s), x) / std::tgamma(0.5 * s);
    }
    if (is_gaussian()) {
        const auto& g = gaussian_kind();
        if (!atom_in_long_range(g.t0, a2)) return 0.0;
        return g.weight * std::pow(kPi / g.t0, 0.5 * d) * std::exp(-kPi * kPi * w2 / g.t0);
    }
    const auto& k = std::get<CustomDensityKind>(kind_);
    auto g = [w2, d](double t) {
        return std::pow(t, -0.5 * d) * std::exp(-kPi * kPi * w2 / t);
    };
    return std::pow(kPi, 0.5 * d) * measure_integral(k, g, 0.0, a2);
}

double Potential::split_long(double alpha, const Eigen::VectorXd& w) const {
    return split_long_sq(static_cast<int>(w.size()), alpha, w.squaredNorm());
}

double Potential::measure_mass(double alpha) const {
    if (!(alpha > 0.0)) throw std::domain_error("Potential::measure_mass: alpha must be positive");
    const double a2 = alpha * alpha;
    if (is_riesz()) {
        const double s = riesz_kind().s;
        return 2.0 * std::pow(alpha, s) / (s * std::tgamma(0.5 * s));
    }
    if (is_gaussian()) {
        const auto& g = gaussian_kind();
        return atom_in_long_range(g.t0, a2) ? g.weight : 0.0;
    }
    const auto& k = std::get<CustomDensityKind>(kind_);
    return measure_integral(k, [](double) { return 1.0; }, 0.0, a2);
}

double Potential::integrate_measure(const std::function<double(double)>& g, double a,
                                    double b) const {
    if (!(a >= 0.0) || !(b > a))
        throw std::domain_error("Potential::integrate_measure: need 0 <= a < b");
    if (is_gaussian()) {
        const auto& gk = gaussian_kind();
        return (!atom_in_long_range(gk.t0, a) && atom_in_long_range(gk.t0, b))
                   ? gk.weight * g(gk.t0)
                   : 0.0;
    }
    if (!std::isfinite(b))
        throw std::domain_error("Potential::integrate_measure: b must be finite");
    if (is_riesz()) {
        const double s = riesz_kind().s;
        CustomDensityKind k;
        k.density = [s](double t) { return riesz_measure_density(s, t); };
        k.quad_tol = 1e-12;
        return measure_integral(k, g, a, b);
    }
    return measure_integral(std::get<CustomDensityKind>(kind_), g, a, b);
}

double Potential::short_range_rate(double alpha) const {
    if (is_gaussian()) return std::max(gaussian_kind().t0, alpha * alpha);
    return alpha * alpha;
}

double riesz_measure_density(double s, double t) {
    if (!(s > 0.0) || !(t > 0.0))
        throw std::domain_error("riesz_measure_density: s and t must be positive");
    return std::pow(t, 0.5 * s - 1.0) / std::tgamma(0.5 * s);
}

}  // namespace latcharge
