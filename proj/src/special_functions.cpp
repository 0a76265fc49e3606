// special_functions.cpp -- theta functions, incomplete gamma, Epstein zeta.

#include "latcharge/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace latcharge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// Lower regularized series: P(a,x) * Gamma(a), valid for x < a + 1, a > 0.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x));
}

// Continued fraction for Gamma(a, x) (modified Lentz), x > 0.
// Valid for any real a; rapidly convergent for x not small.
double upper_gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

// E1(x) = Gamma(0, x) by power series, x in (0, 1].
double expint_e1_series(double x) {
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
        term *= -x / k;
        sum -= term / k;
        if (std::abs(term) < 1e-18 * k) break;
    }
    return sum;
}

bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) < tol; }

}  // namespace

double upper_incomplete_gamma(double a, double x) {
    if (x < 0.0 || !std::isfinite(x) || !std::isfinite(a))
        throw std::domain_error("upper_incomplete_gamma: x must be finite and >= 0");
    if (x == 0.0) {
        if (a <= 0.0) throw std::domain_error("upper_incomplete_gamma: x = 0 requires a > 0");
        return std::tgamma(a);
    }
    if (a > 0.0) {
        if (x < a + 1.0) return std::tgamma(a) - lower_gamma_series(a, x);
        return upper_gamma_cf(a, x);
    }
    if (x >= 1.0) return upper_gamma_cf(a, x);
    // Small x, a <= 0: raise a through the recurrence
    // Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
    if (a == 0.0) return expint_e1_series(x);
    const bool integer_a = near_integer(a, 1e-14);
    double b = integer_a ? 0.0 : a - std::floor(a);  // base in (0,1) or exactly 0
    double g = integer_a ? expint_e1_series(x)
                         : std::tgamma(b) - lower_gamma_series(b, x);
    while (b > a + 0.5) {
        b -= 1.0;
        g = (g - std::exp(-x + b * std::log(x))) / b;
    }
    return g;
}

double jacobi_theta3_series(double beta, double t, double tol) {
    if (!(t > 0.0)) throw std::domain_error("jacobi_theta3_series: t must be positive");
    double sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
        sum += 2.0 * std::exp(-kPi * k * k * t) * std::cos(2.0 * kPi * k * beta);
        const double tail = 2.0 * std::exp(-kPi * (k + 1.0) * (k + 1.0) * t) /
                            (1.0 - std::exp(-kPi * (2.0 * k + 3.0) * t));
        if (tail < tol) break;
    }
    return sum;
}

double jacobi_theta3_product(double beta, double t, double tol) {
    if (!(t > 0.0)) throw std::domain_error("jacobi_theta3_product: t must be positive");
    const double q = std::exp(-kPi * t);
    const double c = std::cos(2.0 * kPi * beta);
    double prod = 1.0;
    for (int r = 1; r < 100000; ++r) {
        const double q2r = std::pow(q, 2.0 * r);
        const double qo = std::pow(q, 2.0 * r - 1.0);
        prod *= (1.0 - q2r) * (1.0 + 2.0 * qo * c + qo * qo);
        // remaining factors deviate from 1 by at most ~4 q^{2r+1} each
        if (6.0 * qo * q < 0.01 * tol) break;
    }
    return prod;
}

double gaussian_lattice_tail_bound(const BravaisLattice& lattice, double radius,
                                   double offset_norm, double rate) {
    double bound = 0.0;
    for (int j = 0; j < 10000; ++j) {
        const double r = radius + j;
        const double count = shell_point_count_bound(lattice, r);
        const double w = r - offset_norm > 0.0 ? r - offset_norm : 0.0;
        const double term = count * std::exp(-rate * w * w);
        bound += term;
        if (term < 1e-4 * bound || term < 1e-320) break;
    }
    return bound;
}

double gaussian_truncation_radius(const BravaisLattice& lattice, double offset_norm,
                                  double rate, double tol) {
    double r = offset_norm + std::sqrt(std::max(std::log(1.0 / tol), 1.0) / rate) + 1.0;
    r = std::max(r, lattice.shortest_vector_norm());
    while (gaussian_lattice_tail_bound(lattice, r, offset_norm, rate) > tol) r += 0.5;
    return r;
}

ThetaEvaluation translated_theta(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                 double alpha, double tol) {
    if (!(alpha > 0.0)) throw std::domain_error("translated_theta: alpha must be positive");
    const int d = lattice.dimension();
    if (z.size() != d) throw std::invalid_argument("translated_theta: z dimension mismatch");
    const double covol = lattice.covolume();
    const double alpha_eff = alpha * std::pow(covol, 2.0 / d);

    ThetaEvaluation out;
    if (alpha_eff >= 1.0) {
        out.branch = ThetaBranch::Direct;
        // reduce z into the cell so the sum stays centered
        Eigen::VectorXd frac = lattice.generator().inverse() * z;
        for (int i = 0; i < d; ++i) frac(i) -= std::round(frac(i));
        const Eigen::VectorXd zr = lattice.generator() * frac;
        const double rate = kPi * alpha;
        const double radius = gaussian_truncation_radius(lattice, zr.norm(), rate, tol);
        double sum = 0.0;
        for (const auto& p : points_in_ball(lattice, radius, true, zr))
            sum += std::exp(-rate * p.norm2);
        out.value = sum;
        out.truncation_radius = radius;
        out.tail_bound = gaussian_lattice_tail_bound(lattice, radius, zr.norm(), rate);
    } else {
        out.branch = ThetaBranch::Dual;
        const BravaisLattice dual = lattice.dual();
        const double rate = kPi / alpha;
        const double prefactor = 1.0 / (covol * std::pow(alpha, 0.5 * d));
        const double radius =
            gaussian_truncation_radius(dual, 0.0, rate, tol / std::max(prefactor, 1.0));
        double sum = 0.0;
        for (const auto& p : points_in_ball(dual, radius)) {
            const double phase = 2.0 * kPi * p.x.dot(z);
            sum += std::cos(phase) * std::exp(-rate * p.norm2);
        }
        out.value = prefactor * sum;
        out.truncation_radius = radius;
        out.tail_bound = prefactor * gaussian_lattice_tail_bound(dual, radius, 0.0, rate);
    }
    return out;
}

double jacobi_transform_residual(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                 double alpha, double tol) {
    const int d = lattice.dimension();
    if (std::abs(lattice.covolume() - 1.0) > 1e-9)
        throw std::invalid_argument("jacobi_transform_residual: lattice must have unit density");
    // left side: direct Gaussian sum over X
    Eigen::VectorXd frac = lattice.generator().inverse() * z;
    for (int i = 0; i < d; ++i) frac(i) -= std::round(frac(i));
    const Eigen::VectorXd zr = lattice.generator() * frac;
    const double rate_l = kPi * alpha;
    double lhs = 0.0;
    for (const auto& p :
         points_in_ball(lattice, gaussian_truncation_radius(lattice, zr.norm(), rate_l, tol), true, zr))
        lhs += std::exp(-rate_l * p.norm2);
    // right side: dual sum, summed independently
    const BravaisLattice dual = lattice.dual();
    const double rate_r = kPi / alpha;
    const double pre = std::pow(alpha, -0.5 * d);
    double rhs = 0.0;
    for (const auto& p :
         points_in_ball(dual, gaussian_truncation_radius(dual, 0.0, rate_r, tol / std::max(pre, 1.0))))
        rhs += std::cos(2.0 * kPi * p.x.dot(z)) * std::exp(-rate_r * p.norm2);
    rhs *= pre;
    return std::abs(lhs - rhs);
}

std::complex<double> epstein_zeta(const BravaisLattice& lattice, const Eigen::VectorXd& z,
                                  double s, double tol) {
    const int d = lattice.dimension();
    if (!(s > 0.0)) throw std::domain_error("epstein_zeta: Re s must be positive");
    if (z.size() != d) throw std::invalid_argument("epstein_zeta: z dimension mismatch");
    // z must stay away from Z^d (i.e. the shift away from the dual lattice)
    Eigen::VectorXd zfrac = z;
    for (int i = 0; i < d; ++i) zfrac(i) -= std::round(zfrac(i));
    const Eigen::VectorXd w = lattice.dual_generator() * zfrac;
    if (w.norm() < 1e-9)
        throw std::domain_error("epstein_zeta: z too close to a dual lattice point");

    const double radius = std::sqrt((std::log(1.0 / tol) + 30.0) / kPi) + 1.0;
    // primal sum: terms e^{2 pi i n.z} (pi q)^{-s/2} Gamma(s/2, pi q)
    std::complex<double> s1(0.0, 0.0);
    for (const auto& p : points_in_ball(lattice, radius, false)) {
        const double pq = kPi * p.norm2;
        const double coeff = std::pow(pq, -0.5 * s) * upper_incomplete_gamma(0.5 * s, pq);
        const double phase = 2.0 * kPi * p.n.cast<double>().dot(z);
        s1 += coeff * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    // dual sum: terms (pi q*)^{-(d-s)/2} Gamma((d-s)/2, pi q*), q* over X* + w
    const BravaisLattice dual = lattice.dual();
    const double a = 0.5 * (d - s);
    double s2 = 0.0;
    for (const auto& p : points_in_ball(dual, radius, true, w)) {
        const double pq = kPi * p.norm2;
        s2 += std::pow(pq, -a) * upper_incomplete_gamma(a, pq);
    }
    const std::complex<double> bracket = -2.0 / s + s1 + s2 / lattice.covolume();
    return std::pow(kPi, 0.5 * s) / std::tgamma(0.5 * s) * bracket;
}

}  // namespace latcharge
