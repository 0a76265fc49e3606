// potentials.hpp -- completely monotone interaction potentials
// f(x) = int_0^inf e^{-|x|^2 t} dmu_f(t) together with their Ewald split
// pieces f1/f2 and the measure mass mu_f([0, alpha^2]).

#ifndef LATCHARGE_POTENTIALS_HPP
#define LATCHARGE_POTENTIALS_HPP

#include <Eigen/Dense>

#include <functional>
#include <variant>

namespace latcharge {

struct RieszKind {
    double s;  // f(x) = |x|^{-s}, s > 0
};

struct GaussianKind {
    double t0;      // atom location of mu_f
    double weight;  // atom mass; f(x) = weight * e^{-t0 |x|^2}
};

struct CustomDensityKind {
    std::function<double(double)> density;  // dmu_f = density(t) dt, t > 0
    bool summable;                          // declared by the caller
    double quad_tol = 1e-10;
    double support_end = 0.0;  // 0 means unbounded; else density == 0 beyond
};

class Potential {
public:
    static Potential riesz(double s);
    static Potential gaussian(double t0, double weight = 1.0);
    static Potential custom(CustomDensityKind kind);

    bool is_riesz() const { return std::holds_alternative<RieszKind>(kind_); }
    bool is_gaussian() const { return std::holds_alternative<GaussianKind>(kind_); }
    const RieszKind& riesz_kind() const { return std::get<RieszKind>(kind_); }
    const GaussianKind& gaussian_kind() const { return std::get<GaussianKind>(kind_); }

    // True iff sum_{x in X \ {0}} f(x) < inf on a d-dimensional lattice.
    bool summable(int d) const;

    // f at squared distance r2 > 0.
    double evaluate_sq(double r2) const;
    double evaluate(const Eigen::VectorXd& x) const;

    // Short-range piece f1^(alpha)(x) = int_{alpha^2}^inf e^{-t|x|^2} dmu_f.
    double split_short_sq(double alpha, double r2) const;
    double split_short(double alpha, const Eigen::VectorXd& x) const;

    // Long-range piece
    // f2^(alpha)(w) = pi^{d/2} int_0^{alpha^2} t^{-d/2} e^{-pi^2 |w|^2 / t} dmu_f.
    // w = 0 requires an integrable zero mode (Riesz: s > d).
    double split_long_sq(int d, double alpha, double w2) const;
    double split_long(double alpha, const Eigen::VectorXd& w) const;

    // mu_f([0, alpha^2])
    double measure_mass(double alpha) const;

    // int_(a,b] g(t) dmu_f(t); atoms on the boundary follow the same
    // convention as the split pieces (an atom at t = b is included, one at
    // t = a is not). b must be finite for Riesz and custom measures.
    double integrate_measure(const std::function<double(double)>& g, double a,
                             double b) const;

    // Gaussian decay rate of f1^(alpha) terms, for truncation radii.
    double short_range_rate(double alpha) const;

private:
    std::variant<RieszKind, GaussianKind, CustomDensityKind> kind_;
};

// Riesz Laplace measure density t^{s/2-1} / Gamma(s/2).
double riesz_measure_density(double s, double t);

}  // namespace latcharge

#endif
