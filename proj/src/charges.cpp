// charges.cpp -- periodic charge configurations and lattice Fourier analysis.

#include "latcharge/charges.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace latcharge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// exp(-2 pi i j / N) table
std::vector<std::complex<double>> twiddle(int N, double sign) {
    std::vector<std::complex<double>> w(N);
    for (int j = 0; j < N; ++j) {
        const double phase = sign * 2.0 * kPi * j / N;
        w[j] = {std::cos(phase), std::sin(phase)};
    }
    return w;
}

Eigen::VectorXcd dense_transform(const Eigen::VectorXcd& in, int d, int N, double sign) {
    const MultiIndex mi(d, N);
    if (in.size() != mi.size()) throw std::invalid_argument("transform: size mismatch");
    const auto w = twiddle(N, sign);
    Eigen::VectorXcd out(in.size());
    const double scale = std::pow(static_cast<double>(N), -0.5 * d);
    for (std::int64_t ik = 0; ik < mi.size(); ++ik) {
        const Eigen::VectorXi k = mi.coords(ik);
        std::complex<double> acc(0.0, 0.0);
        for (std::int64_t im = 0; im < mi.size(); ++im) {
            const Eigen::VectorXi m = mi.coords(im);
            long dot = 0;
            for (int i = 0; i < d; ++i) dot += static_cast<long>(m(i)) * k(i);
            acc += in(im) * w[static_cast<int>(dot % N)];
        }
        out(ik) = scale * acc;
    }
    return out;
}

}  // namespace

ChargeConfiguration::ChargeConfiguration(const BravaisLattice& lattice, int N,
                                         Eigen::VectorXd values)
    : lattice_(lattice), N_(N), index_(lattice.dimension(), N), values_(std::move(values)) {
    if (values_.size() != index_.size())
        throw std::invalid_argument("ChargeConfiguration: expected N^d values");
}

ChargeConfiguration ChargeConfiguration::translated(const Eigen::VectorXi& shift) const {
    Eigen::VectorXd out(values_.size());
    for (std::int64_t i = 0; i < index_.size(); ++i) {
        Eigen::VectorXi m = index_.coords(i);
        out(i) = values_(index_.index(m + shift));
    }
    return ChargeConfiguration(lattice_, N_, std::move(out));
}

ChargeConfiguration ChargeConfiguration::canonicalized() const {
    Eigen::VectorXd best = values_;
    bool have = false;
    auto consider = [&](const Eigen::VectorXd& cand) {
        if (!have) {
            best = cand;
            have = true;
            return;
        }
        for (std::int64_t i = 0; i < cand.size(); ++i) {
            if (cand(i) > best(i) + 1e-12) {
                best = cand;
                return;
            }
            if (cand(i) < best(i) - 1e-12) return;
        }
    };
    for (std::int64_t i = 0; i < index_.size(); ++i) {
        const ChargeConfiguration t = translated(index_.coords(i));
        consider(t.values());
        consider(-t.values());
    }
    return ChargeConfiguration(lattice_, N_, best);
}

Eigen::VectorXcd dft(const Eigen::VectorXcd& phi, int d, int N) {
    return dense_transform(phi, d, N, -1.0);
}

Eigen::VectorXcd idft(const Eigen::VectorXcd& psi, int d, int N) {
    return dense_transform(psi, d, N, +1.0);
}

Autocorrelation autocorrelation(const ChargeConfiguration& phi) {
    const MultiIndex& mi = phi.indexing();
    const int d = mi.dimension();
    const int N = mi.period();
    Autocorrelation s;
    s.d = d;
    s.N = N;
    s.values.resize(mi.size());
    for (std::int64_t ix = 0; ix < mi.size(); ++ix) {
        const Eigen::VectorXi x = mi.coords(ix);
        double acc = 0.0;
        for (std::int64_t iy = 0; iy < mi.size(); ++iy) {
            const Eigen::VectorXi y = mi.coords(iy);
            acc += phi.values()(iy) * phi.values()(mi.index(y + x));
        }
        s.values(ix) = acc;
    }
    return s;
}

SpectralDensity spectral_density(const ChargeConfiguration& phi) {
    const Autocorrelation s = autocorrelation(phi);
    const MultiIndex mi(s.d, s.N);
    // xi = N^{-d/2} idft(s)
    const Eigen::VectorXcd xs = idft(s.values.cast<std::complex<double>>(), s.d, s.N);
    const double scale = std::pow(static_cast<double>(s.N), -0.5 * s.d);
    SpectralDensity xi;
    xi.d = s.d;
    xi.N = s.N;
    xi.values.resize(mi.size());
    for (std::int64_t k = 0; k < mi.size(); ++k) {
        const std::complex<double> v = scale * xs(k);
        if (std::abs(v.imag()) > 1e-10)
            throw std::runtime_error("spectral_density: non-real spectrum");
        double re = v.real();
        if (re < 0.0) {
            if (re < -1e-12 * static_cast<double>(mi.size()))
                throw std::runtime_error("spectral_density: negative spectral weight");
            re = 0.0;
        }
        xi.values(k) = re;
    }
    return xi;
}

ChargeConfiguration reconstruct_from_spectrum(const BravaisLattice& lattice,
                                              const SpectralDensity& xi) {
    const MultiIndex mi(xi.d, xi.N);
    if (xi.values.size() != mi.size())
        throw std::invalid_argument("reconstruct_from_spectrum: size mismatch");
    const double nd = static_cast<double>(mi.size());
    if (std::abs(xi.values.sum() / nd - 1.0) > 1e-8)
        throw std::invalid_argument("reconstruct_from_spectrum: spectrum not normalized");
    for (std::int64_t k = 0; k < mi.size(); ++k) {
        if (xi.values(k) < -1e-12)
            throw std::invalid_argument("reconstruct_from_spectrum: negative weight");
        Eigen::VectorXi mk = -mi.coords(k);
        if (std::abs(xi.values(k) - xi.values(mi.index(mk))) > 1e-9)
            throw std::invalid_argument("reconstruct_from_spectrum: spectrum not symmetric");
    }
    Eigen::VectorXd phi(mi.size());
    const double scale = std::pow(static_cast<double>(xi.N), -0.5 * xi.d);
    for (std::int64_t ix = 0; ix < mi.size(); ++ix) {
        const Eigen::VectorXi x = mi.coords(ix);
        double acc = 0.0;
        for (std::int64_t ik = 0; ik < mi.size(); ++ik) {
            const Eigen::VectorXi k = mi.coords(ik);
            long dot = 0;
            for (int i = 0; i < xi.d; ++i) dot += static_cast<long>(x(i)) * k(i);
            acc += std::sqrt(std::max(xi.values(ik), 0.0)) *
                   std::cos(2.0 * kPi * (dot % xi.N) / xi.N);
        }
        phi(ix) = scale * acc;
    }
    return ChargeConfiguration(lattice, xi.N, std::move(phi));
}

ChargeConfiguration alternating(const BravaisLattice& lattice) {
    const MultiIndex mi(lattice.dimension(), 2);
    Eigen::VectorXd phi(mi.size());
    for (std::int64_t i = 0; i < mi.size(); ++i)
        phi(i) = mi.coords(i).sum() % 2 == 0 ? 1.0 : -1.0;
    return ChargeConfiguration(lattice, 2, std::move(phi));
}

ChargeConfiguration honeycomb_triangular() {
    const BravaisLattice tri = triangular();
    const MultiIndex mi(2, 3);
    Eigen::VectorXd phi(mi.size());
    for (std::int64_t i = 0; i < mi.size(); ++i) {
        const Eigen::VectorXi m = mi.coords(i);
        // +sqrt(2) on the index-3 triangular sublattice {m1 = m2 mod 3}; the
        // remaining sites carry -sqrt(2)/2 and form the honeycomb.
        phi(i) = std::sqrt(2.0) * std::cos(2.0 * kPi * (((m(0) - m(1)) % 3 + 3) % 3) / 3.0);
    }
    return ChargeConfiguration(tri, 3, std::move(phi));
}

ChargeConfiguration cosine_config(const BravaisLattice& lattice, int N,
                                  const Eigen::VectorXi& k0) {
    const int d = lattice.dimension();
    if (k0.size() != d) throw std::invalid_argument("cosine_config: k0 dimension mismatch");
    const MultiIndex mi(d, N);
    Eigen::VectorXd raw(mi.size());
    for (std::int64_t i = 0; i < mi.size(); ++i) {
        const Eigen::VectorXi m = mi.coords(i);
        long dot = 0;
        for (int j = 0; j < d; ++j) dot += static_cast<long>(m(j)) * k0(j);
        raw(i) = std::cos(2.0 * kPi * (dot % N) / N);
    }
    const double norm2 = raw.squaredNorm();
    if (norm2 < 1e-12)
        throw std::invalid_argument("cosine_config: k0 not representable at period N");
    const double c = std::sqrt(static_cast<double>(mi.size()) / norm2);
    return ChargeConfiguration(lattice, N, c * raw);
}

}  // namespace latcharge
