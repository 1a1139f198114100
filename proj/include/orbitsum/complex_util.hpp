#ifndef ORBITSUM_COMPLEX_UTIL_HPP
#define ORBITSUM_COMPLEX_UTIL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace orbitsum {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi_v<double>;

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

// Chordal (spherical) distance on the Riemann sphere, diameter 2.
inline double chordal(cplx a, cplx b) {
    return 2.0 * std::abs(a - b) / std::sqrt((1.0 + abs2(a)) * (1.0 + abs2(b)));
}

inline double chordal_to_infinity(cplx a) {
    return 2.0 / std::sqrt(1.0 + abs2(a));
}

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double t) {
    t = std::fmod(t, 2.0 * kPi);
    if (t <= -kPi) t += 2.0 * kPi;
    else if (t > kPi) t -= 2.0 * kPi;
    return t;
}

// Complex value in log-polar form: exp(log_mod) * e^{i arg}.
struct LogPolar {
    double log_mod = 0.0; // log of modulus; -inf encodes exact zero
    double arg = 0.0;     // in (-pi, pi]

    static LogPolar from(cplx z) {
        if (z == cplx(0.0, 0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
        return {std::log(std::abs(z)), std::arg(z)};
    }
    cplx value() const {
        double m = std::exp(log_mod);
        return {m * std::cos(arg), m * std::sin(arg)};
    }
    LogPolar mul(const LogPolar& o) const { return {log_mod + o.log_mod, wrap_angle(arg + o.arg)}; }
    LogPolar div(const LogPolar& o) const { return {log_mod - o.log_mod, wrap_angle(arg - o.arg)}; }
};

// Streaming complex sum that renormalizes to avoid overflow/underflow of the
// accumulator.  While no rescale has happened (log_scale == 0) the value is
// bit-identical to a plain running sum.
class ScaledComplexSum {
public:
    void add(cplx term) {
        acc_ += term * std::exp(-log_scale_);
        double a = std::abs(acc_);
        if (a > 1e150 || (a != 0.0 && a < 1e-150)) {
            double shift = std::log(a);
            acc_ *= std::exp(-shift);
            log_scale_ += shift;
        }
    }
    cplx value() const { return acc_ * std::exp(log_scale_); }
    double log_abs() const {
        double a = std::abs(acc_);
        if (a == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(a) + log_scale_;
    }
    double arg() const { return std::arg(acc_); }

private:
    cplx acc_{0.0, 0.0};
    double log_scale_ = 0.0;
};

// Deterministic 64-bit generator (splitmix64) for seeded sampling.  Plain and
// platform-stable; not for cryptography.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    cplx complex_in_box(double lo, double hi) {
        double re = uniform(lo, hi);
        double im = uniform(lo, hi);
        return {re, im};
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
    std::uint64_t h = 1469598103934665603ULL ^ base;
    for (char c : tag) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
        h *= 1099511628211ULL;
    }
    return h;
}

// Lexicographic order by (re, im); used everywhere a deterministic ordering
// of complex values is needed.
inline bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

} // namespace orbitsum

#endif
