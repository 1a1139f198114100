#ifndef ORBITSUM_SPHERE_HPP
#define ORBITSUM_SPHERE_HPP

#include <cmath>
#include <string>

#include "orbitsum/complex_util.hpp"
#include "orbitsum/error.hpp"

namespace orbitsum {

// A point on the Riemann sphere: a finite complex value or the point at
// infinity.  Finite values never carry NaN components.
class SpherePoint {
public:
    SpherePoint() : value_(0.0, 0.0), infinite_(false) {}
    SpherePoint(cplx z) : value_(z), infinite_(false) { // NOLINT(google-explicit-constructor)
        require(is_finite(z), "sphere point: finite value has NaN/Inf component");
    }
    SpherePoint(double re, double im) : SpherePoint(cplx(re, im)) {}

    static SpherePoint infinity() {
        SpherePoint p;
        p.infinite_ = true;
        return p;
    }

    bool is_infinity() const { return infinite_; }
    cplx finite() const {
        require(!infinite_, "sphere point: finite() called on infinity");
        return value_;
    }

    double chordal_to(const SpherePoint& o) const {
        if (infinite_ && o.infinite_) return 0.0;
        if (infinite_) return chordal_to_infinity(o.value_);
        if (o.infinite_) return chordal_to_infinity(value_);
        return chordal(value_, o.value_);
    }

    bool operator==(const SpherePoint& o) const {
        if (infinite_ || o.infinite_) return infinite_ == o.infinite_;
        return value_ == o.value_;
    }
    bool operator!=(const SpherePoint& o) const { return !(*this == o); }

    std::string str() const {
        if (infinite_) return "inf";
        return "(" + std::to_string(value_.real()) + ", " + std::to_string(value_.imag()) + ")";
    }

private:
    cplx value_;
    bool infinite_;
};

// Numerical working parameters.  mantissa_bits in (53, 64] switches the orbit
// and root-polishing kernels to long double; above 64 is rejected.
struct PrecisionConfig {
    int mantissa_bits = 53;
    int series_truncation = 256;
    double root_tolerance = 1e-8;
    int grid_resolution = 256;

    void validate() const {
        require(mantissa_bits >= 53, "precision: mantissa_bits must be >= 53");
        require(mantissa_bits <= 64, "precision: mantissa_bits above 64 unsupported");
        require(series_truncation >= 1, "precision: series_truncation must be >= 1");
        require(root_tolerance > 0.0, "precision: root_tolerance must be positive");
        require(grid_resolution > 0, "precision: grid_resolution must be positive");
    }
};

// z -> (a z + b) / (c z + d), stored with det normalized to 1.
class MoebiusTransform {
public:
    MoebiusTransform() : a_(1.0), b_(0.0), c_(0.0), d_(1.0) {}
    MoebiusTransform(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d) {
        cplx det = a_ * d_ - b_ * c_;
        require(std::abs(det) > 1e-14, "moebius: degenerate transform (det ~ 0)");
        cplx s = std::sqrt(det);
        a_ /= s; b_ /= s; c_ /= s; d_ /= s;
    }

    // Maps three distinct sphere points to (0, 1, inf).
    static MoebiusTransform to_standard_triple(SpherePoint z1, SpherePoint z2, SpherePoint z3);

    static MoebiusTransform identity() { return MoebiusTransform(); }

    MoebiusTransform inverse() const {
        MoebiusTransform m;
        m.a_ = d_; m.b_ = -b_; m.c_ = -c_; m.d_ = a_;
        return m;
    }

    SpherePoint apply(const SpherePoint& z) const {
        if (z.is_infinity()) {
            if (std::abs(c_) == 0.0) return SpherePoint::infinity();
            return SpherePoint(a_ / c_);
        }
        cplx w = z.finite();
        cplx den = c_ * w + d_;
        cplx num = a_ * w + b_;
        if (std::abs(den) == 0.0) return SpherePoint::infinity();
        return SpherePoint(num / den);
    }

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }

    bool is_identity(double tol = 1e-12) const {
        return std::abs(b_) <= tol && std::abs(c_) <= tol && std::abs(a_ - d_) <= tol;
    }

private:
    cplx a_, b_, c_, d_;
};

inline MoebiusTransform MoebiusTransform::to_standard_triple(SpherePoint z1, SpherePoint z2,
                                                             SpherePoint z3) {
    require(z1 != z2 && z2 != z3 && z1 != z3, "moebius: triple points must be pairwise distinct");
    // M(z) = (z - z1)(z2 - z3) / ((z - z3)(z2 - z1)), with limits when one of
    // the points is infinity.
    if (z3.is_infinity()) {
        cplx p1 = z1.finite(), p2 = z2.finite();
        return MoebiusTransform(cplx(1.0), -p1, cplx(0.0), p2 - p1);
    }
    if (z1.is_infinity()) {
        cplx p2 = z2.finite(), p3 = z3.finite();
        return MoebiusTransform(cplx(0.0), p2 - p3, cplx(1.0), -p3);
    }
    if (z2.is_infinity()) {
        cplx p1 = z1.finite(), p3 = z3.finite();
        return MoebiusTransform(cplx(1.0), -p1, cplx(1.0), -p3);
    }
    cplx p1 = z1.finite(), p2 = z2.finite(), p3 = z3.finite();
    return MoebiusTransform(p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1));
}

} // namespace orbitsum

#endif
