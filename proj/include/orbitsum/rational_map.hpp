#ifndef ORBITSUM_RATIONAL_MAP_HPP
#define ORBITSUM_RATIONAL_MAP_HPP

#include <optional>
#include <string>
#include <vector>

#include "orbitsum/polynomial.hpp"
#include "orbitsum/sphere.hpp"

namespace orbitsum {

struct CriticalPoint {
    SpherePoint location;
    int multiplicity = 1;
    bool simple() const { return multiplicity == 1; }
};

struct FixedPoint {
    SpherePoint location;
    cplx multiplier; // derivative at the fixed point (limit chart value at infinity)
};

// Rational map R = P/Q on the Riemann sphere.  Coefficients ascending.
// Derivative data, critical points, critical values and fixed points are
// computed eagerly so instances are immutable and safe to share across
// threads.
class RationalMap {
public:
    RationalMap(std::vector<cplx> num, std::vector<cplx> den, PrecisionConfig cfg = {});

    static RationalMap polynomial(std::vector<cplx> num, PrecisionConfig cfg = {}) {
        return RationalMap(std::move(num), {cplx(1.0)}, cfg);
    }

    const Polynomial& num() const { return p_; }
    const Polynomial& den() const { return q_; }
    int degree() const { return degree_; }
    const PrecisionConfig& precision() const { return cfg_; }
    bool is_polynomial() const { return q_.degree() == 0; }

    SpherePoint evaluate(const SpherePoint& z) const;
    cplx evaluate_finite(cplx z) const; // convenience; throws if image is infinite

    // R'(z) for finite z that is not a pole.
    cplx derivative(cplx z) const;

    // R''(z), via (W'Q - 2WQ')/Q^3 with W = P'Q - PQ'.
    cplx second_derivative(cplx z) const;

    const std::vector<CriticalPoint>& critical_points() const { return critical_; }
    const std::vector<cplx>& finite_critical_points() const { return finite_critical_; }
    const std::vector<cplx>& finite_critical_values() const { return finite_critical_values_; }
    const std::vector<FixedPoint>& fixed_points() const { return fixed_; }

    std::vector<RootCluster> preimages(const SpherePoint& w) const;
    int infinite_preimage_multiplicity(const SpherePoint& w) const;

    double distance_to_critical_set(cplx z) const;
    bool near_critical_value(cplx w, double radius) const;

    std::string describe() const;

private:
    Polynomial p_, q_;
    Polynomial dp_, dq_;
    Polynomial wronskian_; // P'Q - PQ'
    PrecisionConfig cfg_;
    int degree_ = 0;
    std::vector<CriticalPoint> critical_;
    std::vector<cplx> finite_critical_;
    std::vector<cplx> finite_critical_values_;
    std::vector<FixedPoint> fixed_;
};

struct NormalizedMap {
    RationalMap map;
    MoebiusTransform transform;
};

// Conjugate R by the Moebius transform sending the given fixed-point triple to
// (0, 1, inf).  The points must be fixed points of R (to tolerance) and
// pairwise distinct.
NormalizedMap moebius_normalize(const RationalMap& R, SpherePoint z1, SpherePoint z2,
                                SpherePoint z3);

// Default triple: the three fixed points with the largest minimal pairwise
// chordal separation, lexicographic tie-break.
NormalizedMap moebius_normalize(const RationalMap& R);

// M o R o M^{-1} as coefficient-level composition.
RationalMap conjugate(const RationalMap& R, const MoebiusTransform& M);

} // namespace orbitsum

#endif
