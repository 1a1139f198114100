#ifndef ORBITSUM_ORBIT_HPP
#define ORBITSUM_ORBIT_HPP

#include <vector>

#include "orbitsum/rational_map.hpp"

namespace orbitsum {

// Orbit proximity guards.
inline constexpr double kInfinityChordalGuard = 1e-8;  // spherical radius around infinity
inline constexpr double kCriticalHitTolerance = 1e-12; // relative distance to a critical point

// Derivative factor R'(z_n) in log-polar form.
struct StepFactor {
    double log_mod;
    double arg;
};

struct OrbitRecord {
    SpherePoint start;
    std::vector<SpherePoint> points;  // z_0 .. z_m
    std::vector<StepFactor> factors;  // R'(z_n) for n = 0 .. m-1 (or fewer on truncation)
    bool hit_critical_point = false;
    bool left_precision_envelope = false;
    bool approached_infinity = false;

    bool truncated() const {
        return hit_critical_point || left_precision_envelope || approached_infinity;
    }
    std::size_t steps() const { return points.size() - 1; }
};

// Iterates z_{n+1} = R(z_n) for up to N steps, recording per-step derivative
// factors in log-polar form.  Truncates with a flag (never throws) when the
// orbit lands on a critical point, approaches infinity, or leaves the
// representable range.
OrbitRecord iterate_orbit(const RationalMap& R, const SpherePoint& z0, int N);

} // namespace orbitsum

#endif
