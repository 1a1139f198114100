#include "orbitsum/orbit.hpp"

#include <cmath>
#include <limits>

#include "orbitsum/error.hpp"

namespace orbitsum {

OrbitRecord iterate_orbit(const RationalMap& R, const SpherePoint& z0, int N) {
    require(N >= 1, "iterate_orbit: N must be >= 1");
    OrbitRecord rec;
    rec.start = z0;
    rec.points.reserve(std::size_t(N) + 1);
    rec.points.push_back(z0);

    for (int n = 0; n < N; ++n) {
        const SpherePoint& z = rec.points.back();
        if (z.is_infinity() || z.chordal_to(SpherePoint::infinity()) < kInfinityChordalGuard) {
            rec.approached_infinity = true;
            break;
        }
        cplx zf = z.finite();

        SpherePoint next = R.evaluate(z);
        if (next.is_infinity()) {
            // Pole: the plane derivative factor is not recordable; the orbit
            // lands at infinity and truncates there.
            rec.points.push_back(next);
            rec.approached_infinity = true;
            break;
        }
        if (!is_finite(next.finite())) {
            rec.left_precision_envelope = true;
            break;
        }

        cplx d = R.derivative(zf);
        double dist = R.distance_to_critical_set(zf);
        if (dist <= kCriticalHitTolerance * (1.0 + std::abs(zf))) {
            rec.hit_critical_point = true;
            if (d == cplx(0.0)) {
                rec.factors.push_back({-std::numeric_limits<double>::infinity(), 0.0});
            } else {
                rec.factors.push_back({std::log(std::abs(d)), std::arg(d)});
            }
            break;
        }
        rec.factors.push_back({std::log(std::abs(d)), std::arg(d)});
        rec.points.push_back(next);
    }
    return rec;
}

} // namespace orbitsum
