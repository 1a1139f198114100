#include "orbitsum/rational_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "orbitsum/error.hpp"

namespace orbitsum {

namespace {

// Substitute a Moebius map m = (az+b)/(cz+d) into R = P/Q by homogenization:
// P((az+b)/(cz+d)) = [sum p_k (az+b)^k (cz+d)^{D-k}] / (cz+d)^D with the same
// D for numerator and denominator, so the quotient is polynomial-over-polynomial.
std::pair<Polynomial, Polynomial> substitute_moebius(const Polynomial& P, const Polynomial& Q,
                                                     cplx a, cplx b, cplx c, cplx d) {
    int D = std::max(P.degree(), Q.degree());
    Polynomial lin_num({b, a});
    Polynomial lin_den({d, c});
    std::vector<Polynomial> pow_num(std::size_t(D + 1)), pow_den(std::size_t(D + 1));
    pow_num[0] = Polynomial::constant(cplx(1.0));
    pow_den[0] = Polynomial::constant(cplx(1.0));
    for (int k = 1; k <= D; ++k) {
        pow_num[std::size_t(k)] = pow_num[std::size_t(k - 1)] * lin_num;
        pow_den[std::size_t(k)] = pow_den[std::size_t(k - 1)] * lin_den;
    }
    auto homogenize = [&](const Polynomial& poly) {
        Polynomial acc;
        for (int k = 0; k <= D; ++k) {
            cplx ck = poly.coeff(std::size_t(k));
            if (ck == cplx(0.0)) continue;
            acc = acc + (pow_num[std::size_t(k)] * pow_den[std::size_t(D - k)]).scaled(ck);
        }
        return acc;
    };
    return {homogenize(P), homogenize(Q)};
}

} // namespace

RationalMap::RationalMap(std::vector<cplx> num, std::vector<cplx> den, PrecisionConfig cfg)
    : p_(std::move(num)), q_(std::move(den)), cfg_(cfg) {
    cfg_.validate();
    require(!q_.is_zero(), "rational map: zero denominator");
    require(!p_.is_zero(), "rational map: zero numerator (degree 0)");
    degree_ = std::max(p_.degree(), q_.degree());
    require(degree_ >= 1, "rational map: degree must be >= 1");

    dp_ = p_.derivative();
    dq_ = q_.derivative();
    wronskian_ = dp_ * q_ - p_ * dq_;

    RootOptions opts;
    opts.tolerance = cfg_.root_tolerance;
    opts.use_long_double = cfg_.mantissa_bits > 53;

    // Common-root check (numerical): P and Q of positive degree must not share
    // a root to within root_tolerance.
    if (p_.degree() >= 1 && q_.degree() >= 1) {
        auto rp = find_roots(p_, opts);
        auto rq = find_roots(q_, opts);
        for (auto& a : rp)
            for (auto& b : rq)
                require(std::abs(a.location - b.location) >
                            cfg_.root_tolerance * (1.0 + std::abs(a.location)),
                        "rational map: numerator and denominator share a root near " +
                            std::to_string(a.location.real()));
    }

    // Finite critical points: roots of P'Q - PQ'; infinity carries the
    // remaining multiplicity out of 2d-2.
    int total = 2 * degree_ - 2;
    int finite_mult = 0;
    if (!wronskian_.is_zero() && wronskian_.degree() >= 1) {
        for (auto& rc : find_roots(wronskian_, opts)) {
            critical_.push_back({SpherePoint(rc.location), rc.multiplicity});
            finite_critical_.push_back(rc.location);
            finite_mult += rc.multiplicity;
        }
    } else if (!wronskian_.is_zero()) {
        finite_mult = 0; // constant wronskian: no finite critical points
    }
    if (total - finite_mult > 0)
        critical_.push_back({SpherePoint::infinity(), total - finite_mult});

    for (auto& c : finite_critical_) {
        SpherePoint v = evaluate(SpherePoint(c));
        if (!v.is_infinity()) finite_critical_values_.push_back(v.finite());
    }

    // Fixed points: roots of P - zQ, plus infinity when deg P > deg Q.
    Polynomial shift = p_ - (Polynomial({cplx(0.0), cplx(1.0)}) * q_);
    if (!shift.is_zero() && shift.degree() >= 1) {
        for (auto& rc : find_roots(shift, opts)) {
            cplx mult(0.0);
            cplx qv = q_.eval(rc.location);
            if (std::abs(qv) > 0.0) mult = derivative(rc.location);
            fixed_.push_back({SpherePoint(rc.location), mult});
        }
    }
    if (p_.degree() > q_.degree()) {
        // Chart w = 1/z: multiplier is 0 when deg gap >= 2, else q_lead/p_lead.
        cplx mult = (p_.degree() - q_.degree() >= 2) ? cplx(0.0) : q_.leading() / p_.leading();
        fixed_.push_back({SpherePoint::infinity(), mult});
    }
    std::sort(fixed_.begin(), fixed_.end(), [](const FixedPoint& a, const FixedPoint& b) {
        if (a.location.is_infinity() != b.location.is_infinity()) return b.location.is_infinity();
        if (a.location.is_infinity()) return false;
        return lex_less(a.location.finite(), b.location.finite());
    });
}

SpherePoint RationalMap::evaluate(const SpherePoint& z) const {
    if (z.is_infinity()) {
        int dp = p_.degree(), dq = q_.degree();
        if (dp > dq) return SpherePoint::infinity();
        if (dp < dq) return SpherePoint(cplx(0.0));
        return SpherePoint(p_.leading() / q_.leading());
    }
    cplx w = z.finite();
    bool ld = cfg_.mantissa_bits > 53;
    cplx pv = ld ? p_.eval_ld(w) : p_.eval(w);
    cplx qv = ld ? q_.eval_ld(w) : q_.eval(w);
    double scale_p = p_.max_coeff_abs() * std::max(1.0, std::pow(std::abs(w), p_.degree()));
    double scale_q = q_.max_coeff_abs() * std::max(1.0, std::pow(std::abs(w), q_.degree()));
    if (std::abs(qv) == 0.0) {
        require(std::abs(pv) > 1e-14 * scale_p,
                "rational map: 0/0 at z = " + z.str() + " (common-root violation)");
        return SpherePoint::infinity();
    }
    cplx r = pv / qv;
    if (!is_finite(r)) {
        // Overflow in the quotient of two finite evaluations: treat as pole.
        (void)scale_q;
        return SpherePoint::infinity();
    }
    return SpherePoint(r);
}

cplx RationalMap::evaluate_finite(cplx z) const {
    SpherePoint r = evaluate(SpherePoint(z));
    require(!r.is_infinity(), "rational map: image is infinity");
    return r.finite();
}

cplx RationalMap::derivative(cplx z) const {
    bool ld = cfg_.mantissa_bits > 53;
    cplx qv = ld ? q_.eval_ld(z) : q_.eval(z);
    require(std::abs(qv) > 0.0, "derivative undefined at pole");
    cplx wv = ld ? wronskian_.eval_ld(z) : wronskian_.eval(z);
    return wv / (qv * qv);
}

cplx RationalMap::second_derivative(cplx z) const {
    bool ld = cfg_.mantissa_bits > 53;
    cplx qv = ld ? q_.eval_ld(z) : q_.eval(z);
    require(std::abs(qv) > 0.0, "second derivative undefined at pole");
    Polynomial dw = wronskian_.derivative();
    cplx wv = ld ? wronskian_.eval_ld(z) : wronskian_.eval(z);
    cplx dwv = ld ? dw.eval_ld(z) : dw.eval(z);
    cplx dqv = ld ? dq_.eval_ld(z) : dq_.eval(z);
    return (dwv * qv - 2.0 * wv * dqv) / (qv * qv * qv);
}

std::vector<RootCluster> RationalMap::preimages(const SpherePoint& w) const {
    RootOptions opts;
    opts.tolerance = cfg_.root_tolerance;
    opts.use_long_double = cfg_.mantissa_bits > 53;
    if (w.is_infinity()) {
        if (q_.degree() >= 1) return find_roots(q_, opts);
        return {};
    }
    Polynomial target = p_ - q_.scaled(w.finite());
    require(!target.is_zero(), "preimages: map is constant equal to target");
    if (target.degree() < 1) return {};
    auto roots = find_roots(target, opts);
    // Residual guarantee |R(y) - w| <= tol * (1 + |w|) for simple roots.
    for (auto& rc : roots) {
        SpherePoint img = evaluate(SpherePoint(rc.location));
        if (img.is_infinity()) continue;
        double res = std::abs(img.finite() - w.finite());
        require(res <= std::max(cfg_.root_tolerance, 1e3 * rc.residual + 1e-9) * (1.0 + std::abs(w.finite())),
                "preimages: residual too large (" + std::to_string(res) + ")");
    }
    return roots;
}

int RationalMap::infinite_preimage_multiplicity(const SpherePoint& w) const {
    if (w.is_infinity()) return std::max(0, p_.degree() - q_.degree());
    Polynomial target = p_ - q_.scaled(w.finite());
    return degree_ - std::max(target.degree(), 0);
}

double RationalMap::distance_to_critical_set(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (auto& c : finite_critical_) d = std::min(d, std::abs(z - c));
    return d;
}

bool RationalMap::near_critical_value(cplx w, double radius) const {
    for (auto& v : finite_critical_values_)
        if (std::abs(w - v) <= radius) return true;
    return false;
}

std::string RationalMap::describe() const {
    std::ostringstream os;
    os << "deg " << degree_ << " rational map, " << finite_critical_.size()
       << " finite critical point(s), " << fixed_.size() << " fixed point(s)";
    return os.str();
}

RationalMap conjugate(const RationalMap& R, const MoebiusTransform& M) {
    MoebiusTransform Mi = M.inverse();
    auto [sp, sq] = substitute_moebius(R.num(), R.den(), Mi.a(), Mi.b(), Mi.c(), Mi.d());
    // M o S with S = sp/sq: (a sp + b sq) / (c sp + d sq).
    Polynomial tp = sp.scaled(M.a()) + sq.scaled(M.b());
    Polynomial tq = sp.scaled(M.c()) + sq.scaled(M.d());
    tp.trim(1e-12);
    tq.trim(1e-12);
    // Normalize by the largest coefficient for stable magnitudes.
    double scale = std::max(tp.max_coeff_abs(), tq.max_coeff_abs());
    require(scale > 0.0, "conjugate: degenerate composition");
    return RationalMap(tp.scaled(cplx(1.0 / scale)).coeffs(), tq.scaled(cplx(1.0 / scale)).coeffs(),
                       R.precision());
}

NormalizedMap moebius_normalize(const RationalMap& R, SpherePoint z1, SpherePoint z2,
                                SpherePoint z3) {
    const double tol = 1e-6;
    for (auto& z : {z1, z2, z3}) {
        SpherePoint img = R.evaluate(z);
        require(img.chordal_to(z) <= tol,
                "moebius normalize: point " + z.str() + " is not fixed by the map");
    }
    MoebiusTransform M = MoebiusTransform::to_standard_triple(z1, z2, z3);
    RationalMap conj = conjugate(R, M);
    require(conj.degree() == R.degree(), "moebius normalize: degree changed under conjugation");
    for (auto& p : {SpherePoint(cplx(0.0)), SpherePoint(cplx(1.0)), SpherePoint::infinity()}) {
        SpherePoint img = conj.evaluate(p);
        require(img.chordal_to(p) <= 1e-6,
                "moebius normalize: conjugated map does not fix " + p.str());
    }
    return {conj, M};
}

NormalizedMap moebius_normalize(const RationalMap& R) {
    const auto& fixed = R.fixed_points();
    require(fixed.size() >= 3, "moebius normalize: map has fewer than 3 fixed points");
    double best = -1.0;
    std::array<std::size_t, 3> pick{0, 1, 2};
    for (std::size_t i = 0; i < fixed.size(); ++i)
        for (std::size_t j = i + 1; j < fixed.size(); ++j)
            for (std::size_t k = j + 1; k < fixed.size(); ++k) {
                double sep = std::min({fixed[i].location.chordal_to(fixed[j].location),
                                       fixed[j].location.chordal_to(fixed[k].location),
                                       fixed[i].location.chordal_to(fixed[k].location)});
                if (sep > best + 1e-15) {
                    best = sep;
                    pick = {i, j, k};
                }
            }
    require(best > 1e-9, "moebius normalize: fixed points too close for a distinct triple");
    return moebius_normalize(R, fixed[pick[0]].location, fixed[pick[1]].location,
                             fixed[pick[2]].location);
}

} // namespace orbitsum
