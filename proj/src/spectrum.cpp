#include "orbitsum/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbitsum/error.hpp"

namespace orbitsum {

namespace {

void finalize_derived_arrays(Spectrum& s) {
    s.sigma.resize(s.entries.size());
    s.partial_sums.resize(s.entries.size());
    s.log_abs_S.resize(s.entries.size());
    s.barycenters.resize(s.entries.size());
    ScaledComplexSum acc;
    for (std::size_t n = 0; n < s.entries.size(); ++n) {
        s.sigma[n] = s.entries[n].value();
        acc.add(s.sigma[n]);
        s.partial_sums[n] = acc.value();
        s.log_abs_S[n] = acc.log_abs();
        s.barycenters[n] = s.partial_sums[n] / double(n + 1);
    }
}

// Least-squares slope of y against index over [lo, hi).
double linear_slope(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    double n = double(hi - lo);
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        double x = double(i);
        sx += x; sy += y[i]; sxx += x * x; sxy += x * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

} // namespace

Spectrum compute_spectrum(const RationalMap& R, const SpherePoint& c, int N) {
    require(N >= 1, "spectrum: N must be >= 1");
    require(!c.is_infinity(),
            "spectrum: infinite critical point excluded from spectrum analysis");
    cplx cf = c.finite();

    // Snap to the nearest computed critical point.
    const auto& crit = R.finite_critical_points();
    require(!crit.empty(), "spectrum: map has no finite critical points");
    cplx snapped = crit.front();
    double best = std::abs(cf - snapped);
    for (auto& cc : crit) {
        double d = std::abs(cf - cc);
        if (d < best) { best = d; snapped = cc; }
    }
    require(best <= 1e-6 * (1.0 + std::abs(cf)), "spectrum: point is not a critical point of the map");

    Spectrum s;
    s.critical_point = SpherePoint(snapped);
    SpherePoint v = R.evaluate(s.critical_point);
    if (v.is_infinity()) {
        s.degenerate = true;
        s.truncation_reason = "critical value at infinity";
        s.entries.push_back({0.0, 0.0}); // sigma_0 = 1
        finalize_derived_arrays(s);
        return s;
    }
    s.v = v.finite();
    s.orbit = iterate_orbit(R, v, N);

    // sigma_0 = 1; sigma_{n+1} = sigma_n / R'(R^n(v)).
    s.entries.reserve(s.orbit.factors.size() + 1);
    s.entries.push_back({0.0, 0.0});
    for (std::size_t n = 0; n < s.orbit.factors.size(); ++n) {
        const StepFactor& f = s.orbit.factors[n];
        if (!std::isfinite(f.log_mod)) break; // exact critical hit
        const LogPolar& prev = s.entries.back();
        s.entries.push_back({prev.log_mod - f.log_mod, wrap_angle(prev.arg - f.arg)});
    }

    if (s.orbit.hit_critical_point) {
        s.degenerate = true;
        s.truncation_reason = "orbit hit a critical point";
    } else if (s.orbit.approached_infinity) {
        s.truncation_reason = "orbit approached infinity";
        if (int(s.entries.size()) < N + 1) s.degenerate = true;
    } else if (s.orbit.left_precision_envelope) {
        s.truncation_reason = "orbit left the precision envelope";
        if (int(s.entries.size()) < N + 1) s.degenerate = true;
    }

    finalize_derived_arrays(s);
    return s;
}

Spectrum spectrum_from_sequence(const std::vector<cplx>& values) {
    require(!values.empty(), "spectrum: empty sequence");
    Spectrum s;
    s.entries.reserve(values.size());
    for (auto& v : values) s.entries.push_back(LogPolar::from(v));
    finalize_derived_arrays(s);
    // Keep the exact input values (log-polar round trip may perturb last ulp).
    s.sigma = values;
    ScaledComplexSum acc;
    for (std::size_t n = 0; n < values.size(); ++n) {
        acc.add(values[n]);
        s.partial_sums[n] = acc.value();
        s.log_abs_S[n] = acc.log_abs();
        s.barycenters[n] = s.partial_sums[n] / double(n + 1);
    }
    return s;
}

std::string to_string(TrichotomyCase c) {
    switch (c) {
        case TrichotomyCase::DerivativeToZero: return "derivative->0";
        case TrichotomyCase::SubsequenceToInfinity: return "subsequence->inf";
        case TrichotomyCase::BoundedLiminf: return "bounded-liminf";
        case TrichotomyCase::Degenerate: return "degenerate";
        case TrichotomyCase::Undecided: return "undecided";
    }
    return "undecided";
}

TrichotomyVerdict trichotomy_classify(const Spectrum& s, int window) {
    require(window >= 2, "trichotomy: window must be >= 2");
    TrichotomyVerdict verdict;
    verdict.window = window;
    if (s.degenerate) {
        verdict.label = TrichotomyCase::Degenerate;
        return verdict;
    }
    require(int(s.size()) >= 2 * window, "trichotomy: spectrum length must be >= 2*window");

    std::vector<double> lg(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) lg[n] = s.entries[n].log_mod;

    const double eps_per_step = 0.01;
    const double band_half_width = 0.5;
    std::size_t len = lg.size();

    // Evidence over the trailing window.
    std::size_t tail_lo = len - std::size_t(window);
    verdict.liminf_log_sigma = *std::min_element(lg.begin() + long(tail_lo), lg.end());
    verdict.limsup_log_sigma = *std::max_element(lg.begin() + long(tail_lo), lg.end());
    verdict.slope = linear_slope(lg, tail_lo, len);

    if (verdict.slope >= eps_per_step) {
        verdict.label = TrichotomyCase::DerivativeToZero;
        return verdict;
    }

    // Consecutive disjoint windows; minima must drop by >= eps*window between
    // each of the last (up to 4) windows.
    std::size_t k = len / std::size_t(window);
    std::vector<double> minima;
    for (std::size_t w = 0; w < k; ++w) {
        std::size_t lo = len - (w + 1) * std::size_t(window);
        std::size_t hi = len - w * std::size_t(window);
        minima.push_back(*std::min_element(lg.begin() + long(lo), lg.begin() + long(hi)));
    }
    std::reverse(minima.begin(), minima.end()); // chronological
    std::size_t use = std::min<std::size_t>(minima.size(), 4);
    bool dropping = use >= 2;
    double min_drop = std::numeric_limits<double>::infinity();
    for (std::size_t i = minima.size() - use; i + 1 < minima.size(); ++i) {
        double drop = minima[i] - minima[i + 1];
        min_drop = std::min(min_drop, drop);
        if (drop < eps_per_step * window) dropping = false;
    }
    verdict.window_min_drop = std::isfinite(min_drop) ? min_drop : 0.0;
    if (dropping) {
        verdict.label = TrichotomyCase::SubsequenceToInfinity;
        return verdict;
    }

    std::size_t band_lo = len - 2 * std::size_t(window);
    double bmin = *std::min_element(lg.begin() + long(band_lo), lg.end());
    double bmax = *std::max_element(lg.begin() + long(band_lo), lg.end());
    verdict.band_width = bmax - bmin;
    if (verdict.band_width <= 2.0 * band_half_width) {
        verdict.label = TrichotomyCase::BoundedLiminf;
        return verdict;
    }

    verdict.label = TrichotomyCase::Undecided;
    return verdict;
}

RadiusEstimate radius_of_convergence(const Spectrum& s) {
    require(s.size() >= 16, "radius: need at least 16 entries");
    RadiusEstimate est;
    std::size_t len = s.size();
    std::size_t lo = len / 2;
    double max_root = 0.0;
    bool any_nonzero = false;
    for (std::size_t n = std::max<std::size_t>(lo, 1); n < len; ++n) {
        double lg = s.entries[n].log_mod;
        if (!std::isfinite(lg)) continue; // exact zero entry
        any_nonzero = true;
        max_root = std::max(max_root, std::exp(lg / double(n)));
    }
    if (!any_nonzero) {
        est.infinite = true;
        est.value = std::numeric_limits<double>::infinity();
        return est;
    }
    est.value = 1.0 / max_root;

    std::vector<double> lg(len);
    for (std::size_t n = 0; n < len; ++n) lg[n] = s.entries[n].log_mod;
    double slope = linear_slope(lg, lo, len);
    est.slope_value = std::exp(-slope);
    est.error_bar = std::abs(est.value - est.slope_value);
    return est;
}

OscillationStats oscillation_stats(const Spectrum& s) {
    OscillationStats st;
    if (s.degenerate || s.size() < 2) return st;
    st.empty = false;
    double max_ratio_log = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n + 1 < s.size(); ++n)
        max_ratio_log = std::max(max_ratio_log, s.entries[n + 1].log_mod - s.entries[n].log_mod);
    st.sup_ratio = std::exp(max_ratio_log);

    const auto& factors = s.orbit.factors;
    if (!factors.empty()) {
        std::size_t lo = factors.size() / 2;
        double min_log = std::numeric_limits<double>::infinity();
        for (std::size_t n = lo; n < factors.size(); ++n)
            min_log = std::min(min_log, factors[n].log_mod);
        st.liminf_derivative = std::exp(min_log);
    } else {
        // Synthetic spectrum: derive |R'| from the entry ratios.
        double min_log = std::numeric_limits<double>::infinity();
        std::size_t lo = (s.size() - 1) / 2;
        for (std::size_t n = lo; n + 1 < s.size(); ++n)
            min_log = std::min(min_log, s.entries[n].log_mod - s.entries[n + 1].log_mod);
        st.liminf_derivative = std::exp(min_log);
    }
    return st;
}

PostcriticalSample postcritical_sample(const RationalMap& R, const SpherePoint& c, int N) {
    Spectrum s = compute_spectrum(R, c, N);
    PostcriticalSample ps;
    for (auto& p : s.orbit.points)
        if (!p.is_infinity()) ps.points.push_back(p.finite());
    ps.bounded = !s.orbit.approached_infinity && !s.orbit.left_precision_envelope;
    if (ps.points.empty()) return ps;

    double xmin = ps.points[0].real(), xmax = xmin, ymin = ps.points[0].imag(), ymax = ymin;
    for (auto& p : ps.points) {
        xmin = std::min(xmin, p.real()); xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag()); ymax = std::max(ymax, p.imag());
    }
    ps.box_min = {xmin, ymin};
    ps.box_max = {xmax, ymax};
    for (auto& a : ps.points)
        for (auto& b : ps.points) ps.diameter = std::max(ps.diameter, std::abs(a - b));

    // Dyadic box counting relative to the diameter.
    double diam = ps.diameter > 0.0 ? ps.diameter : 1.0;
    for (int k = 4; k <= 9; ++k) {
        double cell = diam * std::pow(2.0, -k);
        std::vector<std::pair<long long, long long>> cells;
        cells.reserve(ps.points.size());
        for (auto& p : ps.points)
            cells.emplace_back((long long)std::floor((p.real() - xmin) / cell),
                               (long long)std::floor((p.imag() - ymin) / cell));
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        ps.area_estimates.push_back(double(cells.size()) * cell * cell);
    }
    return ps;
}

double small_o_of_n_proxy(const Spectrum& s) {
    double m = 0.0;
    for (std::size_t n = s.size() / 2 + 1; n < s.size(); ++n) {
        double lg = s.entries[n].log_mod;
        if (!std::isfinite(lg)) continue;
        m = std::max(m, std::exp(lg) / double(n));
    }
    return m;
}

} // namespace orbitsum
