#ifndef ORBITSUM_SPECTRUM_HPP
#define ORBITSUM_SPECTRUM_HPP

#include <optional>
#include <string>
#include <vector>

#include "orbitsum/orbit.hpp"

namespace orbitsum {

// sigma_n = 1 / (R^n)'(v) along the orbit of the critical value v = R(c),
// held in log-polar form; complex values, partial sums S_n and barycenters are
// derived arrays.  S is accumulated in plain ascending order (rescaled only
// when it would leave double range).
class Spectrum {
public:
    SpherePoint critical_point;
    cplx v{};                       // R(c)
    std::vector<LogPolar> entries;  // sigma_0 .. sigma_M (log-polar)
    std::vector<cplx> sigma;        // reconstructed values
    std::vector<cplx> partial_sums; // S_n = sigma_0 + ... + sigma_n
    std::vector<double> log_abs_S;  // robust log|S_n|
    std::vector<cplx> barycenters;  // index k holds b_{k+1} = S_k / (k+1)
    OrbitRecord orbit;              // orbit of v
    bool degenerate = false;
    std::string truncation_reason;

    std::size_t size() const { return entries.size(); }
    // b_n = S_{n-1} / n for n >= 1.
    cplx barycenter(std::size_t n) const { return n == 0 ? cplx(0.0) : barycenters[n - 1]; }

    double log_abs_sigma(std::size_t n) const { return entries[n].log_mod; }
};

// Requires c to lie within 1e-6 (relative) of a computed critical point of R;
// c is snapped to that point.  The orbit of v = R(c) is followed for N steps;
// critical hits / infinity truncate the spectrum with the degenerate flag.
Spectrum compute_spectrum(const RationalMap& R, const SpherePoint& c, int N);

// Synthetic entry point: treat an explicit sequence as a spectrum (sigma_0
// should be 1 for spec-conforming inputs; not enforced).
Spectrum spectrum_from_sequence(const std::vector<cplx>& values);

enum class TrichotomyCase {
    DerivativeToZero,   // |(R^n)'| -> 0, i.e. |sigma_n| grows
    SubsequenceToInfinity, // a subsequence of |(R^n)'| -> infinity
    BoundedLiminf,
    Degenerate,
    Undecided,
};

struct TrichotomyVerdict {
    TrichotomyCase label = TrichotomyCase::Undecided;
    int window = 0;
    double slope = 0.0;             // trailing-window linear fit of log|sigma_n|
    double window_min_drop = 0.0;   // min drop across consecutive windows
    double band_width = 0.0;        // max-min of trailing log|sigma_n|
    double liminf_log_sigma = 0.0;  // trailing-window min of log|sigma|
    double limsup_log_sigma = 0.0;  // trailing-window max of log|sigma|
};

std::string to_string(TrichotomyCase c);

// Thresholds: slope >= +0.01/step -> DerivativeToZero; consecutive-window
// minima dropping by >= 0.01*window -> SubsequenceToInfinity; trailing band of
// half-width 0.5 -> BoundedLiminf; otherwise Undecided.
TrichotomyVerdict trichotomy_classify(const Spectrum& s, int window);

struct RadiusEstimate {
    double value = 0.0;       // 1 / max over trailing half of |sigma_n|^{1/n}
    double error_bar = 0.0;   // |value - slope-based cross-check|
    double slope_value = 0.0; // exp(-slope of linear fit of log|sigma_n|)
    bool infinite = false;    // all-zero tail
};

RadiusEstimate radius_of_convergence(const Spectrum& s);

struct OscillationStats {
    bool empty = true;
    double sup_ratio = 0.0;        // sup |sigma_{n+1}/sigma_n|
    double liminf_derivative = 0.0; // min over trailing half of |R'(R^n(v))|
};

OscillationStats oscillation_stats(const Spectrum& s);

struct PostcriticalSample {
    std::vector<cplx> points; // orbit of v up to N (finite points)
    bool bounded = false;
    double diameter = 0.0;
    cplx box_min{}, box_max{};
    std::vector<double> area_estimates; // dyadic box-count areas, resolutions 2^-4..2^-9
};

PostcriticalSample postcritical_sample(const RationalMap& R, const SpherePoint& c, int N);

// Max over n > N/2 of |sigma_n| / n; finite-horizon proxy for sigma_n = o(n).
double small_o_of_n_proxy(const Spectrum& s);

} // namespace orbitsum

#endif
