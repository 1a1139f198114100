#ifndef ORBITSUM_DIAGNOSTICS_HPP
#define ORBITSUM_DIAGNOSTICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitsum/measures.hpp"
#include "orbitsum/spectrum.hpp"

namespace orbitsum {

// Declared numeric thresholds; every criterion echoes the values it used.
// Overridable from the run configuration.
struct Thresholds {
    double o_of_n_proxy = 0.01;            // max_{n>N/2} |sigma_n|/n
    double limit_tolerance = 1e-3;         // "-> 0" tests and Abel limits
    double cauchy_tolerance = 1e-4;        // last-5 Cauchy windows
    double radius_slack = 0.05;            // radius >= 1 - slack
    double stability_median_factor = 10.0; // rho bounded by factor * median
    double stability_log_margin = 0.05;    // strict growth margin for log rho
    double subsequence_decay_log = 6.907755278982137; // ln(1e3): sigma -> 0 evidence
    double bounded_band_halfwidth = 0.5;   // trichotomy band
    double sup_sigma_bound = 1e3;          // ell-infinity proxy
    double attracting_margin = 1e-6;       // |mult| < 1 - margin
    double cycle_return_tolerance = 1e-6;  // 3 consecutive returns
    int cycle_max_period = 20;
    double separation_distortion = 0.5;    // cell-size * derivative guard
    double scan_pairing_threshold = 1e-3;
    double norlund_regularity_slack = 0.05;
};

enum class CriterionId {
    PropStabilityBound,
    CorBullet1,
    CorBullet2,
    Barycentric,
    AbelConvergence,
    BoundedThm1,
    BoundedThm2,
    NorlundRegular,
    Separation,
    PcArea,
};

std::string to_string(CriterionId id);

enum class CriterionStatus { InstabilityEvidence, ConsistentWithStability, Inapplicable, Undecided };

std::string to_string(CriterionStatus s);

struct CriterionResult {
    CriterionId id;
    CriterionStatus status = CriterionStatus::Undecided;
    std::map<std::string, double> evidence;
    std::map<std::string, double> thresholds;
    std::string caveat;
};

// ---------------------------------------------------------------------------

// rho_n = |S_n| / |sigma_n| (computed in log form).  Instability evidence when
// the per-window minima of rho grow monotonically across the last >= 3
// windows; consistent when trailing rho stays within factor * median.
CriterionResult stability_bound_check(const Spectrum& s, const Thresholds& th = {});

// Both bullets of the subsequence criterion, scanned over the declared family
// of subsequences (geometric index grids plus running-extrema subsequences).
std::pair<CriterionResult, CriterionResult> corollary_checks(const Spectrum& s,
                                                             const Thresholds& th = {});

CriterionResult barycentric_check(const Spectrum& s, const Thresholds& th = {});

CriterionResult abel_criterion(const Spectrum& s, const Thresholds& th = {});

enum class SeparationOutcome { Separated, NotSeparatedAtResolution, Undecided, Inapplicable };

std::string to_string(SeparationOutcome o);

struct SeparationGrid {
    double xmin, xmax, ymin, ymax;
    int resolution = 128;
};

struct SeparationResult {
    SeparationOutcome outcome = SeparationOutcome::Undecided;
    int fatou_cells = 0;
    int unresolved_cells = 0;
    int flood_cells = 0;
    bool flood_reached_border = false;
    std::string note;
};

// Grid heuristic: cells are Fatou candidates when the center orbit converges
// to a detected attracting cycle or escapes while the accumulated spherical
// derivative stays below the distortion guard (cells whose images would smear
// past the guard stay unresolved).  Separation holds when the passable flood
// from c neither reaches a postcritical sample cell nor the grid border.
SeparationResult separation_heuristic(const RationalMap& R, cplx c,
                                      const std::vector<cplx>& pc_sample,
                                      const SeparationGrid& grid, int budget,
                                      const Thresholds& th = {});

// ---------------------------------------------------------------------------

struct FullReportConfig {
    int horizon = 1024;
    int trichotomy_window = 16;
    int separation_resolution = 128;
    int separation_budget = 512;
    std::uint64_t seed = 0;
    Thresholds thresholds;
};

struct DiagnosticsReport {
    std::string map_description;
    cplx critical_point{};
    int horizon = 0;
    std::uint64_t seed = 0;
    bool critical_point_in_fatou = false;
    bool fixed_points_outside_pc = false; // some fixed point escapes the P_c sample
    TrichotomyVerdict trichotomy;
    RadiusEstimate radius;
    OscillationStats oscillation;
    PostcriticalSample postcritical;
    SeparationResult separation;
    std::optional<ScanVerdict> abel_scan_verdict;
    std::vector<CriterionResult> criteria; // fixed order, one per CriterionId
    bool degenerate = false;

    bool any_instability_evidence() const {
        for (auto& c : criteria)
            if (c.status == CriterionStatus::InstabilityEvidence) return true;
        return false;
    }
};

DiagnosticsReport full_report(const RationalMap& R, const SpherePoint& c,
                              const FullReportConfig& cfg);

// Attracting-cycle classification of a single orbit (shared with render):
// converged when 3 consecutive returns land within tolerance of a period-p
// point, p <= max period, and the cycle multiplier is attracting.
struct OrbitClassification {
    bool converged = false; // to a detected attracting cycle
    bool escaped = false;
    int steps = 0;
    int period = 0;
    cplx cycle_representative{};
};

OrbitClassification classify_orbit(const RationalMap& R, cplx z0, int budget,
                                   const Thresholds& th = {});

} // namespace orbitsum

#endif
