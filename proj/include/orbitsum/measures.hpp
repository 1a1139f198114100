#ifndef ORBITSUM_MEASURES_HPP
#define ORBITSUM_MEASURES_HPP

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbitsum/rational_map.hpp"
#include "orbitsum/summability.hpp"

namespace orbitsum {

inline constexpr double kAtomMergeRadius = 1e-12;

struct Atom {
    cplx location;
    cplx weight;
};

// Finitely many complex-weighted point masses at finite locations.  Atoms are
// merged at radius 1e-12 and kept in lexicographic order.
class AtomicMeasure {
public:
    AtomicMeasure() = default;
    explicit AtomicMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_variation() const { return tv_; }
    cplx total_mass() const { return mass_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    double distance_to_support(cplx z) const;

    AtomicMeasure scaled(cplx s) const;

private:
    std::vector<Atom> atoms_;
    double tv_ = 0.0;
    cplx mass_{};
};

// Incremental builder: bit-identical locations accumulate in O(1); a final
// merge pass enforces the 1e-12 radius.
class AtomAccumulator {
public:
    void add(cplx location, cplx weight);
    std::size_t distinct() const { return atoms_.size(); }
    AtomicMeasure finish();

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<double, double>& k) const {
            std::hash<double> h;
            return h(k.first) * 1000003u ^ h(k.second);
        }
    };
    std::vector<Atom> atoms_;
    std::unordered_map<std::pair<double, double>, std::size_t, KeyHash> index_;
};

// ---------------------------------------------------------------------------

struct TestFunction {
    std::string name;
    std::function<cplx(cplx)> f;
};

struct TestFamily {
    std::vector<TestFunction> functions;

    // Monomials z^j conj(z)^k with j+k <= 6, plus gamma kernels at
    // kernel_count seeded points drawn off the given support (distance
    // >= 0.1 from every atom and from {0,1}).
    static TestFamily standard(const AtomicMeasure& support_hint, std::uint64_t seed,
                               int kernel_count = 8);
};

cplx measure_pairing(const AtomicMeasure& nu, const TestFunction& f);
cplx measure_pairing(const AtomicMeasure& nu, const std::function<cplx(cplx)>& f);

// ---------------------------------------------------------------------------

struct MeasureBuild {
    AtomicMeasure measure;
    double tail_bound = 0.0;
    std::size_t terms = 0;
    // Voronoi builds with few enough terms cross-check the per-atom
    // accumulation against the T_n order; the observed discrepancy is kept.
    double order_discrepancy = 0.0;
};

// nu_lambda(z) = (1-lambda) sum_n a_n lambda^n delta_{R^n(z)}, truncated at N.
// Throws if the orbit approaches infinity within N steps.
MeasureBuild build_abel_measure(const RationalMap& R, cplx z, const Sequence& a, cplx lambda,
                                std::size_t N);

// nu_lambda = (1-lambda) sum_n T_n lambda^n with
// T_n = q_n x_0 delta_z + ... + q_0 x_n delta_{R^n(z)}.  Accumulated per atom
// (weight (1-lambda) x_k lambda^k sum_{j<=N-k} q_j lambda^j); builds with
// N <= 4096 recompute by T_n order and throw if the two disagree beyond 1e-10
// relative.
MeasureBuild build_voronoi_measure(const RationalMap& R, cplx z, const Sequence& x,
                                   const NorlundWeights& w, cplx lambda, std::size_t N);

// The T_n layer alone (atoms R^k(z), weights q_{n-k} x_k, no lambda powers);
// used by order-matched identity checks.
AtomicMeasure voronoi_layer(const RationalMap& R, cplx z, const Sequence& x,
                            const NorlundWeights& w, std::size_t n);

// ---------------------------------------------------------------------------

enum class ScanVerdict { NullLimit, NonNullLimit, Undecided };

std::string to_string(ScanVerdict v);

struct ScanPoint {
    cplx lambda{};
    double tv = 0.0;
    double tail_bound = 0.0;
    std::size_t terms = 0;
    bool tail_ok = false;
    std::vector<cplx> pairings; // one per test function
};

struct WeakStarScan {
    LambdaPath path;
    std::vector<std::string> test_names;
    std::vector<double> test_sup; // sup |f| over the union of scanned supports
    std::vector<ScanPoint> points;
    ScanVerdict verdict = ScanVerdict::Undecided;
    // For NonNullLimit: pairings scaled by r_k = 1/TV over the last points.
    std::vector<cplx> normalized_limit;
};

struct WeakScanOptions {
    std::size_t max_terms = std::size_t(1) << 24;
    std::size_t max_atoms = std::size_t(1) << 20;
    double tail_rel_tolerance = 1e-6;
    double pairing_threshold = 1e-3;
    double tv_bound = 1e6;
};

// Spec for the measure family along the path: Abel (weights absent) or
// Voronoi (weights present).
struct MeasureFamilySpec {
    cplx base_point{};
    Sequence sequence = Sequence::constant(cplx(1.0));
    std::optional<NorlundWeights> weights;
};

// Builds nu_lambda along the path (per-point adaptive truncation against the
// TV tail bound), evaluates the pairings, and decides:
//   NullLimit    — every sup-normalized pairing below threshold on the last 5
//                  points and TV bounded;
//   NonNullLimit — some TV-normalized pairing at least threshold on all of
//                  the last 5 points;
//   Undecided    — otherwise (including unusable tail bounds).
WeakStarScan weak_star_scan(const RationalMap& R, const MeasureFamilySpec& spec,
                            const LambdaPath& path, const TestFamily& tests,
                            WeakScanOptions opts = {});

struct NormalizedLimit {
    bool stabilized = false;
    std::vector<cplx> pairings; // mean of TV-normalized pairings, last 5 points
    std::vector<double> spread; // max pairwise distance per test
};

// r_k = 1/TV(nu_k); reports whether the normalized pairings stabilize.
// Throws when the tail measures are identically zero.
NormalizedLimit projective_normalize(const WeakStarScan& scan);

} // namespace orbitsum

#endif
