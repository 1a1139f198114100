#ifndef ORBITSUM_SUMMABILITY_HPP
#define ORBITSUM_SUMMABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "orbitsum/sequence.hpp"

namespace orbitsum {

// ---------------------------------------------------------------------------
// Lambda paths approaching 1 inside the unit disk.

enum class PathKind { Radial, Stolz };

struct LambdaPath {
    PathKind kind = PathKind::Radial;
    double alpha = 1.0; // |1-lambda| / (1-|lambda|), fixed along a Stolz path
    std::vector<cplx> samples;

    // Radial: lambda_k = 1 - 2^-k.  Stolz: |1-lambda_k| = 2^-k with the angle
    // solved so that |1-lambda|/(1-|lambda|) equals alpha exactly.
    static LambdaPath radial(int count = 20);
    static LambdaPath stolz(double alpha, int count = 20);
    static LambdaPath explicit_points(std::vector<cplx> samples);
};

// ||P_lambda|| = |1-lambda| / (1-|lambda|) on bounded sequences.
double functional_norm(cplx lambda);

// ---------------------------------------------------------------------------
// Abel averages.

struct TailPolicy {
    // Bound the tail sup by the observed sup over n in (N/2, N]; an explicit
    // bound overrides when provided.
    std::optional<double> explicit_sup;
};

struct AbelValue {
    cplx value{};       // (1-lambda) * sum_{n<=N} a_n lambda^n
    double tail_bound = 0.0;
    std::size_t terms = 0; // N+1
};

AbelValue abel_average(const Sequence& a, std::size_t N, cplx lambda, TailPolicy policy = {});
AbelValue abel_average(const std::vector<cplx>& a, cplx lambda, TailPolicy policy = {});

enum class ConvergenceVerdict { ConvergesTo, Diverges, Oscillates, Undecided };

std::string to_string(ConvergenceVerdict v);

struct PathPointValue {
    cplx lambda{};
    cplx value{};
    double tail_bound = 0.0;
    std::size_t terms = 0;
    bool tail_ok = false; // tail_bound <= 1e-6 * max(1, |value|)
};

struct SummabilityReport {
    std::string method; // "abel", "cesaro", "norlund"
    LambdaPath path;
    std::vector<PathPointValue> values;
    ConvergenceVerdict verdict = ConvergenceVerdict::Undecided;
    cplx limit{};
    std::vector<cplx> cluster_samples; // tangential cluster-set sample
};

struct ScanOptions {
    std::size_t max_terms = std::size_t(1) << 24;
    double tail_rel_tolerance = 1e-6;
    double cauchy_tolerance = 1e-4;
    double divergence_radius = 1e6;
};

// Evaluates P_lambda along the path, choosing the truncation per point so the
// tail bound is below tolerance (capped at max_terms / available length).
// Verdict from the last 5 path values: mutual distance < cauchy_tolerance
// means ConvergesTo their mean; any value outside the 1e6 disk means
// Diverges; bounded non-Cauchy means Oscillates; unusable tails mean
// Undecided.
SummabilityReport abel_scan(const Sequence& a, const LambdaPath& path, ScanOptions opts = {});

// ---------------------------------------------------------------------------
// Norlund-Voronoi averaging.

enum class WeightFamily { Explicit, Constant, Arithmetic, Geometric };

class NorlundWeights {
public:
    // Validates q_0 > 0, q_n >= 0 and the trailing-ratio proxy of
    // q_n/Q_n -> 0 (threshold 0.2 over the trailing quarter).
    static NorlundWeights validate(std::vector<double> q,
                                   WeightFamily family = WeightFamily::Explicit,
                                   double geometric_ratio = 0.0);
    static NorlundWeights constant(std::size_t len);    // Cesaro
    static NorlundWeights identity(std::size_t len);    // (1, 0, 0, ...)
    static NorlundWeights arithmetic(std::size_t len);  // q_n = n+1
    static NorlundWeights geometric(double r, std::size_t len);

    double q(std::size_t n) const;       // extends by the family generator
    double Q(std::size_t n) const;       // partial sums, extended on demand
    std::size_t stored_length() const { return q_.size(); }
    bool extendable() const { return family_ != WeightFamily::Explicit; }
    WeightFamily family() const { return family_; }
    double geometric_ratio() const { return ratio_; }

    // q(lambda) truncated at N terms.
    cplx q_series(cplx lambda, std::size_t N) const;

private:
    NorlundWeights() = default;
    std::vector<double> q_;
    std::vector<double> Q_;
    WeightFamily family_ = WeightFamily::Explicit;
    double ratio_ = 0.0;
};

// t_n = (q_n x_0 + ... + q_0 x_n) / Q_n; convolution accumulated in ascending
// input order so constant weights reproduce running means bit-for-bit.
std::vector<cplx> norlund_averages(const std::vector<cplx>& x, const NorlundWeights& w);

struct RegularityVerdict {
    bool regular = false;
    double limsup_estimate = 0.0; // max over trailing half of |t_n|^{1/n}
};

RegularityVerdict norlund_regularity_check(const std::vector<cplx>& t);

struct ConvolutionValue {
    cplx value{};          // direct convolution order
    cplx value_tq{};       // sum t_n Q_n lambda^n order
    double discrepancy = 0.0;
    double tail_bound = 0.0;
};

// Evaluates sum_n (sum_i q_i x_{n-i}) lambda^n two ways; a discrepancy above
// 1e-8 * scale throws (internal-consistency assertion).
ConvolutionValue convolution_series(const std::vector<cplx>& x, const NorlundWeights& w,
                                    cplx lambda);

} // namespace orbitsum

#endif
