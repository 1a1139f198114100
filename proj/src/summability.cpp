#include "orbitsum/summability.hpp"

#include <algorithm>
#include <cmath>

#include "orbitsum/error.hpp"

namespace orbitsum {

LambdaPath LambdaPath::radial(int count) {
    require(count >= 1, "lambda path: count must be >= 1");
    LambdaPath p;
    p.kind = PathKind::Radial;
    p.alpha = 1.0;
    for (int k = 1; k <= count; ++k) p.samples.push_back(cplx(1.0 - std::pow(2.0, -k), 0.0));
    return p;
}

LambdaPath LambdaPath::stolz(double alpha, int count) {
    require(alpha >= 1.0, "lambda path: stolz alpha must be >= 1");
    require(count >= 1, "lambda path: count must be >= 1");
    LambdaPath p;
    p.kind = PathKind::Stolz;
    p.alpha = alpha;
    for (int k = 1; k <= count; ++k) {
        double t = std::pow(2.0, -k); // |1 - lambda|
        // Solve the angle so that |1-lambda|/(1-|lambda|) = alpha exactly:
        // cos(theta) = 1/alpha + (t/2)(1 - 1/alpha^2).
        double ct = 1.0 / alpha + 0.5 * t * (1.0 - 1.0 / (alpha * alpha));
        require(ct <= 1.0 + 1e-15, "lambda path: stolz sample out of range");
        ct = std::min(ct, 1.0);
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        p.samples.push_back(cplx(1.0 - t * ct, -t * st));
    }
    return p;
}

LambdaPath LambdaPath::explicit_points(std::vector<cplx> samples) {
    require(!samples.empty(), "lambda path: empty sample list");
    for (auto& l : samples) require(std::abs(l) < 1.0, "lambda path: |lambda| must be < 1");
    LambdaPath p;
    p.kind = PathKind::Radial;
    p.alpha = 0.0;
    p.samples = std::move(samples);
    return p;
}

double functional_norm(cplx lambda) {
    require(std::abs(lambda) < 1.0, "functional norm: |lambda| must be < 1");
    return std::abs(cplx(1.0) - lambda) / (1.0 - std::abs(lambda));
}

namespace {

AbelValue abel_core(const Sequence& a, std::size_t N, cplx lambda, const TailPolicy& policy) {
    require(std::abs(lambda) < 1.0, "abel average: |lambda| must be < 1");
    require(N + 1 >= 1, "abel average: need at least one term");
    cplx sum(0.0);
    cplx pw(1.0);
    double sup_tail = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
        cplx an = a(n);
        sum += an * pw;
        pw *= lambda;
        if (2 * n > N) sup_tail = std::max(sup_tail, std::abs(an));
    }
    if (policy.explicit_sup) sup_tail = *policy.explicit_sup;
    double al = std::abs(lambda);
    AbelValue out;
    out.value = (cplx(1.0) - lambda) * sum;
    out.tail_bound = std::abs(cplx(1.0) - lambda) * sup_tail * std::pow(al, double(N + 1)) / (1.0 - al);
    out.terms = N + 1;
    return out;
}

} // namespace

AbelValue abel_average(const Sequence& a, std::size_t N, cplx lambda, TailPolicy policy) {
    if (a.bounded_length()) {
        require(N < a.length(), "abel average: truncation exceeds sequence length");
    }
    return abel_core(a, N, lambda, policy);
}

AbelValue abel_average(const std::vector<cplx>& a, cplx lambda, TailPolicy policy) {
    require(!a.empty(), "abel average: empty sequence");
    return abel_core(Sequence::of(a), a.size() - 1, lambda, policy);
}

std::string to_string(ConvergenceVerdict v) {
    switch (v) {
        case ConvergenceVerdict::ConvergesTo: return "converges-to";
        case ConvergenceVerdict::Diverges: return "diverges";
        case ConvergenceVerdict::Oscillates: return "oscillates";
        case ConvergenceVerdict::Undecided: return "undecided";
    }
    return "undecided";
}

SummabilityReport abel_scan(const Sequence& a, const LambdaPath& path, ScanOptions opts) {
    require(!path.samples.empty(), "abel scan: path has no samples");
    SummabilityReport rep;
    rep.method = "abel";
    rep.path = path;

    for (cplx lambda : path.samples) {
        std::size_t cap = opts.max_terms;
        if (a.bounded_length()) cap = std::min(cap, a.length());
        std::size_t N = std::min<std::size_t>(63, cap - 1);
        AbelValue av;
        while (true) {
            av = abel_core(a, N, lambda, {});
            if (av.tail_bound <= opts.tail_rel_tolerance * std::max(1.0, std::abs(av.value))) break;
            if (N + 1 >= cap) break;
            N = std::min(cap - 1, 2 * N + 1);
        }
        PathPointValue pv;
        pv.lambda = lambda;
        pv.value = av.value;
        pv.tail_bound = av.tail_bound;
        pv.terms = av.terms;
        pv.tail_ok = av.tail_bound <= opts.tail_rel_tolerance * std::max(1.0, std::abs(av.value));
        rep.values.push_back(pv);
    }

    if (path.kind == PathKind::Stolz) {
        for (auto& pv : rep.values) rep.cluster_samples.push_back(pv.value);
    }

    std::size_t n = rep.values.size();
    std::size_t tail = std::min<std::size_t>(5, n);
    bool usable = true;
    for (std::size_t i = n - tail; i < n; ++i)
        if (!rep.values[i].tail_ok) usable = false;
    if (!usable || tail < 2) {
        rep.verdict = ConvergenceVerdict::Undecided;
        return rep;
    }
    double max_pair = 0.0;
    cplx mean(0.0);
    for (std::size_t i = n - tail; i < n; ++i) {
        mean += rep.values[i].value;
        for (std::size_t j = i + 1; j < n; ++j)
            max_pair = std::max(max_pair, std::abs(rep.values[i].value - rep.values[j].value));
    }
    mean /= double(tail);
    if (max_pair < opts.cauchy_tolerance) {
        rep.verdict = ConvergenceVerdict::ConvergesTo;
        rep.limit = mean;
        return rep;
    }
    for (auto& pv : rep.values) {
        if (std::abs(pv.value) > opts.divergence_radius) {
            rep.verdict = ConvergenceVerdict::Diverges;
            return rep;
        }
    }
    rep.verdict = ConvergenceVerdict::Oscillates;
    return rep;
}

// ---------------------------------------------------------------------------

NorlundWeights NorlundWeights::validate(std::vector<double> q, WeightFamily family,
                                        double geometric_ratio) {
    require(!q.empty(), "norlund weights: empty weight list");
    require(q[0] > 0.0, "norlund weights: rejected, q_0 must be positive");
    for (double v : q) require(v >= 0.0, "norlund weights: rejected, negative weight");
    NorlundWeights w;
    w.q_ = std::move(q);
    w.family_ = family;
    w.ratio_ = geometric_ratio;
    w.Q_.resize(w.q_.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < w.q_.size(); ++n) {
        acc += w.q_[n];
        w.Q_[n] = acc;
    }
    // Trailing-ratio proxy of lim q_n/Q_n = 0: ratios over the trailing
    // quarter must stay below 0.2.
    const double threshold = 0.2;
    std::size_t lo = w.q_.size() - std::max<std::size_t>(1, w.q_.size() / 4);
    for (std::size_t n = lo; n < w.q_.size(); ++n) {
        if (n == 0) continue;
        require(w.q_[n] / w.Q_[n] <= threshold,
                "norlund weights: rejected, trailing q_n/Q_n ratio above 0.2");
    }
    return w;
}

NorlundWeights NorlundWeights::constant(std::size_t len) {
    return validate(std::vector<double>(std::max<std::size_t>(len, 8), 1.0),
                    WeightFamily::Constant);
}

NorlundWeights NorlundWeights::identity(std::size_t len) {
    std::vector<double> q(std::max<std::size_t>(len, 8), 0.0);
    q[0] = 1.0;
    return validate(std::move(q), WeightFamily::Explicit);
}

NorlundWeights NorlundWeights::arithmetic(std::size_t len) {
    std::vector<double> q(std::max<std::size_t>(len, 8));
    for (std::size_t n = 0; n < q.size(); ++n) q[n] = double(n + 1);
    return validate(std::move(q), WeightFamily::Arithmetic);
}

NorlundWeights NorlundWeights::geometric(double r, std::size_t len) {
    require(r > 0.0, "norlund weights: geometric ratio must be positive");
    std::vector<double> q(std::max<std::size_t>(len, 16));
    double v = 1.0;
    for (std::size_t n = 0; n < q.size(); ++n) {
        q[n] = v;
        v *= r;
    }
    return validate(std::move(q), WeightFamily::Geometric, r);
}

double NorlundWeights::q(std::size_t n) const {
    if (n < q_.size()) return q_[n];
    switch (family_) {
        case WeightFamily::Constant: return 1.0;
        case WeightFamily::Arithmetic: return double(n + 1);
        case WeightFamily::Geometric: return std::pow(ratio_, double(n));
        case WeightFamily::Explicit: break;
    }
    fail("norlund weights: index beyond stored length and no generator family");
}

double NorlundWeights::Q(std::size_t n) const {
    if (n < Q_.size()) return Q_[n];
    require(extendable(), "norlund weights: index beyond stored length and no generator family");
    double acc = Q_.back();
    for (std::size_t k = Q_.size(); k <= n; ++k) acc += q(k);
    return acc;
}

cplx NorlundWeights::q_series(cplx lambda, std::size_t N) const {
    cplx sum(0.0), pw(1.0);
    for (std::size_t n = 0; n <= N; ++n) {
        sum += q(n) * pw;
        pw *= lambda;
    }
    return sum;
}

std::vector<cplx> norlund_averages(const std::vector<cplx>& x, const NorlundWeights& w) {
    require(!x.empty(), "norlund averages: empty input");
    if (x.size() > w.stored_length())
        require(w.extendable(),
                "norlund averages: input longer than weights and no generator family");
    std::vector<cplx> t(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        cplx acc(0.0);
        for (std::size_t i = 0; i <= n; ++i) acc += w.q(n - i) * x[i];
        t[n] = acc / w.Q(n);
    }
    return t;
}

RegularityVerdict norlund_regularity_check(const std::vector<cplx>& t) {
    require(t.size() >= 16, "regularity check: need at least 16 terms");
    RegularityVerdict v;
    double m = 0.0;
    for (std::size_t n = t.size() / 2; n < t.size(); ++n) {
        double a = std::abs(t[n]);
        if (a == 0.0) continue;
        m = std::max(m, std::pow(a, 1.0 / double(n)));
    }
    v.limsup_estimate = m;
    v.regular = m <= 1.0 + 0.05;
    return v;
}

ConvolutionValue convolution_series(const std::vector<cplx>& x, const NorlundWeights& w,
                                    cplx lambda) {
    require(std::abs(lambda) < 1.0, "convolution series: |lambda| must be < 1");
    require(!x.empty(), "convolution series: empty input");
    ConvolutionValue out;
    std::vector<cplx> t = norlund_averages(x, w);

    cplx direct(0.0), via_tq(0.0), pw(1.0);
    double sup_tail = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        cplx conv(0.0);
        for (std::size_t i = 0; i <= n; ++i) conv += w.q(i) * x[n - i];
        direct += conv * pw;
        via_tq += t[n] * w.Q(n) * pw;
        pw *= lambda;
        if (2 * n > x.size()) sup_tail = std::max(sup_tail, std::abs(conv));
    }
    out.value = direct;
    out.value_tq = via_tq;
    out.discrepancy = std::abs(direct - via_tq);
    double al = std::abs(lambda);
    out.tail_bound =
        std::abs(cplx(1.0) - lambda) * sup_tail * std::pow(al, double(x.size())) / (1.0 - al);
    double scale = std::max(1.0, std::abs(direct));
    require(out.discrepancy <= 1e-8 * scale,
            "convolution series: accumulation orders disagree (implementation fault)");
    return out;
}

} // namespace orbitsum
