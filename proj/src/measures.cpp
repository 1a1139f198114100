#include "orbitsum/measures.hpp"

#include <algorithm>
#include <cmath>

#include "orbitsum/error.hpp"
#include "orbitsum/orbit.hpp"

namespace orbitsum {

namespace {

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return lex_less(a.location, b.location); });
    std::vector<Atom> out;
    for (auto& a : atoms) {
        if (!out.empty() && std::abs(a.location - out.back().location) <= kAtomMergeRadius) {
            out.back().weight += a.weight;
        } else {
            out.push_back(a);
        }
    }
    return out;
}

} // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
    for (auto& a : atoms)
        require(is_finite(a.location) && is_finite(a.weight),
                "atomic measure: atoms must be finite");
    atoms_ = merge_atoms(std::move(atoms));
    for (auto& a : atoms_) {
        tv_ += std::abs(a.weight);
        mass_ += a.weight;
    }
}

double AtomicMeasure::distance_to_support(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (auto& a : atoms_) d = std::min(d, std::abs(z - a.location));
    return d;
}

AtomicMeasure AtomicMeasure::scaled(cplx s) const {
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.weight *= s;
    return AtomicMeasure(std::move(atoms));
}

void AtomAccumulator::add(cplx location, cplx weight) {
    auto key = std::make_pair(location.real(), location.imag());
    auto it = index_.find(key);
    if (it != index_.end()) {
        atoms_[it->second].weight += weight;
        return;
    }
    index_.emplace(key, atoms_.size());
    atoms_.push_back({location, weight});
}

AtomicMeasure AtomAccumulator::finish() {
    AtomicMeasure m(std::move(atoms_));
    atoms_.clear();
    index_.clear();
    return m;
}

// ---------------------------------------------------------------------------

TestFamily TestFamily::standard(const AtomicMeasure& support_hint, std::uint64_t seed,
                                int kernel_count) {
    TestFamily fam;
    for (int total = 0; total <= 6; ++total) {
        for (int j = 0; j <= total; ++j) {
            int k = total - j;
            TestFunction tf;
            tf.name = "z^" + std::to_string(j) + "*conj^" + std::to_string(k);
            tf.f = [j, k](cplx z) {
                cplx r(1.0);
                for (int i = 0; i < j; ++i) r *= z;
                cplx zc = std::conj(z);
                for (int i = 0; i < k; ++i) r *= zc;
                return r;
            };
            fam.functions.push_back(std::move(tf));
        }
    }
    SplitMix64 rng(derive_seed(seed, "test-family"));
    int placed = 0;
    int guard = 0;
    while (placed < kernel_count && guard < 10000) {
        ++guard;
        cplx a = rng.complex_in_box(-4.0, 4.0);
        if (std::abs(a) < 0.1 || std::abs(a - cplx(1.0)) < 0.1) continue;
        if (support_hint.distance_to_support(a) < 0.1) continue;
        TestFunction tf;
        tf.name = "gamma@" + std::to_string(a.real()) + "+" + std::to_string(a.imag()) + "i";
        tf.f = [a](cplx z) {
            // gamma_a(z) = a(a-1) / (z (z-1) (z-a)); sampled only off-support.
            return a * (a - cplx(1.0)) / (z * (z - cplx(1.0)) * (z - a));
        };
        fam.functions.push_back(std::move(tf));
        ++placed;
    }
    return fam;
}

cplx measure_pairing(const AtomicMeasure& nu, const std::function<cplx(cplx)>& f) {
    cplx acc(0.0);
    for (auto& a : nu.atoms()) {
        cplx v = f(a.location);
        require(is_finite(v), "measure pairing: test function not finite on an atom");
        acc += a.weight * v;
    }
    return acc;
}

cplx measure_pairing(const AtomicMeasure& nu, const TestFunction& f) {
    return measure_pairing(nu, f.f);
}

// ---------------------------------------------------------------------------

namespace {

// Streams the orbit of z, calling sink(n, R^n(z)) for n = 0..N.  Throws the
// moment the orbit approaches infinity.
template <typename Sink>
void stream_orbit(const RationalMap& R, cplx z, std::size_t N, Sink&& sink) {
    SpherePoint p(z);
    for (std::size_t n = 0; n <= N; ++n) {
        require(!p.is_infinity() &&
                    p.chordal_to(SpherePoint::infinity()) >= kInfinityChordalGuard,
                "measure build: orbit approached infinity at step " + std::to_string(n));
        sink(n, p.finite());
        if (n < N) p = R.evaluate(p);
    }
}

constexpr std::size_t kOrderCheckLimit = 4096;

} // namespace

MeasureBuild build_abel_measure(const RationalMap& R, cplx z, const Sequence& a, cplx lambda,
                                std::size_t N) {
    require(std::abs(lambda) < 1.0, "abel measure: |lambda| must be < 1");
    if (a.bounded_length()) require(N < a.length(), "abel measure: N exceeds sequence length");
    AtomAccumulator acc;
    cplx pref = cplx(1.0) - lambda;
    cplx pw(1.0);
    double sup_tail = 0.0;
    stream_orbit(R, z, N, [&](std::size_t n, cplx loc) {
        cplx an = a(n);
        acc.add(loc, pref * an * pw);
        pw *= lambda;
        if (2 * n > N) sup_tail = std::max(sup_tail, std::abs(an));
    });
    MeasureBuild out;
    out.measure = acc.finish();
    double al = std::abs(lambda);
    out.tail_bound = std::abs(pref) * sup_tail * std::pow(al, double(N + 1)) / (1.0 - al);
    out.terms = N + 1;
    return out;
}

MeasureBuild build_voronoi_measure(const RationalMap& R, cplx z, const Sequence& x,
                                   const NorlundWeights& w, cplx lambda, std::size_t N) {
    require(std::abs(lambda) < 1.0, "voronoi measure: |lambda| must be < 1");
    if (x.bounded_length()) require(N < x.length(), "voronoi measure: N exceeds sequence length");
    if (N >= w.stored_length())
        require(w.extendable(), "voronoi measure: weights shorter than truncation");

    // Radius-of-convergence proxy for N(|x_n|): limsup |t_n|^{1/n} must not
    // exceed 1 by more than the declared slack.
    if (N >= 16) {
        std::size_t probe = std::min<std::size_t>(N, 512);
        std::vector<cplx> absx(probe + 1);
        for (std::size_t n = 0; n <= probe; ++n) absx[n] = cplx(std::abs(x(n)), 0.0);
        auto t = norlund_averages(absx, w);
        auto reg = norlund_regularity_check(t);
        require(reg.regular,
                "voronoi measure: N(|x|) radius-of-convergence proxy below 1 (limsup "
                "estimate " + std::to_string(reg.limsup_estimate) + ")");
    }

    // Per-atom accumulation: atom at R^k(z) gets (1-lambda) x_k lambda^k *
    // sum_{j <= N-k} q_j lambda^j.  The geometric inner sums are built once.
    std::vector<cplx> qsum(N + 1);
    {
        cplx accq(0.0), pw(1.0);
        for (std::size_t j = 0; j <= N; ++j) {
            accq += w.q(j) * pw;
            pw *= lambda;
            qsum[j] = accq;
        }
    }
    cplx pref = cplx(1.0) - lambda;
    AtomAccumulator acc;
    std::vector<cplx> orbit_pts;
    orbit_pts.reserve(std::min<std::size_t>(N + 1, 1 << 16));
    cplx pwk(1.0);
    stream_orbit(R, z, N, [&](std::size_t k, cplx loc) {
        acc.add(loc, pref * x(k) * pwk * qsum[N - k]);
        pwk *= lambda;
        if (N <= kOrderCheckLimit) orbit_pts.push_back(loc);
    });
    MeasureBuild out;
    out.measure = acc.finish();
    out.terms = N + 1;

    double al = std::abs(lambda);
    double sup_tail = 0.0;
    for (std::size_t n = N / 2 + 1; n <= N; ++n) {
        cplx conv(0.0);
        (void)conv;
        sup_tail = std::max(sup_tail, std::abs(x(n)));
    }
    // Conservative: |T_n| <= Q_n sup|x|; bound the lambda tail of sum Q_n sup|x| lambda^n
    // by the trailing ratio.
    out.tail_bound = std::abs(pref) * sup_tail * w.Q(N) * std::pow(al, double(N + 1)) /
                     std::max(1e-300, (1.0 - al) * (1.0 - al));

    if (N <= kOrderCheckLimit) {
        // Accumulate by T_n order and compare.
        AtomAccumulator acc2;
        cplx pwn(1.0);
        for (std::size_t n = 0; n <= N; ++n) {
            for (std::size_t k = 0; k <= n; ++k)
                acc2.add(orbit_pts[k], pref * w.q(n - k) * x(k) * pwn);
            pwn *= lambda;
        }
        AtomicMeasure by_layers = acc2.finish();
        const auto& a1 = out.measure.atoms();
        const auto& a2 = by_layers.atoms();
        require(a1.size() == a2.size(), "voronoi measure: accumulation orders disagree (atoms)");
        double scale = std::max(1e-300, out.measure.total_variation());
        double worst = 0.0;
        for (std::size_t i = 0; i < a1.size(); ++i)
            worst = std::max(worst, std::abs(a1[i].weight - a2[i].weight));
        out.order_discrepancy = worst / scale;
        require(out.order_discrepancy <= 1e-10,
                "voronoi measure: accumulation orders disagree beyond 1e-10 relative");
    }
    return out;
}

AtomicMeasure voronoi_layer(const RationalMap& R, cplx z, const Sequence& x,
                            const NorlundWeights& w, std::size_t n) {
    AtomAccumulator acc;
    stream_orbit(R, z, n, [&](std::size_t k, cplx loc) { acc.add(loc, w.q(n - k) * x(k)); });
    return acc.finish();
}

// ---------------------------------------------------------------------------

std::string to_string(ScanVerdict v) {
    switch (v) {
        case ScanVerdict::NullLimit: return "null-limit";
        case ScanVerdict::NonNullLimit: return "nonnull-limit";
        case ScanVerdict::Undecided: return "undecided";
    }
    return "undecided";
}

WeakStarScan weak_star_scan(const RationalMap& R, const MeasureFamilySpec& spec,
                            const LambdaPath& path, const TestFamily& tests,
                            WeakScanOptions opts) {
    require(!path.samples.empty(), "weak-* scan: empty path");
    require(!tests.functions.empty(), "weak-* scan: empty test family");
    WeakStarScan scan;
    scan.path = path;
    for (auto& f : tests.functions) scan.test_names.push_back(f.name);
    scan.test_sup.assign(tests.functions.size(), 0.0);

    for (cplx lambda : path.samples) {
        std::size_t cap = opts.max_terms;
        if (spec.sequence.bounded_length()) cap = std::min(cap, spec.sequence.length());
        std::size_t N = std::min<std::size_t>(63, cap - 1);
        MeasureBuild mb;
        while (true) {
            mb = spec.weights
                     ? build_voronoi_measure(R, spec.base_point, spec.sequence, *spec.weights,
                                             lambda, N)
                     : build_abel_measure(R, spec.base_point, spec.sequence, lambda, N);
            bool ok = mb.tail_bound <=
                      opts.tail_rel_tolerance * std::max(1.0, mb.measure.total_variation());
            if (ok || N + 1 >= cap || mb.measure.size() > opts.max_atoms) break;
            N = std::min(cap - 1, 2 * N + 1);
        }
        ScanPoint pt;
        pt.lambda = lambda;
        pt.tv = mb.measure.total_variation();
        pt.tail_bound = mb.tail_bound;
        pt.terms = mb.terms;
        pt.tail_ok = mb.tail_bound <= opts.tail_rel_tolerance * std::max(1.0, pt.tv);
        for (std::size_t i = 0; i < tests.functions.size(); ++i) {
            pt.pairings.push_back(measure_pairing(mb.measure, tests.functions[i]));
            for (auto& a : mb.measure.atoms())
                scan.test_sup[i] = std::max(scan.test_sup[i], std::abs(tests.functions[i].f(a.location)));
        }
        scan.points.push_back(std::move(pt));
    }

    std::size_t n = scan.points.size();
    std::size_t tail = std::min<std::size_t>(5, n);
    bool usable = tail >= 1;
    for (std::size_t i = n - tail; i < n; ++i)
        if (!scan.points[i].tail_ok) usable = false;
    if (!usable) return scan; // Undecided

    // Null limit: all sup-normalized pairings small and TV bounded.
    bool all_null = true, tv_bounded = true;
    for (std::size_t i = n - tail; i < n; ++i) {
        const auto& pt = scan.points[i];
        if (pt.tv > opts.tv_bound) tv_bounded = false;
        for (std::size_t j = 0; j < pt.pairings.size(); ++j) {
            double norm = std::max(1.0, scan.test_sup[j]);
            if (std::abs(pt.pairings[j]) > opts.pairing_threshold * norm) all_null = false;
        }
    }
    if (all_null && tv_bounded) {
        scan.verdict = ScanVerdict::NullLimit;
        return scan;
    }

    // Non-null limit: some TV-normalized pairing bounded away from zero on the
    // whole tail.
    for (std::size_t j = 0; j < scan.test_names.size(); ++j) {
        bool away = true;
        for (std::size_t i = n - tail; i < n; ++i) {
            const auto& pt = scan.points[i];
            if (pt.tv <= 0.0 ||
                std::abs(pt.pairings[j]) / pt.tv < opts.pairing_threshold) {
                away = false;
                break;
            }
        }
        if (away) {
            scan.verdict = ScanVerdict::NonNullLimit;
            break;
        }
    }
    if (scan.verdict == ScanVerdict::NonNullLimit) {
        scan.normalized_limit.assign(scan.test_names.size(), cplx(0.0));
        for (std::size_t j = 0; j < scan.test_names.size(); ++j) {
            cplx mean(0.0);
            for (std::size_t i = n - tail; i < n; ++i)
                mean += scan.points[i].pairings[j] / scan.points[i].tv;
            scan.normalized_limit[j] = mean / double(tail);
        }
    }
    return scan;
}

NormalizedLimit projective_normalize(const WeakStarScan& scan) {
    std::size_t n = scan.points.size();
    require(n >= 1, "projective normalize: empty scan");
    std::size_t tail = std::min<std::size_t>(5, n);
    for (std::size_t i = n - tail; i < n; ++i)
        require(scan.points[i].tv > 0.0,
                "projective normalize: projective class undefined (zero measure)");
    NormalizedLimit out;
    out.pairings.assign(scan.test_names.size(), cplx(0.0));
    out.spread.assign(scan.test_names.size(), 0.0);
    out.stabilized = true;
    for (std::size_t j = 0; j < scan.test_names.size(); ++j) {
        std::vector<cplx> vals;
        for (std::size_t i = n - tail; i < n; ++i)
            vals.push_back(scan.points[i].pairings[j] / scan.points[i].tv);
        cplx mean(0.0);
        double spread = 0.0;
        for (auto& v : vals) mean += v;
        mean /= double(vals.size());
        for (std::size_t a = 0; a < vals.size(); ++a)
            for (std::size_t b = a + 1; b < vals.size(); ++b)
                spread = std::max(spread, std::abs(vals[a] - vals[b]));
        out.pairings[j] = mean;
        out.spread[j] = spread;
        double norm = std::max(1.0, scan.test_sup.empty() ? 1.0 : scan.test_sup[j]);
        if (spread > 1e-3 * norm) out.stabilized = false;
    }
    return out;
}

} // namespace orbitsum
