#include "orbitsum/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "orbitsum/error.hpp"

namespace orbitsum {

std::string to_string(CriterionId id) {
    switch (id) {
        case CriterionId::PropStabilityBound: return "prop-stability-bound";
        case CriterionId::CorBullet1: return "cor-bullet-1";
        case CriterionId::CorBullet2: return "cor-bullet-2";
        case CriterionId::Barycentric: return "barycentric";
        case CriterionId::AbelConvergence: return "abel-convergence";
        case CriterionId::BoundedThm1: return "bounded-thm-1";
        case CriterionId::BoundedThm2: return "bounded-thm-2";
        case CriterionId::NorlundRegular: return "norlund-regular";
        case CriterionId::Separation: return "separation";
        case CriterionId::PcArea: return "pc-area";
    }
    return "unknown";
}

std::string to_string(CriterionStatus s) {
    switch (s) {
        case CriterionStatus::InstabilityEvidence: return "instability-evidence";
        case CriterionStatus::ConsistentWithStability: return "consistent-with-stability";
        case CriterionStatus::Inapplicable: return "inapplicable";
        case CriterionStatus::Undecided: return "undecided";
    }
    return "undecided";
}

std::string to_string(SeparationOutcome o) {
    switch (o) {
        case SeparationOutcome::Separated: return "separated";
        case SeparationOutcome::NotSeparatedAtResolution: return "not-separated-at-this-resolution";
        case SeparationOutcome::Undecided: return "undecided";
        case SeparationOutcome::Inapplicable: return "inapplicable";
    }
    return "undecided";
}

namespace {

// log rho_n = log|S_n| - log|sigma_n|; skips entries with zero sigma.
std::vector<double> log_rho(const Spectrum& s) {
    std::vector<double> out;
    for (std::size_t n = 0; n < s.size(); ++n) {
        double ls = s.entries[n].log_mod;
        if (!std::isfinite(ls) || !std::isfinite(s.log_abs_S[n])) continue;
        out.push_back(s.log_abs_S[n] - ls);
    }
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

CriterionResult stability_bound_check(const Spectrum& s, const Thresholds& th) {
    CriterionResult res;
    res.id = CriterionId::PropStabilityBound;
    res.thresholds["median_factor"] = th.stability_median_factor;
    res.thresholds["log_margin"] = th.stability_log_margin;
    if (s.degenerate) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "degenerate spectrum (" + s.truncation_reason + ")";
        return res;
    }
    if (s.size() < 32) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "spectrum shorter than 32 entries";
        return res;
    }
    std::vector<double> lr = log_rho(s);
    if (lr.size() < 32) {
        res.status = CriterionStatus::Undecided;
        res.caveat = "too many zero entries for the ratio sequence";
        return res;
    }

    std::size_t len = lr.size();
    std::size_t w = std::max<std::size_t>(8, len / 8);
    std::size_t k = std::min<std::size_t>(4, len / w);
    std::vector<double> minima;
    for (std::size_t j = k; j-- > 0;) {
        std::size_t hi = len - j * w;
        std::size_t lo = hi - w;
        minima.push_back(*std::min_element(lr.begin() + long(lo), lr.begin() + long(hi)));
    }
    res.evidence["windows"] = double(minima.size());
    for (std::size_t i = 0; i < minima.size(); ++i)
        res.evidence["window_min_log_rho_" + std::to_string(i)] = minima[i];

    bool growing = minima.size() >= 3;
    for (std::size_t i = 0; i + 1 < minima.size(); ++i)
        if (minima[i + 1] - minima[i] < th.stability_log_margin) growing = false;
    if (growing) {
        res.status = CriterionStatus::InstabilityEvidence;
        res.caveat = "windowed minima of |S_n|/|sigma_n| grow monotonically at the declared "
                     "margin; finite-horizon evidence, not a proof";
        return res;
    }

    double med = median_of(lr);
    double trailing_max = *std::max_element(lr.begin() + long(len - w), lr.end());
    res.evidence["median_log_rho"] = med;
    res.evidence["trailing_max_log_rho"] = trailing_max;
    if (trailing_max <= med + std::log(th.stability_median_factor)) {
        res.status = CriterionStatus::ConsistentWithStability;
        res.caveat = "trailing ratio bounded by the declared multiple of its median";
    } else {
        res.status = CriterionStatus::Undecided;
        res.caveat = "ratio neither monotonically growing nor bounded at the declared factor";
    }
    return res;
}

namespace {

struct Subsequence {
    std::string name;
    std::vector<std::size_t> idx;
};

std::vector<Subsequence> subsequence_family(const Spectrum& s) {
    std::vector<Subsequence> fam;
    std::size_t len = s.size();
    for (double g : {1.25, 1.5, 2.0}) {
        for (std::size_t n0 : {std::size_t(4), std::size_t(8)}) {
            Subsequence sub;
            sub.name = "geometric(g=" + std::to_string(g) + ",n0=" + std::to_string(n0) + ")";
            double x = double(n0);
            std::size_t last = 0;
            while (std::size_t(x) < len) {
                std::size_t i = std::size_t(x);
                if (i != last || sub.idx.empty()) sub.idx.push_back(i);
                last = i;
                x *= g;
            }
            if (sub.idx.size() >= 4) fam.push_back(std::move(sub));
        }
    }
    Subsequence runmin{"running-min-sigma", {}};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < len; ++n) {
        if (s.entries[n].log_mod < best) {
            best = s.entries[n].log_mod;
            runmin.idx.push_back(n);
        }
    }
    if (runmin.idx.size() >= 4) fam.push_back(std::move(runmin));
    Subsequence runmax{"running-max-S", {}};
    double bestS = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < len; ++n) {
        if (s.log_abs_S[n] > bestS) {
            bestS = s.log_abs_S[n];
            runmax.idx.push_back(n);
        }
    }
    if (runmax.idx.size() >= 4) fam.push_back(std::move(runmax));
    return fam;
}

} // namespace

std::pair<CriterionResult, CriterionResult> corollary_checks(const Spectrum& s,
                                                             const Thresholds& th) {
    CriterionResult b1, b2;
    b1.id = CriterionId::CorBullet1;
    b2.id = CriterionId::CorBullet2;
    b1.thresholds["limsup_S_threshold"] = th.limit_tolerance;
    b1.thresholds["decay_log"] = th.subsequence_decay_log;
    b2.thresholds["band_halfwidth"] = th.bounded_band_halfwidth;
    b2.thresholds["alpha_min"] = th.limit_tolerance;
    if (s.degenerate) {
        b1.status = b2.status = CriterionStatus::Inapplicable;
        b1.caveat = b2.caveat = "degenerate spectrum";
        return {b1, b2};
    }
    auto family = subsequence_family(s);
    std::string family_note = "declared subsequence family: geometric index grids and "
                              "running-extrema subsequences";

    // Bullet 1: sigma_{n_i} -> 0 with limsup |S_{n_i}| > threshold.
    bool any_decaying = false;
    double best_tail_S = 0.0;
    for (auto& sub : family) {
        double first = s.entries[sub.idx.front()].log_mod;
        double last = s.entries[sub.idx.back()].log_mod;
        if (!(last <= -th.subsequence_decay_log && last <= first - std::log(10.0))) continue;
        any_decaying = true;
        double tail_max = -std::numeric_limits<double>::infinity();
        for (std::size_t j = sub.idx.size() / 2; j < sub.idx.size(); ++j)
            tail_max = std::max(tail_max, s.log_abs_S[sub.idx[j]]);
        best_tail_S = std::max(best_tail_S, std::exp(tail_max));
    }
    b1.evidence["max_tail_abs_S"] = best_tail_S;
    if (!any_decaying) {
        b1.status = CriterionStatus::Inapplicable;
        b1.caveat = "no subsequence with sigma -> 0 in the " + family_note;
    } else if (best_tail_S > th.limit_tolerance) {
        b1.status = CriterionStatus::InstabilityEvidence;
        b1.caveat = "sigma decays along a subsequence while |S| stays above threshold; " +
                    family_note;
    } else {
        b1.status = CriterionStatus::ConsistentWithStability;
        b1.caveat = "decaying subsequences carry vanishing partial sums; " + family_note;
    }

    // Bullet 2: sigma_{n_i} in a band around nonzero alpha with |S_{n_i}|
    // exceeding a growth envelope.
    bool any_banded = false;
    bool fired = false;
    double alpha_abs = 0.0;
    for (auto& sub : family) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, mean = 0.0;
        for (auto i : sub.idx) {
            lo = std::min(lo, s.entries[i].log_mod);
            hi = std::max(hi, s.entries[i].log_mod);
            mean += s.entries[i].log_mod;
        }
        mean /= double(sub.idx.size());
        if (hi - lo > 2.0 * th.bounded_band_halfwidth) continue;
        double alpha = std::exp(mean);
        if (alpha < th.limit_tolerance) continue;
        any_banded = true;
        alpha_abs = std::max(alpha_abs, alpha);
        // Unbounded-S proxy: windowed maxima of |S| strictly increasing over 3
        // windows and the final max at least 10 * alpha.
        std::size_t m = sub.idx.size();
        if (m < 6) continue;
        std::size_t w = m / 3;
        double m1 = -std::numeric_limits<double>::infinity(), m2 = m1, m3 = m1;
        for (std::size_t j = 0; j < m; ++j) {
            double v = s.log_abs_S[sub.idx[j]];
            if (j < w) m1 = std::max(m1, v);
            else if (j < 2 * w) m2 = std::max(m2, v);
            else m3 = std::max(m3, v);
        }
        if (m2 > m1 && m3 > m2 && m3 >= std::log(10.0 * alpha)) fired = true;
    }
    b2.evidence["alpha_abs"] = alpha_abs;
    if (!any_banded) {
        b2.status = CriterionStatus::Inapplicable;
        b2.caveat = "no subsequence in a nonzero band; " + family_note;
    } else if (fired) {
        b2.status = CriterionStatus::InstabilityEvidence;
        b2.caveat = "sigma stays in a nonzero band while |S| grows past the envelope; " +
                    family_note;
    } else {
        b2.status = CriterionStatus::ConsistentWithStability;
        b2.caveat = "banded subsequences carry bounded partial sums; " + family_note;
    }
    return {b1, b2};
}

CriterionResult barycentric_check(const Spectrum& s, const Thresholds& th) {
    CriterionResult res;
    res.id = CriterionId::Barycentric;
    res.thresholds["o_of_n_proxy"] = th.o_of_n_proxy;
    res.thresholds["limit_tolerance"] = th.limit_tolerance;
    if (s.degenerate) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "degenerate spectrum";
        return res;
    }
    double proxy = small_o_of_n_proxy(s);
    res.evidence["o_of_n_proxy"] = proxy;
    if (proxy > th.o_of_n_proxy) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "sigma_n = o(n) proxy fails at the declared threshold; the criterion "
                     "requires it";
        return res;
    }
    std::size_t len = s.barycenters.size();
    std::size_t tail = std::min<std::size_t>(5, len);
    double max_b = 0.0;
    for (std::size_t i = len - tail; i < len; ++i)
        max_b = std::max(max_b, std::abs(s.barycenters[i]));
    res.evidence["trailing_max_abs_b"] = max_b;
    if (max_b <= th.limit_tolerance) {
        res.status = CriterionStatus::ConsistentWithStability;
        res.caveat = "barycenters vanish at the declared tolerance (finite-horizon test)";
    } else {
        res.status = CriterionStatus::InstabilityEvidence;
        res.caveat = "o(n) proxy holds but barycenters do not vanish; finite-horizon evidence";
    }
    return res;
}

LambdaPath radial_path_for_length(std::size_t len) {
    // lambda_k = 1 - 2^-k needs roughly 14 * 2^k terms for the tail bound.
    int K = 3;
    while (K < 20 && 14.0 * std::pow(2.0, K + 1) <= double(len)) ++K;
    return LambdaPath::radial(K);
}

CriterionResult abel_criterion(const Spectrum& s, const Thresholds& th) {
    CriterionResult res;
    res.id = CriterionId::AbelConvergence;
    res.thresholds["o_of_n_proxy"] = th.o_of_n_proxy;
    res.thresholds["radius_slack"] = th.radius_slack;
    res.thresholds["limit_tolerance"] = th.limit_tolerance;
    if (s.degenerate) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "degenerate spectrum";
        return res;
    }
    double proxy = small_o_of_n_proxy(s);
    res.evidence["o_of_n_proxy"] = proxy;
    if (proxy > th.o_of_n_proxy) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "sigma_n = o(n) proxy fails";
        return res;
    }
    Spectrum copy = s;
    RadiusEstimate rad = radius_of_convergence(copy);
    res.evidence["radius_estimate"] = rad.infinite ? 1e308 : rad.value;
    if (!rad.infinite && rad.value < 1.0 - th.radius_slack) {
        res.status = CriterionStatus::Inapplicable;
        res.caveat = "radius-of-convergence estimate below 1";
        return res;
    }
    LambdaPath path = radial_path_for_length(s.size());
    SummabilityReport rep = abel_scan(Sequence::of(s.sigma), path);
    res.evidence["abel_limit_abs"] =
        rep.verdict == ConvergenceVerdict::ConvergesTo ? std::abs(rep.limit) : -1.0;
    res.evidence["path_points"] = double(path.samples.size());
    switch (rep.verdict) {
        case ConvergenceVerdict::ConvergesTo:
            if (std::abs(rep.limit) > th.limit_tolerance) {
                res.status = CriterionStatus::InstabilityEvidence;
                res.caveat = "radial Abel averages stabilize away from 0";
            } else {
                res.status = CriterionStatus::ConsistentWithStability;
                res.caveat = "radial Abel averages vanish at the declared tolerance";
            }
            break;
        case ConvergenceVerdict::Diverges:
        case ConvergenceVerdict::Oscillates:
            res.status = CriterionStatus::InstabilityEvidence;
            res.caveat = "radial Abel averages do not settle (" + to_string(rep.verdict) + ")";
            break;
        case ConvergenceVerdict::Undecided:
            res.status = CriterionStatus::Undecided;
            res.caveat = "tail bounds unattainable at this horizon; path truncated";
            break;
    }
    return res;
}

// ---------------------------------------------------------------------------

OrbitClassification classify_orbit(const RationalMap& R, cplx z0, int budget,
                                   const Thresholds& th) {
    OrbitClassification out;
    std::vector<cplx> hist;
    hist.reserve(std::size_t(budget) + 1);
    hist.push_back(z0);
    bool inf_attracting = false;
    {
        int gap = R.num().degree() - R.den().degree();
        if (gap >= 2) inf_attracting = true;
        else if (gap == 1)
            inf_attracting =
                std::abs(R.den().leading() / R.num().leading()) < 1.0 - th.attracting_margin;
    }
    cplx z = z0;
    for (int n = 1; n <= budget; ++n) {
        SpherePoint img = R.evaluate(SpherePoint(z));
        if (img.is_infinity()) {
            out.steps = n;
            out.escaped = inf_attracting;
            return out;
        }
        z = img.finite();
        if (std::abs(z) > 1e8) {
            out.steps = n;
            out.escaped = inf_attracting;
            return out;
        }
        hist.push_back(z);
        for (int p = 1; p <= th.cycle_max_period && 3 * p <= n; ++p) {
            double tol = th.cycle_return_tolerance * (1.0 + std::abs(z));
            if (std::abs(hist[n] - hist[n - p]) < tol &&
                std::abs(hist[n - p] - hist[n - 2 * p]) < tol &&
                std::abs(hist[n - 2 * p] - hist[n - 3 * p]) < tol) {
                // Multiplier over the last p steps.
                double log_mult = 0.0;
                bool super = false;
                for (int k = 0; k < p; ++k) {
                    cplx d = R.derivative(hist[std::size_t(n - 1 - k)]);
                    if (std::abs(d) == 0.0) { super = true; break; }
                    log_mult += std::log(std::abs(d));
                }
                if (super || log_mult < std::log(1.0 - th.attracting_margin)) {
                    out.converged = true;
                    out.steps = n;
                    out.period = p;
                    out.cycle_representative = z;
                    return out;
                }
            }
        }
    }
    out.steps = budget;
    return out;
}

namespace {

// Spherical derivative |R'(z)| (1+|z|^2) / (1+|R(z)|^2).
double spherical_derivative(const RationalMap& R, cplx z, cplx image) {
    return std::abs(R.derivative(z)) * (1.0 + abs2(z)) / (1.0 + abs2(image));
}

struct CellClass {
    bool fatou = false;
};

// Fatou candidate: the center orbit resolves (attracting cycle or escape to an
// attracting infinity) before the transported spherical cell size exceeds the
// distortion guard.  Cells whose dynamics smear them beyond the guard stay
// unresolved; that is what keeps thin Julia sets impassable at finite
// resolution.
CellClass classify_cell(const RationalMap& R, cplx z0, double cell_size_sph, int budget,
                        bool inf_attracting, const Thresholds& th) {
    CellClass out;
    std::vector<cplx> hist;
    hist.reserve(std::size_t(budget) + 1);
    hist.push_back(z0);
    double log_distortion = 0.0;
    cplx z = z0;
    for (int n = 1; n <= budget; ++n) {
        SpherePoint img = R.evaluate(SpherePoint(z));
        cplx w;
        if (img.is_infinity() || std::abs((w = img.finite())) > 1e8) {
            out.fatou = inf_attracting;
            return out;
        }
        double sd = spherical_derivative(R, z, w);
        if (sd > 0.0) log_distortion += std::log(sd);
        if (cell_size_sph * std::exp(log_distortion) > th.separation_distortion) return out;
        z = w;
        hist.push_back(z);
        for (int p = 1; p <= th.cycle_max_period && 3 * p <= n; ++p) {
            double tol = th.cycle_return_tolerance * (1.0 + std::abs(z));
            if (std::abs(hist[std::size_t(n)] - hist[std::size_t(n - p)]) < tol &&
                std::abs(hist[std::size_t(n - p)] - hist[std::size_t(n - 2 * p)]) < tol &&
                std::abs(hist[std::size_t(n - 2 * p)] - hist[std::size_t(n - 3 * p)]) < tol) {
                double log_mult = 0.0;
                bool super = false;
                for (int k = 0; k < p; ++k) {
                    cplx d = R.derivative(hist[std::size_t(n - 1 - k)]);
                    if (std::abs(d) == 0.0) { super = true; break; }
                    log_mult += std::log(std::abs(d));
                }
                if (super || log_mult < std::log(1.0 - th.attracting_margin)) {
                    out.fatou = true;
                    return out;
                }
                // Repelling or indifferent return: keep iterating.
            }
        }
    }
    return out;
}

} // namespace

SeparationResult separation_heuristic(const RationalMap& R, cplx c,
                                      const std::vector<cplx>& pc_sample,
                                      const SeparationGrid& grid, int budget,
                                      const Thresholds& th) {
    SeparationResult res;
    if (budget <= 0) {
        res.outcome = SeparationOutcome::Undecided;
        res.note = "zero budget";
        return res;
    }
    require(!pc_sample.empty(), "separation: empty postcritical sample");
    require(grid.resolution >= 8, "separation: resolution too small");
    require(grid.xmax > grid.xmin && grid.ymax > grid.ymin, "separation: empty grid box");

    // Exact-point check of c itself: in the Fatou candidate set the criterion
    // does not apply.
    OrbitClassification cc = classify_orbit(R, c, budget, th);
    if (cc.converged || cc.escaped) {
        res.outcome = SeparationOutcome::Inapplicable;
        res.note = "c resolves to an attracting target (Fatou candidate)";
        return res;
    }

    bool inf_attracting = false;
    {
        int gap = R.num().degree() - R.den().degree();
        if (gap >= 2) inf_attracting = true;
        else if (gap == 1)
            inf_attracting =
                std::abs(R.den().leading() / R.num().leading()) < 1.0 - th.attracting_margin;
    }

    int nx = grid.resolution, ny = grid.resolution;
    double hx = (grid.xmax - grid.xmin) / nx;
    double hy = (grid.ymax - grid.ymin) / ny;
    double h = std::max(hx, hy);
    std::vector<char> fatou(std::size_t(nx) * std::size_t(ny), 0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            cplx z(grid.xmin + (i + 0.5) * hx, grid.ymin + (j + 0.5) * hy);
            double cell_sph = h * 2.0 / (1.0 + abs2(z));
            CellClass cls = classify_cell(R, z, cell_sph, budget, inf_attracting, th);
            fatou[std::size_t(j) * nx + i] = cls.fatou ? 1 : 0;
            if (cls.fatou) ++res.fatou_cells;
            else ++res.unresolved_cells;
        }
    }
    if (res.fatou_cells == 0) {
        res.outcome = SeparationOutcome::Undecided;
        res.note = "no Fatou-candidate cells at this resolution/budget";
        return res;
    }

    auto cell_of = [&](cplx z) -> std::pair<int, int> {
        int i = int(std::floor((z.real() - grid.xmin) / hx));
        int j = int(std::floor((z.imag() - grid.ymin) / hy));
        return {std::clamp(i, 0, nx - 1), std::clamp(j, 0, ny - 1)};
    };

    std::vector<char> target(std::size_t(nx) * std::size_t(ny), 0);
    for (auto& p : pc_sample) {
        auto [i, j] = cell_of(p);
        target[std::size_t(j) * nx + i] = 1;
    }

    // 4-connected flood through non-Fatou cells starting from c's cell.
    auto [ci, cj] = cell_of(c);
    std::vector<char> seen(std::size_t(nx) * std::size_t(ny), 0);
    std::queue<std::pair<int, int>> q;
    q.push({ci, cj});
    seen[std::size_t(cj) * nx + ci] = 1;
    bool reached_target = false;
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        ++res.flood_cells;
        std::size_t idx = std::size_t(j) * nx + i;
        if (target[idx]) {
            reached_target = true;
            break;
        }
        if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) res.flood_reached_border = true;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ni = i + di[k], nj = j + dj[k];
            if (ni < 0 || nj < 0 || ni >= nx || nj >= ny) continue;
            std::size_t nidx = std::size_t(nj) * nx + ni;
            if (seen[nidx] || fatou[nidx]) continue;
            seen[nidx] = 1;
            q.push({ni, nj});
        }
    }

    if (reached_target) {
        res.outcome = SeparationOutcome::NotSeparatedAtResolution;
        res.note = "a passable (non-Fatou) grid path joins c to the postcritical sample";
    } else if (res.flood_reached_border) {
        res.outcome = SeparationOutcome::Undecided;
        res.note = "the passable component of c leaves the grid window";
    } else {
        res.outcome = SeparationOutcome::Separated;
        res.note = "the passable component of c is enclosed by Fatou-candidate cells";
    }
    return res;
}

// ---------------------------------------------------------------------------

DiagnosticsReport full_report(const RationalMap& R, const SpherePoint& c,
                              const FullReportConfig& cfg) {
    const Thresholds& th = cfg.thresholds;
    DiagnosticsReport rep;
    rep.map_description = R.describe();
    rep.horizon = cfg.horizon;
    rep.seed = cfg.seed;

    Spectrum s = compute_spectrum(R, c, cfg.horizon);
    rep.critical_point = s.critical_point.finite();
    rep.degenerate = s.degenerate;

    OrbitClassification cc = classify_orbit(R, rep.critical_point, cfg.separation_budget, th);
    rep.critical_point_in_fatou = cc.converged || cc.escaped;

    rep.postcritical = postcritical_sample(R, c, cfg.horizon);

    // Theorem-A style precondition: some fixed point outside the P_c sample.
    rep.fixed_points_outside_pc = false;
    for (auto& fp : R.fixed_points()) {
        if (fp.location.is_infinity()) {
            if (rep.postcritical.bounded) rep.fixed_points_outside_pc = true;
            continue;
        }
        double d = std::numeric_limits<double>::infinity();
        for (auto& p : rep.postcritical.points)
            d = std::min(d, std::abs(p - fp.location.finite()));
        if (d > kAtomMergeRadius) rep.fixed_points_outside_pc = true;
    }

    if (!s.degenerate && int(s.size()) >= 2 * cfg.trichotomy_window)
        rep.trichotomy = trichotomy_classify(s, cfg.trichotomy_window);
    else {
        rep.trichotomy.label = TrichotomyCase::Degenerate;
        rep.trichotomy.window = cfg.trichotomy_window;
    }
    if (s.size() >= 16) rep.radius = radius_of_convergence(s);
    rep.oscillation = oscillation_stats(s);

    std::string fatou_note;
    bool julia_applicable = !s.degenerate && !rep.critical_point_in_fatou;
    if (s.degenerate) fatou_note = "degenerate spectrum (" + s.truncation_reason + ")";
    else if (rep.critical_point_in_fatou)
        fatou_note = "critical orbit resolves to an attracting target; c is a Fatou candidate "
                     "and the Julia-set criteria do not apply";

    auto inapplicable = [&](CriterionId id) {
        CriterionResult r;
        r.id = id;
        r.status = CriterionStatus::Inapplicable;
        r.caveat = fatou_note;
        return r;
    };

    // Separation heuristic over the padded postcritical bounding box.
    if (julia_applicable && rep.postcritical.bounded && !rep.postcritical.points.empty()) {
        double pad = 0.5 + 0.1 * rep.postcritical.diameter;
        SeparationGrid grid{rep.postcritical.box_min.real() - pad,
                            rep.postcritical.box_max.real() + pad,
                            rep.postcritical.box_min.imag() - pad,
                            rep.postcritical.box_max.imag() + pad, cfg.separation_resolution};
        grid.xmin = std::min(grid.xmin, rep.critical_point.real() - pad);
        grid.xmax = std::max(grid.xmax, rep.critical_point.real() + pad);
        grid.ymin = std::min(grid.ymin, rep.critical_point.imag() - pad);
        grid.ymax = std::max(grid.ymax, rep.critical_point.imag() + pad);
        rep.separation = separation_heuristic(R, rep.critical_point, rep.postcritical.points,
                                              grid, cfg.separation_budget, th);
    } else {
        rep.separation.outcome = SeparationOutcome::Inapplicable;
        rep.separation.note = julia_applicable ? "unbounded postcritical sample" : fatou_note;
    }

    // Radial weak-* scan of the spectrum sequence (Theorem-B style hypothesis).
    std::optional<NormalizedLimit> normalized;
    std::optional<WeakStarScan> scan;
    if (julia_applicable) {
        try {
            MeasureFamilySpec spec;
            spec.base_point = s.v;
            spec.sequence = Sequence::of(s.sigma);
            AtomicMeasure support_hint = [&] {
                std::vector<Atom> atoms;
                for (auto& p : rep.postcritical.points) atoms.push_back({p, cplx(1.0)});
                return AtomicMeasure(std::move(atoms));
            }();
            TestFamily tests = TestFamily::standard(support_hint, cfg.seed);
            scan = weak_star_scan(R, spec, radial_path_for_length(s.size()), tests);
            rep.abel_scan_verdict = scan->verdict;
            if (scan->verdict == ScanVerdict::NonNullLimit) normalized = projective_normalize(*scan);
        } catch (const Error&) {
            scan.reset();
        }
    }

    // Criteria in fixed order.
    if (julia_applicable) {
        rep.criteria.push_back(stability_bound_check(s, th));
        auto [b1, b2] = corollary_checks(s, th);
        rep.criteria.push_back(b1);
        rep.criteria.push_back(b2);
        rep.criteria.push_back(barycentric_check(s, th));
        rep.criteria.push_back(abel_criterion(s, th));
    } else {
        rep.criteria.push_back(inapplicable(CriterionId::PropStabilityBound));
        rep.criteria.push_back(inapplicable(CriterionId::CorBullet1));
        rep.criteria.push_back(inapplicable(CriterionId::CorBullet2));
        rep.criteria.push_back(inapplicable(CriterionId::Barycentric));
        rep.criteria.push_back(inapplicable(CriterionId::AbelConvergence));
    }

    // Bounded-spectrum theorem hypotheses (two parts).
    {
        CriterionResult t1, t2;
        t1.id = CriterionId::BoundedThm1;
        t2.id = CriterionId::BoundedThm2;
        t1.thresholds["sup_sigma_bound"] = th.sup_sigma_bound;
        t2.thresholds["sup_sigma_bound"] = th.sup_sigma_bound;
        t2.thresholds["cauchy_tolerance"] = th.cauchy_tolerance;
        if (!julia_applicable) {
            t1.status = t2.status = CriterionStatus::Inapplicable;
            t1.caveat = t2.caveat = fatou_note;
        } else {
            double sup_sigma = 0.0;
            for (auto& e : s.entries)
                if (std::isfinite(e.log_mod)) sup_sigma = std::max(sup_sigma, std::exp(e.log_mod));
            bool ell_inf = sup_sigma <= th.sup_sigma_bound;
            bool separated = rep.separation.outcome == SeparationOutcome::Separated;
            t1.evidence["sup_sigma"] = sup_sigma;
            bool area_decreasing =
                rep.postcritical.area_estimates.size() >= 2 &&
                rep.postcritical.area_estimates.back() <=
                    0.25 * rep.postcritical.area_estimates.front();
            t1.evidence["area_first"] = rep.postcritical.area_estimates.empty()
                                            ? 0.0
                                            : rep.postcritical.area_estimates.front();
            t1.evidence["area_last"] = rep.postcritical.area_estimates.empty()
                                           ? 0.0
                                           : rep.postcritical.area_estimates.back();
            if (ell_inf && rep.postcritical.bounded && separated && area_decreasing) {
                t1.status = CriterionStatus::InstabilityEvidence;
                t1.caveat = "bounded spectrum, separated c, and shrinking box-count areas; "
                            "the measure-zero hypothesis itself is not decidable numerically";
            } else {
                t1.status = CriterionStatus::Inapplicable;
                t1.caveat = "hypothesis set not established (bounded sigma: " +
                            std::string(ell_inf ? "yes" : "no") +
                            ", separated: " + to_string(rep.separation.outcome) +
                            ", area trend: " + (area_decreasing ? "shrinking" : "not shrinking") +
                            ")";
            }
            // Part 2: sigma convergent.
            std::size_t tail = std::min<std::size_t>(5, s.sigma.size());
            double spread = 0.0;
            for (std::size_t i = s.sigma.size() - tail; i < s.sigma.size(); ++i)
                for (std::size_t j = i + 1; j < s.sigma.size(); ++j)
                    spread = std::max(spread, std::abs(s.sigma[i] - s.sigma[j]));
            bool convergent = spread < th.cauchy_tolerance;
            t2.evidence["sigma_tail_spread"] = spread;
            if (ell_inf && separated && convergent) {
                t2.status = CriterionStatus::InstabilityEvidence;
                t2.caveat = "bounded convergent spectrum with separated c";
            } else {
                t2.status = CriterionStatus::Inapplicable;
                t2.caveat = "hypothesis set not established (convergent sigma: " +
                            std::string(convergent ? "yes" : "no") +
                            ", separated: " + to_string(rep.separation.outcome) + ")";
            }
        }
        rep.criteria.push_back(t1);
        rep.criteria.push_back(t2);
    }

    // Norlund regularity of |sigma| under Cesaro weights, combined with the
    // Voronoi scan verdicts.
    {
        CriterionResult nr;
        nr.id = CriterionId::NorlundRegular;
        nr.thresholds["regularity_slack"] = th.norlund_regularity_slack;
        if (!julia_applicable) {
            nr.status = CriterionStatus::Inapplicable;
            nr.caveat = fatou_note;
        } else {
            try {
                std::vector<cplx> absx(s.sigma.size());
                for (std::size_t i = 0; i < s.sigma.size(); ++i)
                    absx[i] = cplx(std::abs(s.sigma[i]), 0.0);
                auto t = norlund_averages(absx, NorlundWeights::constant(absx.size()));
                auto reg = norlund_regularity_check(t);
                nr.evidence["limsup_estimate"] = reg.limsup_estimate;
                if (!reg.regular) {
                    nr.status = CriterionStatus::Inapplicable;
                    nr.caveat = "|sigma| is not Norlund regular under Cesaro weights";
                } else if (scan && scan->verdict == ScanVerdict::NonNullLimit && normalized &&
                           normalized->stabilized) {
                    nr.status = CriterionStatus::InstabilityEvidence;
                    nr.caveat = "N-regular |sigma| with a stabilized nonzero projective limit; "
                                "M-measure property checked only at the declared grid scale";
                } else if (scan && scan->verdict == ScanVerdict::NullLimit &&
                           rep.separation.outcome == SeparationOutcome::Separated) {
                    nr.status = CriterionStatus::InstabilityEvidence;
                    nr.caveat = "N-regular |sigma| with vanishing measure family and separated c";
                } else {
                    nr.status = CriterionStatus::Undecided;
                    nr.caveat = "regularity holds but the measure-scan hypotheses are not "
                                "established";
                }
            } catch (const Error& e) {
                nr.status = CriterionStatus::Undecided;
                nr.caveat = std::string("norlund check failed: ") + e.what();
            }
        }
        rep.criteria.push_back(nr);
    }

    // Separation criterion (Theorem-B hypothesis pair).
    {
        CriterionResult sep;
        sep.id = CriterionId::Separation;
        sep.evidence["fatou_cells"] = double(rep.separation.fatou_cells);
        sep.evidence["unresolved_cells"] = double(rep.separation.unresolved_cells);
        if (!julia_applicable) {
            sep.status = CriterionStatus::Inapplicable;
            sep.caveat = fatou_note;
        } else {
            switch (rep.separation.outcome) {
                case SeparationOutcome::Separated:
                    if (scan && scan->verdict == ScanVerdict::NullLimit) {
                        sep.status = CriterionStatus::InstabilityEvidence;
                        sep.caveat = "c separated from its postcritical sample while the measure "
                                     "family vanishes along the radial path";
                    } else {
                        sep.status = CriterionStatus::Undecided;
                        sep.caveat = "separated, but the vanishing-measure hypothesis is not "
                                     "established";
                    }
                    break;
                case SeparationOutcome::NotSeparatedAtResolution:
                    sep.status = CriterionStatus::Undecided;
                    sep.caveat = "no separating Fatou-candidate barrier at this resolution; " +
                                 rep.separation.note;
                    break;
                case SeparationOutcome::Inapplicable:
                    sep.status = CriterionStatus::Inapplicable;
                    sep.caveat = rep.separation.note;
                    break;
                case SeparationOutcome::Undecided:
                    sep.status = CriterionStatus::Undecided;
                    sep.caveat = rep.separation.note;
                    break;
            }
        }
        rep.criteria.push_back(sep);
    }

    // Box-count area evidence.
    {
        CriterionResult pa;
        pa.id = CriterionId::PcArea;
        if (!julia_applicable) {
            pa.status = CriterionStatus::Inapplicable;
            pa.caveat = fatou_note;
        } else if (!rep.postcritical.bounded) {
            pa.status = CriterionStatus::Inapplicable;
            pa.caveat = "unbounded postcritical sample";
        } else {
            pa.status = CriterionStatus::Undecided;
            pa.caveat = "box-count areas are evidence only; measure zero is not decidable "
                        "numerically";
        }
        for (std::size_t k = 0; k < rep.postcritical.area_estimates.size(); ++k)
            pa.evidence["area_2^-" + std::to_string(k + 4)] = rep.postcritical.area_estimates[k];
        rep.criteria.push_back(pa);
    }

    return rep;
}

} // namespace orbitsum
