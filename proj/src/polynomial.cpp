#include "orbitsum/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "orbitsum/error.hpp"

namespace orbitsum {

namespace {
using cplxl = std::complex<long double>;
}

cplx Polynomial::eval_ld(cplx z) const {
    cplxl r(0.0L, 0.0L);
    cplxl zl(z.real(), z.imag());
    for (std::size_t i = c_.size(); i-- > 0;) r = r * zl + cplxl(c_[i].real(), c_[i].imag());
    return {double(r.real()), double(r.imag())};
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx(0.0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    std::vector<cplx> r(std::max(c_.size(), o.c_.size()), cplx(0.0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial();
    std::vector<cplx> r(c_.size() + o.c_.size() - 1, cplx(0.0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
}

Polynomial Polynomial::scaled(cplx s) const {
    std::vector<cplx> r = c_;
    for (auto& v : r) v *= s;
    return Polynomial(std::move(r));
}

void Polynomial::trim(double rel_threshold) {
    double scale = 0.0;
    for (auto& v : c_) scale = std::max(scale, std::abs(v));
    double cut = rel_threshold * scale;
    while (!c_.empty()) {
        double a = std::abs(c_.back());
        if (a == 0.0 || a <= cut) c_.pop_back();
        else break;
    }
}

namespace {

// Coefficient-scale at z: sum |c_k| |z|^k.  Backward-error style residual
// normalization for the stopping test.
double eval_scale(const std::vector<cplx>& c, double az) {
    double s = 0.0, p = 1.0;
    for (auto& v : c) {
        s += std::abs(v) * p;
        p *= az;
    }
    return s;
}

std::vector<RootCluster> cluster_roots(std::vector<cplx> roots, const Polynomial& p,
                                       double tolerance) {
    const double radius = 10.0 * tolerance;
    std::sort(roots.begin(), roots.end(), lex_less);
    std::vector<RootCluster> out;
    std::size_t i = 0;
    std::vector<char> used(roots.size(), 0);
    // Greedy clustering: grow a cluster from each unused root by repeatedly
    // absorbing roots within the (relative) radius of the running centroid.
    for (; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> members{i};
        used[i] = 1;
        cplx centroid = roots[i];
        bool grew = true;
        while (grew) {
            grew = false;
            double r = radius * (1.0 + std::abs(centroid));
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(roots[j] - centroid) <= r) {
                    used[j] = 1;
                    members.push_back(j);
                    centroid = cplx(0.0);
                    for (auto m : members) centroid += roots[m];
                    centroid /= double(members.size());
                    grew = true;
                }
            }
        }
        RootCluster rc;
        rc.location = centroid;
        rc.multiplicity = int(members.size());
        double sc = eval_scale(p.coeffs(), std::abs(centroid));
        rc.residual = sc > 0.0 ? std::abs(p.eval(centroid)) / sc : std::abs(p.eval(centroid));
        out.push_back(rc);
    }
    std::sort(out.begin(), out.end(),
              [](const RootCluster& a, const RootCluster& b) { return lex_less(a.location, b.location); });
    return out;
}

} // namespace

std::vector<RootCluster> find_roots(const Polynomial& p, const RootOptions& opts) {
    require(!p.is_zero(), "roots: zero polynomial has no defined root set");
    std::vector<cplx> c = p.coeffs();

    // Exact zero roots peel off directly.
    int zero_mult = 0;
    while (c.size() > 1 && c.front() == cplx(0.0)) {
        c.erase(c.begin());
        ++zero_mult;
    }
    int n = int(c.size()) - 1;
    std::vector<cplx> roots;

    if (n > 0) {
        // Monic normalization for conditioning of the iteration.
        cplx lead = c.back();
        std::vector<cplx> m(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) m[i] = c[i] / lead;
        Polynomial pm{std::vector<cplx>(m)};
        Polynomial pd = pm.derivative();

        double bound = 0.0;
        for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(m[i]));
        double r0 = 1.0 + bound; // Cauchy bound

        const double stop_tol = 64.0 * std::numeric_limits<double>::epsilon();
        SplitMix64 rng(0x0a5eb7f3c1d2e4b9ULL);

        double worst = std::numeric_limits<double>::infinity();
        for (int restart = 0; restart <= opts.max_restarts; ++restart) {
            roots.assign(std::size_t(n), cplx(0.0));
            for (int i = 0; i < n; ++i) {
                double theta = 2.0 * kPi * (double(i) / n) + 0.41 + 0.2 * rng.uniform() * restart;
                double rr = r0 * (0.6 + 0.5 * double(i + 1) / n);
                roots[std::size_t(i)] = cplx(rr * std::cos(theta), rr * std::sin(theta));
            }

            bool converged = false;
            for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
                double max_step = 0.0;
                for (int i = 0; i < n; ++i) {
                    cplx zi = roots[std::size_t(i)];
                    cplx pv = opts.use_long_double ? pm.eval_ld(zi) : pm.eval(zi);
                    cplx dv = pd.eval(zi);
                    if (pv == cplx(0.0)) continue;
                    if (dv == cplx(0.0)) {
                        roots[std::size_t(i)] = zi + 1e-6 * r0 * cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
                        max_step = 1.0;
                        continue;
                    }
                    cplx newton = pv / dv;
                    cplx sum(0.0);
                    for (int j = 0; j < n; ++j) {
                        if (j == i) continue;
                        cplx diff = zi - roots[std::size_t(j)];
                        if (std::abs(diff) < 1e-300) diff = cplx(1e-300, 0.0);
                        sum += cplx(1.0) / diff;
                    }
                    cplx denom = cplx(1.0) - newton * sum;
                    cplx w = std::abs(denom) < 1e-300 ? newton : newton / denom;
                    roots[std::size_t(i)] = zi - w;
                    max_step = std::max(max_step, std::abs(w) / (1.0 + std::abs(zi)));
                }
                if (max_step < 1e-16) { converged = true; break; }
            }
            (void)converged;

            worst = 0.0;
            for (auto& z : roots) {
                double sc = eval_scale(m, std::abs(z));
                double res = std::abs(opts.use_long_double ? pm.eval_ld(z) : pm.eval(z));
                worst = std::max(worst, sc > 0.0 ? res / sc : res);
            }
            if (worst <= std::max(stop_tol, 1e-3 * opts.tolerance)) break;
            if (restart == opts.max_restarts)
                fail("roots: iteration did not converge; worst relative residual " +
                     std::to_string(worst));
        }
    }

    Polynomial pc{std::vector<cplx>(c)};
    auto clusters = cluster_roots(roots, pc, opts.tolerance);
    if (zero_mult > 0) {
        // Reattach the exact zero roots; merge with a near-zero cluster if one exists.
        bool merged = false;
        for (auto& rc : clusters) {
            if (std::abs(rc.location) <= 10.0 * opts.tolerance) {
                rc.multiplicity += zero_mult;
                merged = true;
                break;
            }
        }
        if (!merged) {
            RootCluster rc;
            rc.location = cplx(0.0);
            rc.multiplicity = zero_mult;
            rc.residual = 0.0;
            clusters.push_back(rc);
            std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
                return lex_less(a.location, b.location);
            });
        }
    }
    return clusters;
}

} // namespace orbitsum
