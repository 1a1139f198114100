#ifndef ORBITSUM_POLYNOMIAL_HPP
#define ORBITSUM_POLYNOMIAL_HPP

#include <vector>

#include "orbitsum/complex_util.hpp"

namespace orbitsum {

// Dense polynomial with complex coefficients in ascending degree order.
// The zero polynomial is represented by an empty coefficient vector.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(cplx v) { return Polynomial({v}); }
    static Polynomial linear(cplx c0, cplx c1) { return Polynomial({c0, c1}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : int(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }
    cplx coeff(std::size_t k) const { return k < c_.size() ? c_[k] : cplx(0.0); }

    cplx eval(cplx z) const {
        cplx r(0.0);
        for (std::size_t i = c_.size(); i-- > 0;) r = r * z + c_[i];
        return r;
    }
    // Evaluation in extended precision; used when mantissa_bits > 53.
    cplx eval_ld(cplx z) const;

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<cplx> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = double(i) * c_[i];
        return Polynomial(std::move(d));
    }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(cplx s) const;

    double max_coeff_abs() const {
        double m = 0.0;
        for (auto& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    // Drops trailing coefficients that are exactly zero, and optionally those
    // below a relative threshold (used after compositions where exact
    // cancellation leaves roundoff dust in the leading terms).
    void trim(double rel_threshold = 0.0);

private:
    std::vector<cplx> c_;
};

struct RootCluster {
    cplx location;
    int multiplicity = 1;
    double residual = 0.0; // |p(location)| relative to coefficient scale at location
};

struct RootOptions {
    double tolerance = 1e-8;   // user acceptance threshold / clustering base
    int max_sweeps = 160;
    int max_restarts = 6;
    bool use_long_double = false;
};

// All complex roots of p, with multiplicities detected by clustering at radius
// 10 * tolerance (relative to 1+|z|).  Simultaneous Aberth-Ehrlich iteration
// with seeded perturbation restarts; throws with the worst residual on
// non-convergence.
std::vector<RootCluster> find_roots(const Polynomial& p, const RootOptions& opts = {});

} // namespace orbitsum

#endif
