#ifndef ORBITSUM_POTENTIAL_HPP
#define ORBITSUM_POTENTIAL_HPP

#include <string>
#include <vector>

#include "orbitsum/measures.hpp"

namespace orbitsum {

inline constexpr double kKernelExclusionRadius = 1e-9;

// gamma_a(z) = a(a-1) / (z (z-1) (z-a)), evaluated through the partial
// fraction form (a-1)/z - a/(z-1) + 1/(z-a).  The residues (a-1, -a, 1) sum
// to zero, as do the first moments, giving cubic decay.
cplx gamma_kernel(cplx a, cplx z);

// Parameter validity: a away from the fixed poles {0, 1}.
void require_gamma_parameter(cplx a);

struct GammaKernel {
    cplx a;
    explicit GammaKernel(cplx a_) : a(a_) { require_gamma_parameter(a); }
    cplx operator()(cplx z) const { return gamma_kernel(a, z); }
    cplx residue_at_zero() const { return a - cplx(1.0); }
    cplx residue_at_one() const { return -a; }
    cplx residue_at_a() const { return cplx(1.0); }
};

// f_mu(z) = sum w_i / (t_i - z); z must keep clear of every atom.
cplx cauchy_transform(const AtomicMeasure& mu, cplx z);

// phi(z) = sum w_i gamma_{a_i}(z) with kernel parameters at the atom
// locations.  Atoms at 0 or 1 make the kernel undefined; the error suggests
// renormalizing with a different fixed triple.
cplx potential_of_measure(const AtomicMeasure& nu, cplx z);

struct GammaL1Estimate {
    double estimate = 0.0;     // integral of |gamma_a| over the plane
    double reference = 0.0;    // |a| * |ln |a||
    double ratio = 0.0;        // estimate / reference (0 when reference ~ 0)
    bool reference_informative = true;
    bool near_singular = false; // a within 1e-6 of {0, 1}
};

struct GammaQuadratureSpec {
    int angular_nodes = 64;   // per pole-disk annulus
    int radial_nodes = 40;
    double inner_radius = 1e-6;
    int mid_angular = 256;    // masked polar grid over the mid field
    int mid_radial = 256;
    double far_radius_factor = 8.0; // far field starts at factor * max(1, |a|)
    double convergence_tolerance = 1e-3;
};

// Numerically integrates |gamma_a| dA: geometric-radius polar quadrature in a
// disk around each pole, a masked polar grid over the mid field, and a 1D
// radial integral of the envelope beyond the far radius.  Runs the scheme at
// base and doubled resolution and errors if the two differ by more than the
// declared tolerance.
GammaL1Estimate gamma_l1_estimate(cplx a, const GammaQuadratureSpec& spec = {});

enum class MMeasureVerdict { MMeasure, NotDetected, Degenerate };

std::string to_string(MMeasureVerdict v);

struct MMeasureResult {
    MMeasureVerdict verdict = MMeasureVerdict::Degenerate;
    double max_abs_transform = 0.0;
    double threshold = 0.0;
    std::string caveat;
};

// max over grid of |f_mu| against threshold * TV(mu).  For atomic measures the
// transform never vanishes identically, so NotDetected only flags cancellation
// at the grid scale; the caveat says so.
MMeasureResult m_measure_test(const AtomicMeasure& mu, const std::vector<cplx>& grid,
                              double threshold);

// Trapezoid contour integral of f_mu around one atom; recovered weight is
// -(1/2πi) * contour integral (sign frozen by the residue of w/(t-z) at t).
cplx contour_mass_recovery(const AtomicMeasure& mu, std::size_t atom_index, double radius,
                           int nodes = 256);

// ---------------------------------------------------------------------------

struct GridSpec {
    double xmin = -2.0, xmax = 2.0, ymin = -2.0, ymax = 2.0;
    int nx = 64, ny = 64;
    double exclusion_radius = 1e-6;

    void validate() const;
    cplx node(int i, int j) const; // cell-center sample
    double cell_area() const;
};

struct FieldSample {
    GridSpec grid;
    std::vector<cplx> points;  // included sample points (exclusions removed)
    std::vector<cplx> values;
    double sup = 0.0;
    double l1_estimate = 0.0;  // Riemann sum of |value| * cell area
};

FieldSample sample_field(const GridSpec& grid, const std::vector<cplx>& exclusion_centers,
                         const std::function<cplx(cplx)>& f);

} // namespace orbitsum

#endif
