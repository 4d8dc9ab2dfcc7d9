// Polar (ray x radial) representation of Levy spectral measures.
//
// Each ray carries atoms plus a radial density on (0, inf). Densities are
// closure-backed: families evaluate their exact formula, transformed measures
// (the J^beta and I images) evaluate through cached cumulative tail integrals,
// so the class stays closed under every map the engine applies. Certified
// tail envelopes at both ends drive integrability checks and truncation.
#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "levy/common.hpp"
#include "levy/quadrature.hpp"

namespace levy {

// Certified bound rho(r) <= coef * r^power * exp(-decay * r) on one side of
// the breakpoint range. When `exact` is set the density *equals* the bound
// expression there, which unlocks closed-form tail integrals.
struct TailEnvelope {
    double coef = 0.0;
    double power = 0.0;
    double decay = 0.0;
    bool exact = false;
};

struct RadialAtom {
    double radius = 0.0;
    double weight = 0.0;
};

class RadialDensityImpl;
using DensityPtr = std::shared_ptr<const RadialDensityImpl>;

class RadialDensityImpl {
public:
    virtual ~RadialDensityImpl() = default;

    virtual double eval(double r) const = 0;

    // Sorted, non-empty. The density is piecewise smooth between breakpoints;
    // outside [front, back] the tail envelopes apply.
    virtual const std::vector<double>& breakpoints() const = 0;

    virtual double support_hi() const { return std::numeric_limits<double>::infinity(); }
    virtual TailEnvelope lower() const = 0;
    virtual TailEnvelope upper() const = 0;

    // Non-null for sum densities; consumers decompose term by term.
    virtual const std::vector<DensityPtr>* summands() const { return nullptr; }

    // Smallest radius the representation resolves (grid-backed densities);
    // 0 when the density evaluates exactly at any radius.
    virtual double resolution_floor() const { return 0.0; }

    // Write-once cache for the compensated Fourier integral (see levy_integral).
    mutable std::once_flag accel_once;
    mutable ChebInterp accel;
    mutable bool accel_usable = false;
};

// --- concrete densities -----------------------------------------------------

// rho(r) = coef * r^power * exp(-decay r) on (lo, hi].
DensityPtr make_power_exp_density(double coef, double power, double decay, double lo = 0.0,
                                  double hi = std::numeric_limits<double>::infinity());

// Piecewise log-linear density through (grid, values) with declared exact
// power tails at both ends (the wire-format density).
DensityPtr make_grid_density(std::vector<double> grid, std::vector<double> values,
                             double tail_lo, double tail_hi);

DensityPtr make_weighted(double c, DensityPtr base);
DensityPtr make_sum(std::vector<DensityPtr> parts);       // flattens nested sums
DensityPtr make_dilated(DensityPtr base, double scale);   // image under r -> scale*r, scale > 0

// J^beta radial image: out(r) = beta r^{beta-1} * int_r^inf dM(u) u^{-beta};
// atoms of the input are smeared into the density.
DensityPtr make_jbeta_density(DensityPtr base, std::vector<RadialAtom> atoms, double beta);

// I-map radial image: out(r) = (int_r^inf dM) / r, atoms smeared likewise.
DensityPtr make_itransform_density(DensityPtr base, std::vector<RadialAtom> atoms);

// max(a - b, 0); used for the witness measure beta(N - N^beta). The clamp
// covers quadrature-level noise only, callers must have checked sign first.
DensityPtr make_difference_density(DensityPtr a, DensityPtr b);

// --- integrals ---------------------------------------------------------------

// F(s) = int_0^inf (e^{isr} - 1 - isr 1_{r<=1}) rho(r) dr to absolute
// accuracy ~tol. Uses the write-once Chebyshev accelerator when the density
// is band-limited (exponential envelope or bounded support).
complex levy_integral(const RadialDensityImpl& rho, double s, double tol = 1e-9);

// int_{(a,b]} rho(r) r^q dr; b may be +inf. Returns +inf when the tail
// certificate shows divergence.
double power_moment(const RadialDensityImpl& rho, double q, double a, double b,
                    double tol = 1e-11);

// int_{r>1} log(r) rho(r) dr, +inf when divergent.
double log_tail_moment(const RadialDensityImpl& rho);

// Cached C(r) = int_r^{support_hi} rho(u) u^q du on a log grid, cubic Hermite
// in (log r, log C) with analytic slopes. Queries outside the grid fall back
// to envelope closed forms.
class WeightedTailCache {
public:
    WeightedTailCache(DensityPtr rho, double q);
    double operator()(double r) const;

private:
    DensityPtr rho_;
    double q_;
    std::vector<double> lx_, lc_, slope_lo_, slope_hi_;  // per-node log r / log C, per-segment slopes
    std::vector<double> xs_;                             // raw radii
    double grid_lo_ = 0, grid_hi_ = 0;
    double c_lo_ = 0;  // C at grid_lo
    double support_hi_ = 0;
    TailEnvelope lower_, upper_;
    int last_pos_ = -1;  // last node with C > 0
};

// --- measure -----------------------------------------------------------------

struct Ray {
    Vec direction;                  // unit vector
    std::vector<RadialAtom> atoms;  // sorted by radius
    DensityPtr density;             // may be null
};

struct RadialLevyMeasure {
    int dim = 0;
    std::vector<Ray> rays;

    bool is_zero() const;
};

// Throws integrability_error / domain_error when a ray fails its invariants
// (unit direction, positive radii/weights, min(1,r^2)-integrability with a
// certified upper tail).
void validate_measure(const RadialLevyMeasure& m, double tol = 1e-9);

// int_{r>1} log r dM summed over rays; +inf allowed.
double log_moment(const RadialLevyMeasure& m);

// Per-ray compensated Fourier integral at scalar frequency s = <y, direction>.
complex ray_levy_integral(const Ray& ray, double s, double tol = 1e-9);

// Scalar integral int_{(a,b]} r^q dM_ray over atoms + density.
double ray_power_moment(const Ray& ray, double q, double a, double b);

// Measure-level helpers shared by the triple operations.
RadialLevyMeasure merge_measures(const RadialLevyMeasure& a, const RadialLevyMeasure& b);
RadialLevyMeasure scale_weights(const RadialLevyMeasure& m, double c);
RadialLevyMeasure dilate_measure(const RadialLevyMeasure& m, double u);  // u != 0

}  // namespace levy
