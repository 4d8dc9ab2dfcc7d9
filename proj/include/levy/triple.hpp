// Levy-Khintchine triples [a, R, M] and their characteristic exponents.
#pragma once

#include <functional>
#include <variant>

#include "levy/radial.hpp"

namespace levy {

// Sampler fast-paths for closed families; carried through the operations
// that preserve the family.
struct GammaHint {
    double shape = 1, rate = 1;
};
struct StableHint {
    double alpha = 0.7, coef = 1;  // density coef * r^{-1-alpha}, untruncated
};
using FamilyHint = std::variant<std::monostate, GammaHint, StableHint>;

struct LevyTriple {
    int dim = 1;
    Vec shift;              // a
    Matrix covariance;      // R, always dim x dim
    RadialLevyMeasure levy_measure;
    FamilyHint hint;
};

// Validates and assembles a triple: consistent dims, symmetric PSD covariance
// (eigenvalues >= -1e-12 * trace), integrable measure.
LevyTriple make_triple(Vec shift, Matrix covariance, RadialLevyMeasure measure);

// Characteristic exponent Phi = log of the characteristic function, as an
// evaluable function plus the shared probe grid. Copies share the write-once
// value cache.
class CharFn {
public:
    CharFn() = default;
    CharFn(int dim, std::function<complex(const Vec&)> eval, double tol = 1e-9);

    int dim() const { return dim_; }
    double tol() const { return tol_; }
    complex operator()(const Vec& y) const { return eval_(y); }
    complex operator()(double y) const;  // dim-1 convenience

    const std::vector<Vec>& probes() const { return probes_; }
    const std::vector<complex>& grid_values() const;  // write-once, parallel fill

    const std::shared_ptr<const LevyTriple>& source() const { return source_; }
    void set_source(std::shared_ptr<const LevyTriple> s) { source_ = std::move(s); }

private:
    int dim_ = 1;
    std::function<complex(const Vec&)> eval_;
    std::vector<Vec> probes_;
    double tol_ = 1e-9;
    std::shared_ptr<const LevyTriple> source_;
    struct Cache {
        std::once_flag flag;
        std::vector<complex> vals;
    };
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// 64 points per axis, uniform in [-5, 5]; dims 1 and 2.
std::vector<Vec> default_probe_grid(int dim);

// --- operations ---------------------------------------------------------------

CharFn exponent_of(const LevyTriple& t);

LevyTriple convolve(const LevyTriple& t1, const LevyTriple& t2);
LevyTriple conv_power(const LevyTriple& t, double c);
LevyTriple dilate(const LevyTriple& t, double u);

// int_{r>1} log r dM over all rays; +inf is a valid return.
double triple_log_moment(const LevyTriple& t);

// Radius scale of the measure (largest atom / density breakpoint): the
// exponent of a compactly supported measure oscillates at this rate, which
// quadrature over scaled arguments needs as a panel-width hint.
double measure_osc_radius(const LevyTriple& t);

// --- families -------------------------------------------------------------

LevyTriple gaussian_triple(Vec mean, Matrix cov);
LevyTriple gaussian_triple(double mean, double variance);
// atoms: (location vector, probability); probabilities sum to 1
LevyTriple compound_poisson_triple(double rate, const std::vector<std::pair<Vec, double>>& atoms);
// Levy density shape * exp(-rate r)/r on (0, inf)
LevyTriple gamma_triple(double shape, double rate);
// one-sided alpha-stable, Levy density scale * r^{-1-alpha}; optionally
// truncated at r_max (the truncated variant keeps a finite log-moment trivially)
LevyTriple stable_triple(double alpha, double scale,
                         double r_max = std::numeric_limits<double>::infinity());

// --- grid evaluation / diagnostics -----------------------------------------

// Parallel evaluation over probe points (OpenMP); serial reference in levy::serial.
std::vector<complex> eval_grid(const CharFn& f, const std::vector<Vec>& probes);
double sup_gap_on_grid(const CharFn& f, const CharFn& g, const std::vector<Vec>& probes);

namespace serial {
std::vector<complex> eval_grid(const CharFn& f, const std::vector<Vec>& probes);
}

struct CharFnCheck {
    double at_zero = 0;          // |Phi(0)|
    double worst_hermitian = 0;  // max |Phi(-y) - conj Phi(y)|
    double worst_real_part = 0;  // max positive excess of Re Phi
};
CharFnCheck check_charfn(const CharFn& f);

// Mean vector and total second moment of the law, +inf components when the
// measure tails do not certify them. Drives half-line truncation bounds.
struct MomentSummary {
    Vec mean;           // may contain inf
    bool mean_finite = false;
    double m2 = 0;      // trace R + int r^2 dM, may be inf
};
MomentSummary moment_summary(const LevyTriple& t);

}  // namespace levy
