// Monte Carlo sampling of Levy increments, random integrals via tagged
// Riemann-Stieltjes sums, and MAFLP marginals. The OpenMP kernels and the
// serial reference produce bit-identical batches thanks to counter-keyed
// RNG streams.
#pragma once

#include "levy/integral_map.hpp"
#include "levy/rng.hpp"

namespace levy {

enum class SmallJumpMode { drift_only, gaussian_approx };

struct SimConfig {
    uint64_t seed = 1;
    int64_t n_samples = 10000;
    double jump_eps = 1e-3;   // small-jump cutoff radius
    int n_time_steps = 256;   // partition size per unit of the uniform block
    double b_max = 0.0;       // half-line truncation; 0 = derive from certificate
    SmallJumpMode small_jump = SmallJumpMode::gaussian_approx;
    double tail_var_tol = 1e-3;  // auto-b_max target for the U part
};

struct SampleBatch {
    int dim = 1;
    int64_t n = 0;
    std::vector<double> values;  // n * dim, row-major
    SimConfig config;
    std::string provenance;

    double value(int64_t i, int d = 0) const { return values[i * dim + d]; }
};

// Prepared per-triple increment machinery: Gaussian factor, per-ray jump
// tables, family fast paths. Immutable after construction, safe to share
// across sampling threads.
class IncrementSampler {
public:
    IncrementSampler(const LevyTriple& t, const SimConfig& cfg);

    // Draws one increment of length dt into out (accumulates), using the
    // stream keyed by (seed, stream, sample, term).
    void draw(double* out, double dt, uint64_t seed, uint32_t stream, uint64_t sample,
              uint32_t term) const;

    int dim() const { return dim_; }

private:
    struct JumpRay {
        Vec direction;
        std::vector<double> atom_cum;  // cumulative weights of atoms > eps
        std::vector<double> atom_r;
        double atom_mass = 0;
        std::shared_ptr<WeightedTailCache> tail;  // density mass above r
        double dens_mass = 0;                     // density mass above eps
        double eps = 0;
        double r_hi = 0;  // bisection bracket
    };
    double sample_radius(const JumpRay& ray, double u) const;

    int dim_ = 1;
    Vec drift_;           // a - int_{eps<r<=1} x dM
    Matrix gauss_sqrt_;   // sqrt of R (+ small-jump covariance when approximating)
    bool has_gauss_ = false;
    std::vector<JumpRay> rays_;
    double total_jump_rate_ = 0;
    // family fast paths
    bool gamma_path_ = false;
    double gamma_shape_ = 0, gamma_rate_ = 1;
    bool stable_path_ = false;
    double stable_alpha_ = 0, stable_unit_ = 0;  // X = (c dt |Gamma(-a)|)^{1/a} * kanter
};

// Increments of Y_nu: law nu^{*dt}, n = count samples.
SampleBatch sample_increment(const LevyTriple& triple, double dt, const SimConfig& cfg,
                             int64_t count);

// Tagged Riemann-Stieltjes sum sum_j h(tau_j)(Y(r(t_j)) - Y(r(t_{j-1}))) with
// midpoint tags; half-line specs are truncated by the same certificate as
// map_exponent.  Deterministic in (cfg.seed, sample, term).
SampleBatch sample_integral(const IntegralMapSpec& spec, const LevyTriple& triple,
                            const SimConfig& cfg);

// Z(t) = U-part + V-part from disjoint RNG streams (independent summands).
SampleBatch sample_maflp(const LevyTriple& nu, double alpha, double t, const SimConfig& cfg);

namespace serial {
SampleBatch sample_increment(const LevyTriple& triple, double dt, const SimConfig& cfg,
                             int64_t count);
SampleBatch sample_integral(const IntegralMapSpec& spec, const LevyTriple& triple,
                            const SimConfig& cfg);
SampleBatch sample_maflp(const LevyTriple& nu, double alpha, double t, const SimConfig& cfg);
}  // namespace serial

// Partition of (a,b] used by sample_integral: uniform over the first unit
// block, geometric (ratio 1.05) beyond. Exposed for the step-doubling tests.
std::vector<double> integral_partition(double a, double b, int n_steps);

}  // namespace levy
