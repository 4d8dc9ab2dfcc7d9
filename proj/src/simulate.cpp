#include "levy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

enum Stream : uint32_t {
    kStreamIncrement = 0,
    kStreamIntegral = 1,
    kStreamV = 2,
    kStreamU = 3,
};
}  // namespace

// ---------------------------------------------------------------------------

IncrementSampler::IncrementSampler(const LevyTriple& t, const SimConfig& cfg) : dim_(t.dim) {
    if (!(cfg.jump_eps > 0)) throw domain_error("jump truncation eps must be > 0");

    if (const auto* g = std::get_if<GammaHint>(&t.hint)) {
        gamma_path_ = true;
        gamma_shape_ = g->shape;
        gamma_rate_ = g->rate;
        return;
    }
    if (const auto* s = std::get_if<StableHint>(&t.hint)) {
        stable_path_ = true;
        stable_alpha_ = s->alpha;
        stable_unit_ = s->coef * std::abs(std::tgamma(-s->alpha));
        return;
    }

    drift_ = t.shift;
    Matrix cov = t.covariance;
    const double eps = cfg.jump_eps;
    for (const auto& ray : t.levy_measure.rays) {
        if (ray.density) {
            const auto el = ray.density->lower();
            const bool infinite_activity = el.coef > 0 && el.power <= -1.0;
            const double floor = ray.density->resolution_floor();
            if (infinite_activity && floor > 0 && eps < floor)
                throw domain_error(
                    "resolution: jump cutoff eps lies below the radial grid support of an "
                    "infinite-activity density");
        }
        // compensator part between eps and 1
        const double c1 = ray_power_moment(ray, 1.0, eps, 1.0);
        for (int i = 0; i < dim_; ++i) drift_[i] -= c1 * ray.direction[i];
        // small-jump second moment
        if (cfg.small_jump == SmallJumpMode::gaussian_approx) {
            const double m2 = ray_power_moment(ray, 2.0, 0.0, eps);
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j)
                    cov(i, j) += m2 * ray.direction[i] * ray.direction[j];
        }

        JumpRay jr;
        jr.direction = ray.direction;
        jr.eps = eps;
        double cum = 0;
        for (const auto& a : ray.atoms) {
            if (a.radius <= eps) continue;  // folded into the small-jump part
            cum += a.weight;
            jr.atom_cum.push_back(cum);
            jr.atom_r.push_back(a.radius);
        }
        jr.atom_mass = cum;
        if (ray.density) {
            jr.tail = std::make_shared<WeightedTailCache>(ray.density, 0.0);
            jr.dens_mass = (*jr.tail)(eps);
            double hi = std::max(eps * 2, ray.density->breakpoints().back());
            while ((*jr.tail)(hi) > jr.dens_mass * 1e-18 && hi < 1e300) hi *= 2;
            jr.r_hi = hi;
        }
        if (jr.atom_mass + jr.dens_mass > 0) {
            total_jump_rate_ += jr.atom_mass + jr.dens_mass;
            rays_.push_back(std::move(jr));
        }
    }
    // atoms below eps: their mean enters the small-jump drift compensation
    // exactly through c1 above (ray_power_moment covers atoms and density).
    has_gauss_ = cov.trace() > 0;
    if (has_gauss_) gauss_sqrt_ = sym_sqrt(cov);
}

double IncrementSampler::sample_radius(const JumpRay& ray, double u) const {
    const double total = ray.atom_mass + ray.dens_mass;
    const double x = u * total;
    if (x <= ray.atom_mass && !ray.atom_r.empty()) {
        const auto it = std::lower_bound(ray.atom_cum.begin(), ray.atom_cum.end(), x);
        const size_t i = std::min(static_cast<size_t>(it - ray.atom_cum.begin()),
                                  ray.atom_r.size() - 1);
        return ray.atom_r[i];
    }
    // invert the density tail: W(r) = target, W decreasing
    const double target = std::max(total - x, ray.dens_mass * 1e-18);
    double lo = ray.eps, hi = ray.r_hi;
    for (int it = 0; it < 70; ++it) {
        const double mid = std::sqrt(lo * hi);
        if ((*ray.tail)(mid) > target)
            lo = mid;
        else
            hi = mid;
        if (hi / lo < 1 + 1e-14) break;
    }
    return std::sqrt(lo * hi);
}

void IncrementSampler::draw(double* out, double dt, uint64_t seed, uint32_t stream,
                            uint64_t sample, uint32_t term) const {
    CounterRng rng(seed, stream, sample, term);
    if (gamma_path_) {
        out[0] += rng.gamma(gamma_shape_ * dt) / gamma_rate_;
        return;
    }
    if (stable_path_) {
        out[0] += std::pow(dt * stable_unit_, 1.0 / stable_alpha_) *
                  rng.positive_stable(stable_alpha_);
        return;
    }
    for (int i = 0; i < dim_; ++i) out[i] += drift_[i] * dt;
    if (has_gauss_) {
        const double sdt = std::sqrt(dt);
        for (int i = 0; i < dim_; ++i) {
            const double z = rng.normal();
            for (int j = 0; j < dim_; ++j) out[j] += sdt * gauss_sqrt_(j, i) * z;
        }
    }
    for (const auto& ray : rays_) {
        const int64_t k = rng.poisson((ray.atom_mass + ray.dens_mass) * dt);
        for (int64_t j = 0; j < k; ++j) {
            const double r = sample_radius(ray, rng.uniform_oo());
            for (int i = 0; i < dim_; ++i) out[i] += r * ray.direction[i];
        }
    }
}

// ---------------------------------------------------------------------------

namespace {

void check_finite(const SampleBatch& b) {
    for (double v : b.values)
        if (!std::isfinite(v))
            throw consistency_error("sample batch contains non-finite values");
}

SampleBatch run_increment(const LevyTriple& triple, double dt, const SimConfig& cfg,
                          int64_t count, bool parallel) {
    if (!(dt > 0)) throw domain_error("increment length must be > 0");
    if (count <= 0) throw domain_error("sample count must be > 0");
    IncrementSampler s(triple, cfg);
    SampleBatch batch;
    batch.dim = triple.dim;
    batch.n = count;
    batch.values.assign(count * triple.dim, 0.0);
    batch.config = cfg;
    {
        std::ostringstream os;
        os << "increment dt=" << dt << " dim=" << triple.dim;
        batch.provenance = os.str();
    }
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int64_t i = 0; i < count; ++i)
            s.draw(&batch.values[i * triple.dim], dt, cfg.seed, kStreamIncrement, i, 0);
    } else {
        for (int64_t i = 0; i < count; ++i)
            s.draw(&batch.values[i * triple.dim], dt, cfg.seed, kStreamIncrement, i, 0);
    }
    check_finite(batch);
    return batch;
}

struct IntegralPlan {
    std::vector<double> coef;  // h at the midpoint tag, signed per monotone piece
    std::vector<double> dt;    // |r(t_j) - r(t_{j-1})|
};

IntegralPlan build_plan(const IntegralMapSpec& spec, const LevyTriple& triple,
                        const SimConfig& cfg) {
    spec.validate();
    double b = spec.interval.b;
    if (spec.interval.half_line()) {
        if (cfg.b_max > 0) {
            b = cfg.b_max;
        } else if (spec.kernel.type == KernelSpec::Type::maflp_u) {
            b = maflp_tail_cut(triple, spec.kernel.alpha, spec.kernel.t0, cfg.tail_var_tol);
        } else if (spec.kernel.type == KernelSpec::Type::exponential) {
            const auto ms = moment_summary(triple);
            if (!std::isfinite(ms.m2))
                throw divergence_error("exp-kernel truncation needs a finite second moment");
            const double mean_sq = ms.mean_finite ? dot(ms.mean, ms.mean) : kInf;
            if (!std::isfinite(mean_sq))
                throw divergence_error("exp-kernel truncation needs a finite mean");
            // Var tail <= m2 e^{-2V}/2; mean tail <= |mean| e^{-V}
            double V = 1.0;
            while (ms.m2 * std::exp(-2 * V) / 2 + std::sqrt(mean_sq) * std::exp(-V) >
                       cfg.tail_var_tol &&
                   V < 800)
                V += 1.0;
            b = V;
        } else {
            throw divergence_error("no truncation certificate for this half-line kernel");
        }
    }
    const auto pts = integral_partition(spec.interval.a, b, cfg.n_time_steps);
    IntegralPlan plan;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double tau = 0.5 * (pts[i] + pts[i + 1]);
        const double dr = spec.time_change.at(pts[i + 1]) - spec.time_change.at(pts[i]);
        if (dr == 0) continue;
        plan.coef.push_back(dr > 0 ? spec.kernel(tau) : -spec.kernel(tau));
        plan.dt.push_back(std::abs(dr));
    }
    return plan;
}

SampleBatch run_integral(const IntegralMapSpec& spec, const LevyTriple& triple,
                         const SimConfig& cfg, uint32_t stream, bool parallel) {
    const IntegralPlan plan = build_plan(spec, triple, cfg);
    IncrementSampler s(triple, cfg);
    SampleBatch batch;
    batch.dim = triple.dim;
    batch.n = cfg.n_samples;
    batch.values.assign(batch.n * batch.dim, 0.0);
    batch.config = cfg;
    {
        std::ostringstream os;
        os << "integral terms=" << plan.coef.size() << " stream=" << stream;
        batch.provenance = os.str();
    }
    const int dim = batch.dim;
    auto one_sample = [&](int64_t i) {
        std::vector<double> term(dim);
        double* row = &batch.values[i * dim];
        for (size_t j = 0; j < plan.coef.size(); ++j) {
            std::fill(term.begin(), term.end(), 0.0);
            s.draw(term.data(), plan.dt[j], cfg.seed, stream, i, static_cast<uint32_t>(j));
            for (int d = 0; d < dim; ++d) row[d] += plan.coef[j] * term[d];
        }
    };
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int64_t i = 0; i < batch.n; ++i) one_sample(i);
    } else {
        for (int64_t i = 0; i < batch.n; ++i) one_sample(i);
    }
    check_finite(batch);
    return batch;
}

SampleBatch run_maflp(const LevyTriple& nu, double alpha, double t, const SimConfig& cfg,
                      bool parallel) {
    if (!(alpha > 0) || !(alpha < 0.5)) throw domain_error("alpha must lie in (0, 1/2)");
    if (!(t > 0)) throw domain_error("t must be positive");
    IntegralMapSpec v_spec;
    v_spec.kernel = {KernelSpec::Type::power, alpha, 1.0, 1.0};
    v_spec.time_change.type = TimeChangeSpec::Type::identity;
    v_spec.interval = {0.0, t};

    IntegralMapSpec u_spec;
    u_spec.kernel = {KernelSpec::Type::maflp_u, alpha, t, 1.0};
    u_spec.time_change.type = TimeChangeSpec::Type::identity;
    u_spec.interval = {0.0, kInf};

    SampleBatch v = run_integral(v_spec, nu, cfg, kStreamV, parallel);
    SampleBatch u = run_integral(u_spec, nu, cfg, kStreamU, parallel);
    for (size_t i = 0; i < v.values.size(); ++i) v.values[i] += u.values[i];
    std::ostringstream os;
    os << "maflp alpha=" << alpha << " t=" << t;
    v.provenance = os.str();
    return v;
}

}  // namespace

std::vector<double> integral_partition(double a, double b, int n_steps) {
    if (n_steps < 2) throw domain_error("n_time_steps must be >= 2");
    std::vector<double> pts;
    const double u_end = std::min(b, a + 1.0);
    for (int i = 0; i <= n_steps; ++i) pts.push_back(a + (u_end - a) * i / n_steps);
    if (b > u_end) {
        const double q = 1.0 + 12.8 / n_steps;
        double x = u_end;
        while (x < b) {
            x = std::min(b, x * q);
            pts.push_back(x);
        }
    }
    return pts;
}

SampleBatch sample_increment(const LevyTriple& triple, double dt, const SimConfig& cfg,
                             int64_t count) {
    return run_increment(triple, dt, cfg, count, true);
}
SampleBatch sample_integral(const IntegralMapSpec& spec, const LevyTriple& triple,
                            const SimConfig& cfg) {
    return run_integral(spec, triple, cfg, kStreamIntegral, true);
}
SampleBatch sample_maflp(const LevyTriple& nu, double alpha, double t, const SimConfig& cfg) {
    return run_maflp(nu, alpha, t, cfg, true);
}

namespace serial {
SampleBatch sample_increment(const LevyTriple& triple, double dt, const SimConfig& cfg,
                             int64_t count) {
    return run_increment(triple, dt, cfg, count, false);
}
SampleBatch sample_integral(const IntegralMapSpec& spec, const LevyTriple& triple,
                            const SimConfig& cfg) {
    return run_integral(spec, triple, cfg, kStreamIntegral, false);
}
SampleBatch sample_maflp(const LevyTriple& nu, double alpha, double t, const SimConfig& cfg) {
    return run_maflp(nu, alpha, t, cfg, false);
}
}  // namespace serial

}  // namespace levy
