#include "levy/triple.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// small symmetric eigen machinery (cyclic Jacobi)

std::vector<double> sym_eigenvalues(const Matrix& m) {
    const int n = m.dim();
    Matrix a = m;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30 * (1 + a.trace() * a.trace())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                Matrix b = a;
                for (int k = 0; k < n; ++k) {
                    b(p, k) = c * a(p, k) - s * a(q, k);
                    b(q, k) = s * a(p, k) + c * a(q, k);
                }
                Matrix b2 = b;
                for (int k = 0; k < n; ++k) {
                    b2(k, p) = c * b(k, p) - s * b(k, q);
                    b2(k, q) = s * b(k, p) + c * b(k, q);
                }
                a = b2;
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Matrix sym_sqrt(const Matrix& m) {
    const int n = m.dim();
    // Jacobi with accumulated rotations
    Matrix a = m, v(n);
    for (int i = 0; i < n; ++i) v(i, i) = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30 * (1 + a.trace() * a.trace())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    Matrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += v(i, k) * std::sqrt(std::max(a(k, k), 0.0)) * v(j, k);
            out(i, j) = s;
        }
    return out;
}

// ---------------------------------------------------------------------------

LevyTriple make_triple(Vec shift, Matrix covariance, RadialLevyMeasure measure) {
    const int dim = static_cast<int>(shift.size());
    if (dim < 1) throw dimension_error("triple needs dim >= 1");
    if (covariance.dim() == 0) covariance = Matrix(dim);
    if (covariance.dim() != dim) throw dimension_error("covariance dim mismatch");
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (std::abs(covariance(i, j) - covariance(j, i)) >
                1e-12 * (1 + std::abs(covariance(i, j))))
                throw domain_error("covariance must be symmetric");
    const auto ev = sym_eigenvalues(covariance);
    if (!ev.empty() && ev.front() < -1e-12 * std::max(covariance.trace(), 1.0))
        throw domain_error("covariance must be positive semidefinite");
    if (measure.dim == 0) measure.dim = dim;
    if (measure.dim != dim) throw dimension_error("measure dim mismatch");
    validate_measure(measure);
    return {dim, std::move(shift), std::move(covariance), std::move(measure), std::monostate{}};
}

// ---------------------------------------------------------------------------
// CharFn

CharFn::CharFn(int dim, std::function<complex(const Vec&)> eval, double tol)
    : dim_(dim), eval_(std::move(eval)), probes_(default_probe_grid(dim)), tol_(tol) {}

complex CharFn::operator()(double y) const {
    if (dim_ != 1) throw dimension_error("scalar evaluation needs dim 1");
    return eval_(Vec{y});
}

const std::vector<complex>& CharFn::grid_values() const {
    std::call_once(cache_->flag, [this] { cache_->vals = eval_grid(*this, probes_); });
    return cache_->vals;
}

std::vector<Vec> default_probe_grid(int dim) {
    std::vector<double> axis(64);
    for (int k = 0; k < 64; ++k) axis[k] = -5.0 + 10.0 * k / 63.0;
    std::vector<Vec> g;
    if (dim == 1) {
        for (double y : axis) g.push_back({y});
    } else if (dim == 2) {
        for (double y0 : axis)
            for (double y1 : axis) g.push_back({y0, y1});
    } else {
        throw dimension_error("probe grid supports dims 1 and 2");
    }
    return g;
}

CharFn exponent_of(const LevyTriple& t) {
    auto held = std::make_shared<const LevyTriple>(t);
    auto eval = [held](const Vec& y) -> complex {
        if (static_cast<int>(y.size()) != held->dim)
            throw dimension_error("probe dimension mismatch");
        complex phi{0, dot(y, held->shift)};
        phi -= 0.5 * held->covariance.quad_form(y);
        for (const auto& ray : held->levy_measure.rays)
            phi += ray_levy_integral(ray, dot(y, ray.direction));
        return phi;
    };
    CharFn f(t.dim, std::move(eval));
    f.set_source(held);
    return f;
}

// ---------------------------------------------------------------------------
// triple operations

LevyTriple convolve(const LevyTriple& t1, const LevyTriple& t2) {
    if (t1.dim != t2.dim) throw dimension_error("convolve: dim mismatch");
    LevyTriple out;
    out.dim = t1.dim;
    out.shift = plus(t1.shift, t2.shift);
    out.covariance = t1.covariance.plus(t2.covariance);
    out.levy_measure = merge_measures(t1.levy_measure, t2.levy_measure);
    return out;
}

LevyTriple conv_power(const LevyTriple& t, double c) {
    if (!(c > 0)) throw domain_error("convolution power must be > 0");
    LevyTriple out;
    out.dim = t.dim;
    out.shift = scaled(t.shift, c);
    out.covariance = t.covariance.scaled(c);
    out.levy_measure = t.levy_measure.is_zero() ? t.levy_measure
                                                : scale_weights(t.levy_measure, c);
    if (const auto* g = std::get_if<GammaHint>(&t.hint)) out.hint = GammaHint{g->shape * c, g->rate};
    if (const auto* s = std::get_if<StableHint>(&t.hint)) out.hint = StableHint{s->alpha, s->coef * c};
    return out;
}

LevyTriple dilate(const LevyTriple& t, double u) {
    if (u == 0.0) throw domain_error("dilation by zero");
    const double au = std::abs(u);
    LevyTriple out;
    out.dim = t.dim;
    out.covariance = t.covariance.scaled(u * u);
    out.levy_measure = dilate_measure(t.levy_measure, u);
    // shift: u a + int u x [1(|u|r<=1) - 1(r<=1)] M(dx)
    out.shift = scaled(t.shift, u);
    for (const auto& ray : t.levy_measure.rays) {
        double corr = 0;
        if (au < 1.0)
            corr = ray_power_moment(ray, 1.0, 1.0, 1.0 / au);
        else if (au > 1.0)
            corr = -ray_power_moment(ray, 1.0, 1.0 / au, 1.0);
        if (!std::isfinite(corr))
            throw integrability_error("dilation compensator correction diverged");
        for (int i = 0; i < t.dim; ++i) out.shift[i] += u * corr * ray.direction[i];
    }
    if (u > 0) {
        if (const auto* g = std::get_if<GammaHint>(&t.hint)) out.hint = GammaHint{g->shape, g->rate / u};
        if (const auto* s = std::get_if<StableHint>(&t.hint))
            out.hint = StableHint{s->alpha, s->coef * std::pow(u, s->alpha)};
    }
    return out;
}

double triple_log_moment(const LevyTriple& t) { return log_moment(t.levy_measure); }

double measure_osc_radius(const LevyTriple& t) {
    double r = 0;
    for (const auto& ray : t.levy_measure.rays) {
        for (const auto& a : ray.atoms) r = std::max(r, a.radius);
        if (ray.density) r = std::max(r, ray.density->breakpoints().back());
    }
    return r;
}

// ---------------------------------------------------------------------------
// families

LevyTriple gaussian_triple(Vec mean, Matrix cov) {
    RadialLevyMeasure m;
    m.dim = static_cast<int>(mean.size());
    return make_triple(std::move(mean), std::move(cov), std::move(m));
}

LevyTriple gaussian_triple(double mean, double variance) {
    Matrix c(1);
    c(0, 0) = variance;
    return gaussian_triple(Vec{mean}, std::move(c));
}

LevyTriple compound_poisson_triple(double rate,
                                   const std::vector<std::pair<Vec, double>>& atoms) {
    if (!(rate > 0) || atoms.empty()) throw domain_error("compound Poisson needs rate > 0, atoms");
    const int dim = static_cast<int>(atoms.front().first.size());
    double psum = 0;
    RadialLevyMeasure m;
    m.dim = dim;
    Vec shift(dim, 0.0);
    for (const auto& [x, p] : atoms) {
        if (static_cast<int>(x.size()) != dim) throw dimension_error("atom dim mismatch");
        if (!(p > 0)) throw domain_error("atom probability must be > 0");
        psum += p;
        const double r = norm2(x);
        if (!(r > 0)) throw domain_error("atom at the origin is not a jump");
        Vec dir = scaled(x, 1.0 / r);
        const double w = rate * p;
        bool merged = false;
        for (auto& ray : m.rays)
            if (dot(ray.direction, dir) >= 1.0 - 1e-12) {
                ray.atoms.push_back({r, w});
                merged = true;
                break;
            }
        if (!merged) m.rays.push_back({std::move(dir), {{r, w}}, nullptr});
        if (r <= 1.0)
            for (int i = 0; i < dim; ++i) shift[i] += w * x[i];
    }
    if (std::abs(psum - 1.0) > 1e-9) throw domain_error("atom probabilities must sum to 1");
    for (auto& ray : m.rays)
        std::sort(ray.atoms.begin(), ray.atoms.end(),
                  [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });
    return make_triple(std::move(shift), Matrix(dim), std::move(m));
}

LevyTriple gamma_triple(double shape, double rate) {
    if (!(shape > 0) || !(rate > 0)) throw domain_error("gamma needs shape, rate > 0");
    RadialLevyMeasure m;
    m.dim = 1;
    m.rays.push_back({{1.0}, {}, make_power_exp_density(shape, -1.0, rate)});
    // shift = int_0^1 r rho(r) dr so the law is exactly Gamma(shape, rate)
    const double a = shape * (1.0 - std::exp(-rate)) / rate;
    auto t = make_triple(Vec{a}, Matrix(1), std::move(m));
    t.hint = GammaHint{shape, rate};
    return t;
}

LevyTriple stable_triple(double alpha, double scale, double r_max) {
    if (!(alpha > 0) || alpha >= 1.0) throw domain_error("one-sided stable needs index in (0,1)");
    if (!(scale > 0)) throw domain_error("stable scale must be > 0");
    RadialLevyMeasure m;
    m.dim = 1;
    m.rays.push_back({{1.0}, {}, make_power_exp_density(scale, -1.0 - alpha, 0.0, 0.0, r_max)});
    const double rc = std::min(1.0, r_max);
    const double a = scale * std::pow(rc, 1.0 - alpha) / (1.0 - alpha);
    auto t = make_triple(Vec{a}, Matrix(1), std::move(m));
    if (r_max == kInf) t.hint = StableHint{alpha, scale};
    return t;
}

// ---------------------------------------------------------------------------
// grid evaluation

std::vector<complex> eval_grid(const CharFn& f, const std::vector<Vec>& probes) {
    std::vector<complex> out(probes.size());
    const int64_t n = static_cast<int64_t>(probes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int64_t i = 0; i < n; ++i) out[i] = f(probes[i]);
    return out;
}

namespace serial {
std::vector<complex> eval_grid(const CharFn& f, const std::vector<Vec>& probes) {
    std::vector<complex> out(probes.size());
    for (size_t i = 0; i < probes.size(); ++i) out[i] = f(probes[i]);
    return out;
}
}  // namespace serial

double sup_gap_on_grid(const CharFn& f, const CharFn& g, const std::vector<Vec>& probes) {
    const auto a = eval_grid(f, probes);
    const auto b = eval_grid(g, probes);
    double worst = 0;
    for (size_t i = 0; i < probes.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

CharFnCheck check_charfn(const CharFn& f) {
    CharFnCheck c;
    c.at_zero = std::abs(f(Vec(f.dim(), 0.0)));
    const auto& probes = f.probes();
    const auto vals = eval_grid(f, probes);
    for (size_t i = 0; i < probes.size(); ++i) {
        Vec neg = scaled(probes[i], -1.0);
        const complex vneg = f(neg);
        c.worst_hermitian = std::max(c.worst_hermitian, std::abs(vneg - std::conj(vals[i])));
        c.worst_real_part = std::max(c.worst_real_part, vals[i].real());
    }
    c.worst_real_part = std::max(c.worst_real_part, 0.0);
    return c;
}

MomentSummary moment_summary(const LevyTriple& t) {
    MomentSummary s;
    s.mean = t.shift;
    s.mean_finite = true;
    s.m2 = t.covariance.trace();
    for (const auto& ray : t.levy_measure.rays) {
        const double m1 = ray_power_moment(ray, 1.0, 1.0, kInf);
        if (!std::isfinite(m1)) {
            s.mean_finite = false;
            for (int i = 0; i < t.dim; ++i) s.mean[i] = kInf;
        } else if (s.mean_finite) {
            for (int i = 0; i < t.dim; ++i) s.mean[i] += m1 * ray.direction[i];
        }
        const double m2 = ray_power_moment(ray, 2.0, 0.0, kInf);
        s.m2 = std::isfinite(m2) ? s.m2 + m2 : kInf;
    }
    return s;
}

}  // namespace levy
