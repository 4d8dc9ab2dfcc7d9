#include "levy/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAccelSmax = 12.0;  // probe grids live well inside this

// (b^{m+1} - a^{m+1})/(m+1), stable near m = -1.
double power_integral(double a, double b, double m) {
    if (b <= a) return 0.0;
    const double mp1 = m + 1.0;
    if (std::abs(mp1) < 1e-8) return std::log(b / a) * std::pow(a, mp1);
    return (std::pow(b, mp1) - std::pow(a, mp1)) / mp1;
}

// Bound for int_R^inf coef r^{power+q} e^{-decay r} dr. Exact value when
// decay == 0 and the envelope is exact. +inf when divergent/uncertifiable.
double env_tail_above(const TailEnvelope& e, double R, double q) {
    if (e.coef == 0.0) return 0.0;
    const double m = e.power + q;
    if (e.decay > 0.0) {
        if (e.decay * R < 2.0 * std::abs(m) + 2.0) return kInf;  // bound not valid yet
        return 2.0 * e.coef * std::pow(R, m) * std::exp(-e.decay * R) / e.decay;
    }
    if (m >= -1.0) return kInf;
    return e.coef * std::pow(R, m + 1.0) / (-m - 1.0);
}

// Bound for int_0^x coef r^{power+q} e^{-decay r} dr (exp factor dropped).
double env_mass_below(const TailEnvelope& e, double x, double q) {
    if (e.coef == 0.0) return 0.0;
    const double m = e.power + q;
    if (m <= -1.0) return kInf;
    return e.coef * std::pow(x, m + 1.0) / (m + 1.0);
}

std::vector<double> log_grid(double lo, double hi, int per_decade,
                             const std::vector<double>& extra) {
    std::vector<double> g;
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    int n = std::max(2, static_cast<int>(std::ceil((l1 - l0) * per_decade)) + 1);
    n = std::min(n, 60000);
    for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (n - 1)));
    for (double x : extra)
        if (x > lo && x < hi) g.push_back(x);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-14 * b; }),
            g.end());
    g.front() = lo;
    g.back() = hi;
    return g;
}

// ===========================================================================
// Density implementations

class PowerExpDensity final : public RadialDensityImpl {
public:
    PowerExpDensity(double c, double p, double lam, double lo, double hi)
        : c_(c), p_(p), lam_(lam), lo_(lo), hi_(hi) {
        if (c < 0 || lam < 0) throw domain_error("power-exp density needs coef, decay >= 0");
        if (lo_ <= 0 && p_ <= -3.0 && c_ > 0)
            throw integrability_error("radial density diverges at 0: power " + std::to_string(p_));
        if (hi_ == kInf && lam_ == 0.0 && p_ >= -1.0 && c_ > 0)
            throw integrability_error("radial tail not integrable: power " + std::to_string(p_));
        if (lo_ > 0) bp_.push_back(lo_);
        if (hi_ < kInf) bp_.push_back(hi_);
        if (bp_.empty()) bp_.push_back(1.0);
    }

    double eval(double r) const override {
        if (r <= lo_ || r > hi_ || r <= 0) return 0.0;
        return c_ * std::pow(r, p_) * std::exp(-lam_ * r);
    }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override { return hi_; }
    TailEnvelope lower() const override {
        if (lo_ > 0) return {0, 0, 0, true};
        return {c_, p_, lam_, true};
    }
    TailEnvelope upper() const override {
        if (hi_ < kInf) return {0, 0, 0, true};
        return {c_, p_, lam_, true};
    }

private:
    double c_, p_, lam_, lo_, hi_;
    std::vector<double> bp_;
};

class GridDensity final : public RadialDensityImpl {
public:
    GridDensity(std::vector<double> grid, std::vector<double> vals, double tail_lo, double tail_hi)
        : x_(std::move(grid)), v_(std::move(vals)) {
        if (x_.size() < 2 || x_.size() != v_.size())
            throw domain_error("grid density needs matching grid/values, >= 2 nodes");
        for (size_t i = 0; i < x_.size(); ++i) {
            if (x_[i] <= 0 || (i && x_[i] <= x_[i - 1]))
                throw domain_error("grid radii must be positive and increasing");
            if (v_[i] < 0) throw domain_error("density values must be >= 0");
        }
        lower_ = {v_.front() > 0 ? v_.front() * std::pow(x_.front(), -tail_lo) : 0.0, tail_lo, 0.0,
                  true};
        upper_ = {v_.back() > 0 ? v_.back() * std::pow(x_.back(), -tail_hi) : 0.0, tail_hi, 0.0,
                  true};
        if (lower_.coef > 0 && tail_lo <= -3.0)
            throw integrability_error("declared lower tail exponent not integrable against r^2");
        if (upper_.coef > 0 && tail_hi >= -1.0)
            throw integrability_error("declared upper tail exponent fails mass certificate");
    }

    double eval(double r) const override {
        if (r <= 0) return 0.0;
        if (r < x_.front()) return lower_.coef * std::pow(r, lower_.power);
        if (r > x_.back()) return upper_.coef * std::pow(r, upper_.power);
        const auto it = std::upper_bound(x_.begin(), x_.end(), r);
        size_t i = it == x_.begin() ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
        if (i >= x_.size() - 1) i = x_.size() - 2;
        const double v0 = v_[i], v1 = v_[i + 1];
        if (v0 <= 0 || v1 <= 0) {  // linear through zero endpoints
            const double t = (r - x_[i]) / (x_[i + 1] - x_[i]);
            return v0 + t * (v1 - v0);
        }
        const double b = std::log(v1 / v0) / std::log(x_[i + 1] / x_[i]);
        return v0 * std::pow(r / x_[i], b);
    }
    const std::vector<double>& breakpoints() const override { return x_; }
    double support_hi() const override { return upper_.coef > 0 ? kInf : x_.back(); }
    TailEnvelope lower() const override { return lower_; }
    TailEnvelope upper() const override { return upper_; }
    double resolution_floor() const override { return x_.front(); }

private:
    std::vector<double> x_, v_;
    TailEnvelope lower_, upper_;
};

class WeightedDensity final : public RadialDensityImpl {
public:
    WeightedDensity(double c, DensityPtr base) : c_(c), base_(std::move(base)) {
        if (!(c_ > 0)) throw domain_error("density weight must be positive");
    }
    double eval(double r) const override { return c_ * base_->eval(r); }
    const std::vector<double>& breakpoints() const override { return base_->breakpoints(); }
    double support_hi() const override { return base_->support_hi(); }
    TailEnvelope lower() const override { return scaled(base_->lower()); }
    TailEnvelope upper() const override { return scaled(base_->upper()); }
    double weight() const { return c_; }
    const DensityPtr& base() const { return base_; }

private:
    TailEnvelope scaled(TailEnvelope e) const {
        e.coef *= c_;
        return e;
    }
    double c_;
    DensityPtr base_;
};

class SumDensity final : public RadialDensityImpl {
public:
    explicit SumDensity(std::vector<DensityPtr> parts) : parts_(std::move(parts)) {
        for (const auto& p : parts_) {
            const auto& b = p->breakpoints();
            bp_.insert(bp_.end(), b.begin(), b.end());
        }
        std::sort(bp_.begin(), bp_.end());
        bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
    }
    double eval(double r) const override {
        double s = 0;
        for (const auto& p : parts_) s += p->eval(r);
        return s;
    }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override {
        double h = 0;
        for (const auto& p : parts_) h = std::max(h, p->support_hi());
        return h;
    }
    TailEnvelope lower() const override {
        const double r0 = bp_.front();
        double pmin = kInf;
        for (const auto& p : parts_)
            if (p->lower().coef > 0) pmin = std::min(pmin, p->lower().power);
        if (pmin == kInf) return {0, 0, 0, true};
        double coef = 0;
        for (const auto& p : parts_) {
            const auto e = p->lower();
            if (e.coef > 0) coef += e.coef * std::pow(r0, e.power - pmin);
        }
        return {coef, pmin, 0, false};
    }
    TailEnvelope upper() const override {
        const double r1 = bp_.back();
        double lam = kInf, pmax = -kInf;
        bool any = false, all_exp = true;
        for (const auto& p : parts_) {
            const auto e = p->upper();
            if (e.coef <= 0) continue;
            any = true;
            pmax = std::max(pmax, e.power);
            if (e.decay > 0)
                lam = std::min(lam, e.decay);
            else
                all_exp = false;
        }
        if (!any) return {0, 0, 0, true};
        double coef = 0;
        for (const auto& p : parts_) {
            auto e = p->upper();
            if (e.coef <= 0) continue;
            double c = e.coef * std::pow(r1, e.power - pmax);
            if (!all_exp && e.decay > 0) c *= std::exp(-e.decay * r1);  // e^{-lam r} <= e^{-lam r1}
            coef += c;
        }
        return {coef, pmax, all_exp ? lam : 0.0, false};
    }
    const std::vector<DensityPtr>* summands() const override { return &parts_; }

private:
    std::vector<DensityPtr> parts_;
    std::vector<double> bp_;
};

class DilatedDensity final : public RadialDensityImpl {
public:
    DilatedDensity(DensityPtr base, double u) : base_(std::move(base)), u_(u) {
        for (double b : base_->breakpoints()) bp_.push_back(b * u_);
    }
    double eval(double r) const override { return base_->eval(r / u_) / u_; }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override { return base_->support_hi() * u_; }
    TailEnvelope lower() const override { return xform(base_->lower()); }
    TailEnvelope upper() const override { return xform(base_->upper()); }

private:
    TailEnvelope xform(TailEnvelope e) const {
        e.coef *= std::pow(u_, -e.power - 1.0);
        e.decay /= u_;
        return e;
    }
    DensityPtr base_;
    double u_;
    std::vector<double> bp_;
};

// Shared bounding step for the transformed-density lower envelopes: bounds
// head(r) <= head(r0) + ce * int_r^{r0} u^{pe+q} du as a sum of two power
// terms, then folds them into a single envelope with exponent >= pmin.
TailEnvelope fold_lower_envelope(double head_r0, double head_power, const TailEnvelope& parent,
                                 double q, double r0) {
    struct Term {
        double coef, power;
    };
    std::vector<Term> terms;
    if (head_r0 > 0) terms.push_back({head_r0, head_power});
    if (parent.coef > 0) {
        const double m = parent.power + q;
        if (m + 1.0 < -0.02) {
            terms.push_back({parent.coef / (-m - 1.0), parent.power + q + 1.0 + head_power});
        } else if (m + 1.0 <= 0.02) {
            // u^m <= u^{m-0.1} r0^{0.1} dodges the logarithmic case
            terms.push_back(
                {parent.coef * std::pow(r0, 0.1) / (0.1 - (m + 1.0)), parent.power + q + 0.9 + head_power});
        } else {
            terms.push_back({parent.coef * std::pow(r0, m + 1.0) / (m + 1.0), head_power});
        }
    }
    if (terms.empty()) return {0, 0, 0, true};
    double pmin = kInf;
    for (auto& t : terms) pmin = std::min(pmin, t.power);
    double coef = 0;
    for (auto& t : terms) coef += t.coef * std::pow(r0, t.power - pmin);
    return {coef, pmin, 0, false};
}

class JBetaDensity final : public RadialDensityImpl {
public:
    JBetaDensity(DensityPtr base, std::vector<RadialAtom> atoms, double beta);

    double eval(double r) const override {
        if (r <= 0 || r > shi_) return 0.0;
        double g = base_ ? (*cache_)(r) : 0.0;
        for (const auto& a : atoms_)
            if (a.radius > r) g += a.weight * std::pow(a.radius, -beta_);
        return beta_ * std::pow(r, beta_ - 1.0) * g;
    }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override { return shi_; }
    TailEnvelope lower() const override { return lower_; }
    TailEnvelope upper() const override { return upper_; }

private:
    DensityPtr base_;
    std::vector<RadialAtom> atoms_;
    double beta_;
    std::shared_ptr<WeightedTailCache> cache_;
    std::vector<double> bp_;
    double shi_ = kInf;
    TailEnvelope lower_, upper_;
};

class ITransformDensity final : public RadialDensityImpl {
public:
    ITransformDensity(DensityPtr base, std::vector<RadialAtom> atoms);

    double eval(double r) const override {
        if (r <= 0 || r > shi_) return 0.0;
        double w = base_ ? (*cache_)(r) : 0.0;
        for (const auto& a : atoms_)
            if (a.radius >= r) w += a.weight;
        return w / r;
    }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override { return shi_; }
    TailEnvelope lower() const override { return lower_; }
    TailEnvelope upper() const override { return upper_; }

private:
    DensityPtr base_;
    std::vector<RadialAtom> atoms_;
    std::shared_ptr<WeightedTailCache> cache_;
    std::vector<double> bp_;
    double shi_ = kInf;
    TailEnvelope lower_, upper_;
};

class DifferenceDensity final : public RadialDensityImpl {
public:
    DifferenceDensity(DensityPtr a, DensityPtr b) : a_(std::move(a)), b_(std::move(b)) {
        bp_ = a_->breakpoints();
        const auto& bb = b_->breakpoints();
        bp_.insert(bp_.end(), bb.begin(), bb.end());
        std::sort(bp_.begin(), bp_.end());
        bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
    }
    double eval(double r) const override { return std::max(a_->eval(r) - b_->eval(r), 0.0); }
    const std::vector<double>& breakpoints() const override { return bp_; }
    double support_hi() const override { return a_->support_hi(); }
    TailEnvelope lower() const override {
        auto e = a_->lower();
        e.exact = false;
        return e;
    }
    TailEnvelope upper() const override {
        auto e = a_->upper();
        e.exact = false;
        return e;
    }

private:
    DensityPtr a_, b_;
    std::vector<double> bp_;
};

}  // namespace

// ===========================================================================
// Factories

DensityPtr make_power_exp_density(double coef, double power, double decay, double lo, double hi) {
    return std::make_shared<PowerExpDensity>(coef, power, decay, lo, hi);
}

DensityPtr make_grid_density(std::vector<double> grid, std::vector<double> values, double tail_lo,
                             double tail_hi) {
    return std::make_shared<GridDensity>(std::move(grid), std::move(values), tail_lo, tail_hi);
}

DensityPtr make_sum(std::vector<DensityPtr> parts) {
    std::vector<DensityPtr> flat;
    for (auto& p : parts) {
        if (!p) continue;
        if (const auto* s = p->summands())
            flat.insert(flat.end(), s->begin(), s->end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty()) return nullptr;
    if (flat.size() == 1) return flat.front();
    return std::make_shared<SumDensity>(std::move(flat));
}

DensityPtr make_weighted(double c, DensityPtr base) {
    if (!base) return nullptr;
    if (c == 1.0) return base;
    if (const auto* s = base->summands()) {
        std::vector<DensityPtr> parts;
        for (const auto& p : *s) parts.push_back(make_weighted(c, p));
        return make_sum(std::move(parts));
    }
    if (const auto* w = dynamic_cast<const WeightedDensity*>(base.get()))
        return std::make_shared<WeightedDensity>(c * w->weight(), w->base());
    return std::make_shared<WeightedDensity>(c, std::move(base));
}

DensityPtr make_dilated(DensityPtr base, double scale) {
    if (!base) return nullptr;
    if (!(scale > 0)) throw domain_error("dilation scale must be positive here");
    if (scale == 1.0) return base;
    if (const auto* s = base->summands()) {
        std::vector<DensityPtr> parts;
        for (const auto& p : *s) parts.push_back(make_dilated(p, scale));
        return make_sum(std::move(parts));
    }
    return std::make_shared<DilatedDensity>(std::move(base), scale);
}

DensityPtr make_jbeta_density(DensityPtr base, std::vector<RadialAtom> atoms, double beta) {
    if (!base && atoms.empty()) return nullptr;
    if (base && !atoms.empty()) {
        // split: transform of the measure is additive
        return make_sum({make_jbeta_density(base, {}, beta), make_jbeta_density(nullptr, atoms, beta)});
    }
    if (base) {
        if (const auto* s = base->summands()) {
            std::vector<DensityPtr> parts;
            for (const auto& p : *s) parts.push_back(make_jbeta_density(p, {}, beta));
            return make_sum(std::move(parts));
        }
    }
    return std::make_shared<JBetaDensity>(std::move(base), std::move(atoms), beta);
}

DensityPtr make_itransform_density(DensityPtr base, std::vector<RadialAtom> atoms) {
    if (!base && atoms.empty()) return nullptr;
    if (base && !atoms.empty())
        return make_sum({make_itransform_density(base, {}), make_itransform_density(nullptr, atoms)});
    if (base) {
        if (const auto* s = base->summands()) {
            std::vector<DensityPtr> parts;
            for (const auto& p : *s) parts.push_back(make_itransform_density(p, {}));
            return make_sum(std::move(parts));
        }
    }
    return std::make_shared<ITransformDensity>(std::move(base), std::move(atoms));
}

DensityPtr make_difference_density(DensityPtr a, DensityPtr b) {
    if (!b) return a;
    if (!a) throw domain_error("difference density needs a minuend");
    return std::make_shared<DifferenceDensity>(std::move(a), std::move(b));
}

// ===========================================================================
// Transformed-density constructors (need WeightedTailCache defined)

JBetaDensity::JBetaDensity(DensityPtr base, std::vector<RadialAtom> atoms, double beta)
    : base_(std::move(base)), atoms_(std::move(atoms)), beta_(beta) {
    if (!(beta_ > 0)) throw domain_error("beta must be positive");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });
    double shi_base = 0;
    TailEnvelope pl{0, 0, 0, true}, pu{0, 0, 0, true};
    if (base_) {
        shi_base = base_->support_hi();
        bp_ = base_->breakpoints();
        pl = base_->lower();
        pu = base_->upper();
        cache_ = std::make_shared<WeightedTailCache>(base_, -beta_);
    }
    for (const auto& a : atoms_) {
        bp_.push_back(a.radius);
        shi_base = std::max(shi_base, a.radius);
    }
    shi_ = shi_base;

    // upper envelope
    if (shi_ < kInf) {
        upper_ = {0, 0, 0, true};
    } else if (pu.decay > 0) {
        const double r_env = std::max(bp_.empty() ? 1.0 : bp_.back(),
                                      (2.0 * std::abs(pu.power - beta_) + 4.0) / pu.decay);
        bp_.push_back(r_env);
        upper_ = {2.0 * beta_ * pu.coef / pu.decay, pu.power - 1.0, pu.decay, false};
    } else {
        // exact power parent tail: out is exactly beta c/(beta-1-p) r^p there
        upper_ = {beta_ * pu.coef / (beta_ - 1.0 - pu.power), pu.power, 0.0, pu.exact};
    }
    std::sort(bp_.begin(), bp_.end());
    bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
    if (bp_.empty()) bp_.push_back(1.0);

    // lower envelope: head = beta r^{beta-1} G(r0); G below r0 bounded via parent env
    const double r0 = bp_.front();
    double g0 = base_ ? (*cache_)(r0 * (1 - 1e-12)) : 0.0;
    for (const auto& a : atoms_)
        if (a.radius >= r0) g0 += a.weight * std::pow(a.radius, -beta_);
    TailEnvelope pl_scaled = pl;
    pl_scaled.coef *= beta_;  // the beta r^{beta-1} prefactor
    lower_ = fold_lower_envelope(beta_ * g0, beta_ - 1.0, pl_scaled, -beta_, r0);
}

ITransformDensity::ITransformDensity(DensityPtr base, std::vector<RadialAtom> atoms)
    : base_(std::move(base)), atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end(),
              [](const RadialAtom& a, const RadialAtom& b) { return a.radius < b.radius; });
    double shi_base = 0;
    TailEnvelope pl{0, 0, 0, true}, pu{0, 0, 0, true};
    if (base_) {
        shi_base = base_->support_hi();
        bp_ = base_->breakpoints();
        pl = base_->lower();
        pu = base_->upper();
        cache_ = std::make_shared<WeightedTailCache>(base_, 0.0);
    }
    for (const auto& a : atoms_) {
        bp_.push_back(a.radius);
        shi_base = std::max(shi_base, a.radius);
    }
    shi_ = shi_base;

    if (shi_ < kInf) {
        upper_ = {0, 0, 0, true};
    } else if (pu.decay > 0) {
        const double r_env = std::max(bp_.empty() ? 1.0 : bp_.back(),
                                      (2.0 * std::abs(pu.power) + 4.0) / pu.decay);
        bp_.push_back(r_env);
        upper_ = {2.0 * pu.coef / pu.decay, pu.power - 1.0, pu.decay, false};
    } else {
        upper_ = {pu.coef / (-pu.power - 1.0), pu.power, 0.0, pu.exact};
    }
    std::sort(bp_.begin(), bp_.end());
    bp_.erase(std::unique(bp_.begin(), bp_.end()), bp_.end());
    if (bp_.empty()) bp_.push_back(1.0);

    const double r0 = bp_.front();
    double w0 = base_ ? (*cache_)(r0 * (1 - 1e-12)) : 0.0;
    for (const auto& a : atoms_)
        if (a.radius >= r0) w0 += a.weight;
    lower_ = fold_lower_envelope(w0, -1.0, pl, 0.0, r0);
}

// ===========================================================================
// Integrals

namespace {

complex levy_integral_direct(const RadialDensityImpl& rho, double s_in, double tol) {
    const double s = std::abs(s_in);
    const auto& bp = rho.breakpoints();
    const double lo = bp.front();
    const double shi = rho.support_hi();
    double err_extra = 0.0;

    // region boundaries: closure on (0, x_cut], numeric on [x_cut, T], tail beyond T
    const double T = std::min(std::max(bp.back(), 1.0), shi);

    double x_cut = std::min(lo, 1.0);
    const auto el = rho.lower();
    if (el.coef > 0) {
        // |e^{isr}-1-isr| <= s^2 r^2 / 2 for the compensated region r <= 1
        const double m3 = el.power + 3.0;
        double want = std::pow(tol / 4.0 * 2.0 * m3 / (s * s * el.coef), 1.0 / m3);
        x_cut = std::min(x_cut, want);
        err_extra += s * s / 2.0 * env_mass_below(el, x_cut, 2.0);
    } else {
        x_cut = std::min(lo, 1.0);
    }

    complex total{0, 0};
    auto f = [&rho, s](double r) {
        const complex osc = std::exp(complex{0, s * r}) - 1.0 -
                            (r <= 1.0 ? complex{0, s * r} : complex{0, 0});
        return osc * rho.eval(r);
    };

    if (T > x_cut) {
        QuadOptions o;
        o.abs_tol = tol / 2.0;
        o.rel_tol = 1e-10;
        o.osc_rate = s;
        o.breakpoints = bp;
        o.breakpoints.push_back(1.0);
        // seed geometric panels toward the lower closure point
        for (double g = std::min(lo, 1.0); g > x_cut * 4.0; g /= 4.0) o.breakpoints.push_back(g);
        total += integrate(f, x_cut, T, o).value;
    }

    // upper tail beyond T
    if (shi > T) {
        const auto eu = rho.upper();
        if (eu.coef > 0) {
            if (eu.decay > 0) {
                double R = std::max(T, (2.0 * std::abs(eu.power) + 2.0) / eu.decay);
                while (2.0 * env_tail_above(eu, R, 0.0) > tol / 8.0) R *= 1.5;
                if (R > T) {
                    QuadOptions o;
                    o.abs_tol = tol / 4.0;
                    o.rel_tol = 1e-10;
                    o.osc_rate = s;
                    total += integrate(f, T, R, o).value;
                }
                err_extra += 2.0 * env_tail_above(eu, R, 0.0);
            } else if (eu.exact) {
                // int_T^inf (e^{isr}-1) c r^p dr. The scaled oscillatory form
                // cancels catastrophically when s*T << 1, so push numerics out
                // to r ~ 1/s first (the integrand is tame there: |e^{isr}-1| <= sr).
                const double p = eu.power, c = eu.coef;
                const double R1 = std::max(T, 1.0 / s);
                if (R1 > T) {
                    QuadOptions o;
                    o.abs_tol = tol / 8.0;
                    o.rel_tol = 1e-13;
                    o.osc_rate = s;
                    for (double g = T * 4.0; g < R1; g *= 4.0) o.breakpoints.push_back(g);
                    total += integrate(f, T, R1, o).value;
                }
                const complex osc = std::pow(s, -p - 1.0) * osc_power_tail(s * R1, p);
                total += c * (osc - std::pow(R1, p + 1.0) / (-p - 1.0));
            } else {
                // heavy tail without an exact form: push numerics to the bound point
                const double p = eu.power, c = eu.coef;
                double R = std::pow(8.0 * c / ((-p - 1.0) * tol), 1.0 / (-p - 1.0));
                R = std::max(R, T);
                if (R * s > 3e5)
                    throw quadrature_error(
                        "oscillatory tail of a non-exact power envelope is out of reach");
                QuadOptions o;
                o.abs_tol = tol / 4.0;
                o.osc_rate = s;
                total += integrate(f, T, R, o).value;
                err_extra += 2.0 * env_tail_above(eu, R, 0.0);
            }
        }
    }

    (void)err_extra;  // bounded < tol by construction
    return s_in >= 0 ? total : std::conj(total);
}

bool accel_eligible(const RadialDensityImpl& rho) {
    return rho.upper().decay > 0 || rho.support_hi() < kInf || rho.upper().coef == 0;
}

}  // namespace

complex levy_integral(const RadialDensityImpl& rho, double s, double tol) {
    if (const auto* parts = rho.summands()) {
        complex t{0, 0};
        for (const auto& p : *parts) t += levy_integral(*p, s, tol / parts->size());
        return t;
    }
    if (s == 0.0) return {0, 0};
    if (std::abs(s) <= kAccelSmax && accel_eligible(rho)) {
        std::call_once(rho.accel_once, [&rho] {
            // cache-backed composite densities carry ~1e-9 relative noise, so
            // the coefficient tail cannot be pushed below ~3e-10 of the peak
            rho.accel = ChebInterp::build(
                [&rho](double x) { return levy_integral_direct(rho, x, 1e-9); }, 0.0, kAccelSmax,
                3e-10, 64, 2048);
            rho.accel_usable = rho.accel.ok();
        });
        if (rho.accel_usable)
            return s >= 0 ? rho.accel(s) : std::conj(rho.accel(-s));
    }
    return levy_integral_direct(rho, s, tol);
}

double power_moment(const RadialDensityImpl& rho, double q, double a, double b, double tol) {
    if (const auto* parts = rho.summands()) {
        double t = 0;
        for (const auto& p : *parts) t += power_moment(*p, q, a, b, tol / parts->size());
        return t;
    }
    const auto& bp = rho.breakpoints();
    const double lo = bp.front(), hi = bp.back();
    const double shi = rho.support_hi();
    a = std::max(a, 0.0);
    b = std::min(b, shi);
    if (b <= a) return 0.0;

    double total = 0.0;
    auto f = [&rho, q](double r) { return rho.eval(r) * std::pow(r, q); };

    // lower closure when a == 0
    double left = a;
    if (a == 0.0) {
        const auto el = rho.lower();
        if (el.coef == 0) {
            left = std::min(lo, b);
        } else {
            const double m = el.power + q;
            if (m <= -1.0) {
                if (el.exact) return kInf;
                left = 1e-14;  // envelope cannot certify; integrate down to a floor
            } else {
                const double want = std::pow(tol / 4.0 * (m + 1.0) / el.coef, 1.0 / (m + 1.0));
                left = std::max(std::min({lo, b, want}), 1e-300);
            }
        }
    }

    // numeric part across the breakpoint range
    const double mid_hi = std::min(b, hi);
    if (mid_hi > left) {
        QuadOptions o;
        o.abs_tol = tol / 2.0;
        o.rel_tol = 1e-12;
        o.breakpoints = bp;
        for (double g = lo; g > left * 4.0; g /= 4.0) o.breakpoints.push_back(g);
        total += integrate_real(f, left, mid_hi, o);
    }

    // envelope region beyond the breakpoints
    const double up_lo = std::max(left, hi);
    if (b > up_lo) {
        const auto eu = rho.upper();
        if (eu.coef <= 0) return total;
        const double m = eu.power + q;
        if (b < kInf) {
            QuadOptions o;
            o.abs_tol = tol / 2.0;
            o.rel_tol = 1e-12;
            for (double g = up_lo * 4.0; g < b; g *= 4.0) o.breakpoints.push_back(g);
            total += integrate_real(f, up_lo, b, o);
        } else if (eu.decay == 0 && eu.exact) {
            if (m >= -1.0) return kInf;
            total += eu.coef * std::pow(up_lo, m + 1.0) / (-m - 1.0);
        } else {
            if (eu.decay == 0 && m >= -1.0) return kInf;
            double R = eu.decay > 0 ? std::max(up_lo, (2.0 * std::abs(m) + 2.0) / eu.decay)
                                    : up_lo;
            while (env_tail_above(eu, R, q) > tol / 4.0) {
                R *= 2.0;
                if (R > 1e300) return kInf;
            }
            if (R > up_lo) {
                QuadOptions o;
                o.abs_tol = tol / 2.0;
                o.rel_tol = 1e-12;
                for (double g = up_lo * 4.0; g < R; g *= 4.0) o.breakpoints.push_back(g);
                total += integrate_real(f, up_lo, R, o);
            }
        }
    }
    return total;
}

double log_tail_moment(const RadialDensityImpl& rho) {
    if (const auto* parts = rho.summands()) {
        double t = 0;
        for (const auto& p : *parts) t += log_tail_moment(*p);
        return t;
    }
    const double shi = rho.support_hi();
    if (shi <= 1.0) return 0.0;
    const auto& bp = rho.breakpoints();
    const auto eu = rho.upper();
    auto f = [&rho](double r) { return rho.eval(r) * std::log(r); };

    double hi_num = std::max(bp.back(), 1.0);
    double total = 0.0;
    if (shi < kInf) {
        hi_num = std::min(shi, hi_num);
        QuadOptions o;
        o.abs_tol = 1e-11;
        o.breakpoints = bp;
        return integrate_real(f, 1.0, shi, o);
    }
    if (eu.coef > 0) {
        if (eu.decay == 0 && eu.power >= -1.0) return kInf;
        if (eu.decay > 0) {
            double R = std::max(hi_num, (2.0 * std::abs(eu.power) + 4.0) / eu.decay);
            while (env_tail_above(eu, R, 0.2) > 1e-12) R *= 2.0;  // log r <= 5 r^0.2
            hi_num = std::max(hi_num, R);
        } else if (eu.exact) {
            const double p = eu.power, c = eu.coef, R = bp.back() > 1.0 ? bp.back() : 1.0;
            total += c * std::pow(R, p + 1.0) *
                     (std::log(R) / (-p - 1.0) + 1.0 / ((p + 1.0) * (p + 1.0)));
            hi_num = R;
        } else {
            if (eu.power >= -1.0) return kInf;
            double R = hi_num;
            while (env_tail_above(eu, R, 0.2) > 1e-12) {
                R *= 2.0;
                if (R > 1e300) return kInf;
            }
            hi_num = R;
        }
    }
    if (hi_num > 1.0) {
        QuadOptions o;
        o.abs_tol = 1e-11;
        o.breakpoints = bp;
        for (double g = 4.0; g < hi_num; g *= 4.0) o.breakpoints.push_back(g);
        total += integrate_real(f, 1.0, hi_num, o);
    }
    return total;
}

// ===========================================================================
// WeightedTailCache

WeightedTailCache::WeightedTailCache(DensityPtr rho, double q) : rho_(std::move(rho)), q_(q) {
    const auto& bp = rho_->breakpoints();
    lower_ = rho_->lower();
    upper_ = rho_->upper();
    support_hi_ = rho_->support_hi();

    grid_lo_ = std::min(bp.front(), 1e-9) * 0.5;
    const double scale_probe =
        power_moment(*rho_, q_, grid_lo_, std::min(support_hi_, std::max(bp.back(), 1.0) * 2));
    if (support_hi_ < kInf) {
        grid_hi_ = support_hi_;
    } else if (upper_.decay > 0) {
        // gauge the cutoff against the tail region itself; the global scale
        // can be dominated by a divergent weight at the origin
        const double local =
            power_moment(*rho_, q_, std::max(bp.back(), 1.0) * 0.5, kInf) + 1e-300;
        double R = std::max(bp.back(), (2.0 * std::abs(upper_.power + q_) + 4.0) / upper_.decay);
        while (env_tail_above(upper_, R, q_) > 1e-16 * local && R < 1e8) R *= 1.3;
        grid_hi_ = R;
    } else {
        grid_hi_ = std::max(bp.back(), 1.0) * 4.0;
    }

    xs_ = log_grid(grid_lo_, grid_hi_, 256, bp);
    const size_t n = xs_.size();
    std::vector<double> C(n, 0.0);
    C[n - 1] = power_moment(*rho_, q_, grid_hi_, kInf);
    for (size_t i = n - 1; i-- > 0;) {
        QuadOptions o;
        o.abs_tol = std::max(1e-300, 1e-14 * (C[i + 1] + scale_probe));
        o.rel_tol = 1e-12;
        o.max_panels = 256;
        o.throw_on_failure = false;
        auto fn = [this](double r) { return rho_->eval(r) * std::pow(r, q_); };
        C[i] = C[i + 1] + integrate_real(fn, xs_[i], xs_[i + 1], o);
    }
    c_lo_ = C[0];

    last_pos_ = -1;
    for (size_t i = 0; i < n; ++i)
        if (C[i] > 0) last_pos_ = static_cast<int>(i);
    if (last_pos_ < 1) return;  // nothing representable in log space

    lx_.resize(last_pos_ + 1);
    lc_.resize(last_pos_ + 1);
    for (int i = 0; i <= last_pos_; ++i) {
        lx_[i] = std::log(xs_[i]);
        lc_[i] = std::log(C[i]);
    }
    // analytic slope of log C vs log r: -r^{q+1} rho(r) / C(r), one-sided at nodes
    slope_lo_.resize(last_pos_);
    slope_hi_.resize(last_pos_);
    for (int i = 0; i < last_pos_; ++i) {
        const double ra = xs_[i] * (1 + 1e-9), rb = xs_[i + 1] * (1 - 1e-9);
        slope_lo_[i] = -std::pow(ra, q_ + 1.0) * rho_->eval(ra) / C[i];
        slope_hi_[i] = -std::pow(rb, q_ + 1.0) * rho_->eval(rb) / C[i + 1];
    }
}

double WeightedTailCache::operator()(double r) const {
    // Off-grid branches must stay O(1) in density evaluations: caches nest
    // (transform of transform), so any adaptive fallback here explodes.
    if (r >= support_hi_) return 0.0;
    if (r >= grid_hi_) {
        const double m = upper_.power + q_;
        if (upper_.decay == 0.0 && upper_.exact && upper_.coef > 0 && m < -1.0)
            return upper_.coef * std::pow(r, m + 1.0) / (-m - 1.0);
        return 0.0;  // grid_hi was pushed out until the remainder is ~1e-16 of scale
    }
    if (r <= grid_lo_) {
        if (r >= grid_lo_ * (1 - 1e-12)) return c_lo_;
        if (lower_.exact)  // e^{-decay r} is 1 to ~1e-9 below the grid floor
            return c_lo_ + lower_.coef * power_integral(r, grid_lo_, lower_.power + q_);
        if (last_pos_ >= 1) {  // power-law slope extension in log-log
            const double v = lc_[0] + slope_lo_[0] * (std::log(r) - lx_[0]);
            return std::exp(std::min(v, 700.0));
        }
        return c_lo_;
    }
    if (last_pos_ < 1) return 0.0;
    if (r >= xs_[last_pos_]) {
        // final stretch where C underflows to 0: fixed 5-point Gauss-Legendre
        static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
        static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};
        const double h = 0.5 * (grid_hi_ - r), c = 0.5 * (grid_hi_ + r);
        double sum = 0;
        for (int k = 0; k < 5; ++k) {
            const double u = c + h * gx[k];
            sum += gw[k] * rho_->eval(u) * std::pow(u, q_);
        }
        return sum * h;
    }
    const double lr = std::log(r);
    auto it = std::upper_bound(lx_.begin(), lx_.end(), lr);
    size_t i = it == lx_.begin() ? 0 : static_cast<size_t>(it - lx_.begin()) - 1;
    if (i >= static_cast<size_t>(last_pos_)) i = last_pos_ - 1;
    const double h = lx_[i + 1] - lx_[i];
    const double t = (lr - lx_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * lc_[i] + (t3 - 2 * t2 + t) * h * slope_lo_[i] +
                     (-2 * t3 + 3 * t2) * lc_[i + 1] + (t3 - t2) * h * slope_hi_[i];
    return std::exp(v);
}

// ===========================================================================
// Measure level

bool RadialLevyMeasure::is_zero() const {
    for (const auto& r : rays)
        if (!r.atoms.empty() || r.density) return false;
    return true;
}

void validate_measure(const RadialLevyMeasure& m, double tol) {
    for (const auto& ray : m.rays) {
        if (static_cast<int>(ray.direction.size()) != m.dim)
            throw dimension_error("ray direction dimension mismatch");
        const double n = norm2(ray.direction);
        if (std::abs(n - 1.0) > 1e-6)
            throw domain_error("ray direction must be a unit vector");
        for (const auto& a : ray.atoms) {
            if (!(a.radius > 0)) throw domain_error("atom radius must be > 0 (no mass at origin)");
            if (!(a.weight > 0)) throw domain_error("atom weight must be > 0");
        }
        if (ray.density) {
            const double small = power_moment(*ray.density, 2.0, 0.0, 1.0, tol);
            if (!std::isfinite(small))
                throw integrability_error("int_0^1 r^2 dM diverges on a ray");
            const double big = power_moment(*ray.density, 0.0, 1.0, kInf, tol);
            if (!std::isfinite(big))
                throw integrability_error("tail mass certificate failed: int_{r>1} dM not finite");
        }
    }
}

double log_moment(const RadialLevyMeasure& m) {
    double total = 0.0;
    for (const auto& ray : m.rays) {
        for (const auto& a : ray.atoms)
            if (a.radius > 1.0) total += a.weight * std::log(a.radius);
        if (ray.density) {
            const double d = log_tail_moment(*ray.density);
            if (!std::isfinite(d)) return kInf;
            total += d;
        }
    }
    return total;
}

complex ray_levy_integral(const Ray& ray, double s, double tol) {
    complex t{0, 0};
    for (const auto& a : ray.atoms) {
        const double sr = s * a.radius;
        complex term = std::exp(complex{0, sr}) - 1.0;
        if (a.radius <= 1.0) term -= complex{0, sr};
        t += a.weight * term;
    }
    if (ray.density) t += levy_integral(*ray.density, s, tol);
    return t;
}

double ray_power_moment(const Ray& ray, double q, double a, double b) {
    double t = 0;
    for (const auto& at : ray.atoms)
        if (at.radius > a && at.radius <= b) t += at.weight * std::pow(at.radius, q);
    if (ray.density) {
        const double d = power_moment(*ray.density, q, a, b);
        if (!std::isfinite(d)) return kInf;
        t += d;
    }
    return t;
}

namespace {
bool same_direction(const Vec& a, const Vec& b) {
    double d = dot(a, b);
    return d >= 1.0 - 1e-12;
}
}  // namespace

RadialLevyMeasure merge_measures(const RadialLevyMeasure& a, const RadialLevyMeasure& b) {
    if (a.dim != b.dim) throw dimension_error("measure dim mismatch");
    RadialLevyMeasure out = a;
    for (const auto& rb : b.rays) {
        bool merged = false;
        for (auto& ra : out.rays) {
            if (same_direction(ra.direction, rb.direction)) {
                ra.atoms.insert(ra.atoms.end(), rb.atoms.begin(), rb.atoms.end());
                std::sort(ra.atoms.begin(), ra.atoms.end(),
                          [](const RadialAtom& x, const RadialAtom& y) { return x.radius < y.radius; });
                if (ra.density && rb.density)
                    ra.density = make_sum({ra.density, rb.density});
                else if (rb.density)
                    ra.density = rb.density;
                merged = true;
                break;
            }
        }
        if (!merged) out.rays.push_back(rb);
    }
    return out;
}

RadialLevyMeasure scale_weights(const RadialLevyMeasure& m, double c) {
    if (!(c > 0)) throw domain_error("convolution power must be positive");
    RadialLevyMeasure out = m;
    for (auto& ray : out.rays) {
        for (auto& a : ray.atoms) a.weight *= c;
        if (ray.density) ray.density = make_weighted(c, ray.density);
    }
    return out;
}

RadialLevyMeasure dilate_measure(const RadialLevyMeasure& m, double u) {
    if (u == 0.0) throw domain_error("dilation by zero");
    const double au = std::abs(u);
    RadialLevyMeasure out;
    out.dim = m.dim;
    for (const auto& ray : m.rays) {
        Ray r;
        r.direction = ray.direction;
        if (u < 0)
            for (double& x : r.direction) x = -x;
        for (const auto& a : ray.atoms) r.atoms.push_back({a.radius * au, a.weight});
        if (ray.density) r.density = make_dilated(ray.density, au);
        out.rays.push_back(std::move(r));
    }
    return out;
}

}  // namespace levy
