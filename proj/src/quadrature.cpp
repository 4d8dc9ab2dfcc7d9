#include "levy/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>

namespace levy {

namespace {

// QUADPACK dqk15 nodes/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993945,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a, b;
    complex value;
    double error;
};

Panel eval_panel(const std::function<complex(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    complex fv[15];
    // index 7 is the centre
    fv[7] = f(c);
    for (int k = 0; k < 7; ++k) {
        fv[k] = f(c - h * kXgk[k]);
        fv[14 - k] = f(c + h * kXgk[k]);
    }
    complex kron = kWgk[7] * fv[7];
    complex gauss = kWg[3] * fv[7];
    for (int k = 0; k < 7; ++k) {
        kron += kWgk[k] * (fv[k] + fv[14 - k]);
        if (k % 2 == 1) gauss += kWg[k / 2] * (fv[k] + fv[14 - k]);
    }
    kron *= h;
    gauss *= h;
    double err = std::abs(kron - gauss);
    // QUADPACK-style error sharpening
    err = err > 0 ? err * std::min(1.0, std::pow(200.0 * err / (std::abs(kron) + 1e-300), 1.5))
                  : err;
    return {a, b, kron, std::max(err, 1e-300)};
}

}  // namespace

QuadResult gk15(const std::function<complex(double)>& f, double a, double b) {
    Panel p = eval_panel(f, a, b);
    return {p.value, p.error, true};
}

QuadResult integrate(const std::function<complex(double)>& f, double a, double b,
                     const QuadOptions& opts) {
    if (!(b > a)) return {complex{0, 0}, 0.0, true};

    // Initial subdivision: breakpoints inside (a,b), then cap panel width at
    // the oscillation period scale.
    std::vector<double> cuts{a};
    for (double x : opts.breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> nodes;
    const double max_w = opts.osc_rate > 0 ? 3.0 / opts.osc_rate
                                           : std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        nodes.push_back(cuts[i]);
        const double w = cuts[i + 1] - cuts[i];
        if (w > max_w) {
            int parts = static_cast<int>(std::ceil(w / max_w));
            parts = std::min(parts, 4096);
            for (int k = 1; k < parts; ++k) nodes.push_back(cuts[i] + w * k / parts);
        }
    }
    nodes.push_back(b);

    auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

    complex total{0, 0};
    double err_total = 0;
    int n_panels = 0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        Panel p = eval_panel(f, nodes[i], nodes[i + 1]);
        total += p.value;
        err_total += p.error;
        heap.push(p);
        ++n_panels;
    }

    auto tol_now = [&opts](const complex& tot) {
        return opts.abs_tol + opts.rel_tol * std::abs(tot);
    };
    while (err_total > tol_now(total) && n_panels < opts.max_panels && !heap.empty()) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; keep its estimate
            continue;
        }
        Panel left = eval_panel(f, worst.a, mid);
        Panel right = eval_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err_total += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n_panels;
    }

    if (err_total > tol_now(total)) {
        if (opts.throw_on_failure) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "adaptive quadrature stalled: estimated error %.3g above tolerance %.3g "
                          "on [%.6g, %.6g] (%d panels)",
                          err_total, opts.abs_tol, a, b, n_panels);
            throw quadrature_error(msg);
        }
        return {total, err_total, false};
    }
    return {total, err_total, true};
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadOptions& opts) {
    return integrate([&f](double x) { return complex{f(x), 0.0}; }, a, b, opts).value.real();
}

// ---------------------------------------------------------------------------

complex osc_power_tail(double W, double p) {
    if (!(W > 0) || p >= 0) throw domain_error("osc_power_tail requires W > 0, p < 0");
    const double W_switch = 60.0;
    complex numeric{0, 0};
    double w0 = W;
    if (W < W_switch) {
        QuadOptions o;
        o.abs_tol = 1e-13 * std::pow(W, p) * std::max(1.0, W_switch - W);
        o.osc_rate = 1.0;
        numeric = integrate([p](double w) { return std::exp(complex{0, w}) * std::pow(w, p); },
                            W, W_switch, o)
                      .value;
        w0 = W_switch;
    }
    // int_{w0}^inf e^{iw} w^p dw = i e^{i w0} w0^p sum_k (i/w0)^k prod_{j<k}(p-j)
    complex series{0, 0};
    complex term{1, 0};
    for (int k = 0; k < 24; ++k) {
        series += term;
        term *= complex{0, 1} * (p - k) / w0;
        if (std::abs(term) < 1e-16) break;
    }
    complex tail = complex{0, 1} * std::exp(complex{0, w0}) * std::pow(w0, p) * series;
    return numeric + tail;
}

// ---------------------------------------------------------------------------

ChebInterp ChebInterp::build(const std::function<complex(double)>& f, double a, double b,
                             double rel_tol, int n_start, int n_max) {
    ChebInterp c;
    c.a_ = a;
    c.b_ = b;
    int n = n_start;
    std::vector<complex> vals;
    while (true) {
        vals.assign(n + 1, complex{});
        for (int j = 0; j <= n; ++j) {
            const double xj = std::cos(kPi * j / n);
            vals[j] = f(0.5 * (a + b) + 0.5 * (b - a) * xj);
        }
        // coefficients by direct DCT-I
        std::vector<complex> coef(n + 1);
        for (int k = 0; k <= n; ++k) {
            complex s = 0.5 * (vals[0] + (k % 2 == 0 ? vals[n] : -vals[n]));
            for (int j = 1; j < n; ++j) s += vals[j] * std::cos(kPi * j * k / n);
            coef[k] = s * (2.0 / n);
        }
        double mx = 0;
        for (auto& v : coef) mx = std::max(mx, std::abs(v));
        // an undersampled band can alias into a deceptively small last few
        // coefficients; demand decay across the whole upper half
        double tail = 0;
        for (int k = n / 2; k <= n; ++k) tail = std::max(tail, std::abs(coef[k]));
        if (mx == 0 || tail <= rel_tol * mx || n >= n_max) {
            c.coef_ = std::move(coef);
            c.ok_ = (mx == 0) || tail <= rel_tol * mx;
            return c;
        }
        n *= 2;
    }
}

complex ChebInterp::operator()(double x) const {
    // Clenshaw on [-1, 1]
    const double t = (2.0 * x - (a_ + b_)) / (b_ - a_);
    complex b1{0, 0}, b2{0, 0};
    const int n = static_cast<int>(coef_.size()) - 1;
    for (int k = n; k >= 1; --k) {
        complex b0 = coef_[k] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return 0.5 * coef_[0] + t * b1 - b2;
}

// ---------------------------------------------------------------------------

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw domain_error("pchip needs >= 2 nodes");
    d_.assign(n, 0.0);
    std::vector<double> h(n - 1), s(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = s[0];
        return;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0) {
            d_[i] = 0;
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
        }
    }
    // one-sided endpoint slopes, clipped to preserve monotonicity
    auto endpoint = [](double h0, double h1, double s0, double s1) {
        double d = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0) return 0.0;
        if (s0 * s1 <= 0 && std::abs(d) > 3 * std::abs(s0)) return 3 * s0;
        return d;
    };
    d_[0] = endpoint(h[0], h[1], s[0], s[1]);
    d_[n - 1] = endpoint(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

double Pchip::operator()(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = it == x_.begin() ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
    if (i >= x_.size() - 1) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace levy
