// Adaptive Gauss-Kronrod quadrature, Chebyshev interpolation and the
// oscillatory power-tail integral used by the radial Levy machinery.
#pragma once

#include <functional>
#include <optional>

#include "levy/common.hpp"

namespace levy {

struct QuadOptions {
    double abs_tol = 1e-9;
    // Convergence uses abs_tol + rel_tol * |value|; rel_tol rescues integrals
    // whose magnitude dwarfs any fixed absolute target.
    double rel_tol = 0.0;
    // Points where the integrand is only piecewise smooth; initial panels
    // are split there.
    std::vector<double> breakpoints;
    // Maximum |d(phase)/dx| of an oscillatory factor e^{i phase(x)}; initial
    // panel widths are capped near the period scale.
    double osc_rate = 0.0;
    int max_panels = 20000;
    // When false, failure to reach abs_tol returns the best estimate instead
    // of throwing quadrature_error.
    bool throw_on_failure = true;
};

struct QuadResult {
    complex value{0.0, 0.0};
    double error = 0.0;
    bool converged = true;
};

// Adaptive GK15 on the finite interval [a, b].
QuadResult integrate(const std::function<complex(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Real-valued convenience wrapper.
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadOptions& opts = {});

// One non-adaptive GK15 application on [a, b]; returns value and error estimate.
QuadResult gk15(const std::function<complex(double)>& f, double a, double b);

// ---------------------------------------------------------------------------
// osc_power_tail: I(W, p) = int_W^inf e^{iw} w^p dw for p < 0, W > 0.
// Evaluated by panel quadrature up to a switch point and an integration-by-
// parts asymptotic series beyond it. Absolute accuracy ~1e-12 * W^p.
complex osc_power_tail(double W, double p);

// ---------------------------------------------------------------------------
// Chebyshev interpolant of a smooth complex function on [a, b].
class ChebInterp {
public:
    ChebInterp() = default;

    // Samples f at n+1 Chebyshev nodes (n a power of two), doubling n until
    // the trailing coefficients fall below rel_tol * max|coeff| or n_max is
    // reached. ok() reports whether the tail test passed.
    static ChebInterp build(const std::function<complex(double)>& f, double a, double b,
                            double rel_tol = 1e-11, int n_start = 64, int n_max = 2048);

    complex operator()(double x) const;
    bool ok() const { return ok_; }
    double lo() const { return a_; }
    double hi() const { return b_; }

private:
    double a_ = 0, b_ = 1;
    std::vector<complex> coef_;
    bool ok_ = false;
};

// ---------------------------------------------------------------------------
// Monotone piecewise-cubic interpolant (Fritsch-Carlson). Used for cached
// cumulative integrals of radial densities.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    bool empty() const { return x_.empty(); }
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }

private:
    std::vector<double> x_, y_, d_;  // nodes, values, node derivatives
};

}  // namespace levy
