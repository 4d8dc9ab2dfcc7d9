// Random integral mappings: exponent-level quadrature for arbitrary
// (kernel, time change, interval), exact triple transforms for the J^beta
// and I maps, and the MAFLP marginal laws built from them.
#pragma once

#include "levy/triple.hpp"

namespace levy {

struct KernelSpec {
    enum class Type { power, exponential, maflp_u, constant };
    Type type = Type::power;
    double alpha = 1.0;  // power exponent
    double t0 = 1.0;     // maflp_u horizon: s -> (t0+s)^alpha - s^alpha
    double value = 1.0;  // constant kernel

    double operator()(double t) const;
};

struct TimeChangeSpec {
    enum class Type { power, identity, linear };
    Type type = Type::identity;
    double beta = 1.0;  // power exponent, > 0
    double c = 1.0;     // linear slope, > 0

    double at(double t) const;
    double inverse(double v) const;
};

struct MapInterval {
    double a = 0.0;
    double b = 1.0;  // +inf for half-lines
    bool half_line() const { return !std::isfinite(b); }
};

struct IntegralMapSpec {
    KernelSpec kernel;
    TimeChangeSpec time_change;
    MapInterval interval;

    struct MonotonePiece {
        double a, b;
        bool increasing;
    };
    // The parametric time changes are monotone on R+, so this is a single
    // piece; kept as a list so piecewise changes slot in.
    std::vector<MonotonePiece> monotone_pieces() const;

    void validate() const;
};

// Named specs for the two closed-form maps.
IntegralMapSpec jbeta_map_spec(double beta);  // (h=t, r=t^beta, (0,1])
IntegralMapSpec i_map_spec();                 // (h=e^{-t}, r=t, (0,inf))

// y -> int_{(a,b]} Phi(h(t) y) dr(t) by adaptive quadrature after the
// substitution v = r(t). Half-line maps are gated: the I-map requires a
// finite log-moment of phi's source; other kernels need a moment-based or
// empirical tail certificate with truncation error <= tail_tol.
CharFn map_exponent(const IntegralMapSpec& spec, const CharFn& phi, double tail_tol = 1e-8);

// Lemma-1 exact transforms on triples.
LevyTriple jbeta_transform(const LevyTriple& nu, double beta);
LevyTriple i_transform(const LevyTriple& rho);

// Law of V(t) = int_0^t (t-s)^alpha dY(s) as the composition
// dilate(conv_power(jbeta_transform(nu, 1/alpha), t), t^alpha).
LevyTriple v_law(const LevyTriple& nu, double alpha, double t);

// Exponent of U(t) = int_0^inf ((t+s)^alpha - s^alpha) dY(s); requires a
// zero mean and a finite second moment for the truncation certificate.
CharFn u_law(const LevyTriple& nu, double alpha, double t, double tail_tol = 1e-8);

// Exponent of the MAFLP marginal Z(t) = U(t) + V(t) (independent summands).
CharFn z_law(const LevyTriple& nu, double alpha, double t, double tail_tol = 1e-8);

// Truncation point b with Var(int_b^inf ((t+s)^a - s^a) dY) <= var_tol.
double maflp_tail_cut(const LevyTriple& nu, double alpha, double t, double var_tol);

}  // namespace levy
