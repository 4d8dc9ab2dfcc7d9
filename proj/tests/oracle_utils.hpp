// Test-only oracles. The adaptive Simpson integrator here is deliberately
// independent of levy::quadrature so dual-route checks do not share code
// with the implementation they validate.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using complexd = std::complex<double>;

inline complexd simpson_rec(const std::function<complexd(double)>& f, double a, double b,
                            complexd fa, complexd fm, complexd fb, complexd whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const complexd flm = f(lm), frm = f(rm);
    const complexd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const complexd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline complexd integrate(const std::function<complexd(double)>& f, double a, double b,
                          double tol = 1e-12, int depth = 48) {
    const double m = 0.5 * (a + b);
    const complexd fa = f(a), fm = f(m), fb = f(b);
    const complexd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline double integrate_real(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-12) {
    return integrate([&f](double x) { return complexd{f(x), 0.0}; }, a, b, tol).real();
}

// piecewise version for integrands with known features
inline complexd integrate_pieces(const std::function<complexd(double)>& f,
                                 const std::vector<double>& cuts, double tol = 1e-12) {
    complexd total{0, 0};
    for (size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(f, cuts[i], cuts[i + 1], tol);
    return total;
}

}  // namespace oracle
