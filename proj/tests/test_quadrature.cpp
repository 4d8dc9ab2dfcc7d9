#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/quadrature.hpp"
#include "oracle_utils.hpp"

using namespace levy;

TEST_CASE("gk adaptive on smooth integrands") {
    QuadOptions o;
    CHECK(integrate_real([](double x) { return x * x; }, 0, 1, o) == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(integrate_real([](double x) { return std::exp(-x); }, 0, 40, o) ==
          doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("oscillatory integrand with period hint") {
    QuadOptions o;
    o.osc_rate = 40.0;
    const complex v = integrate([](double x) { return std::exp(complex{0, 40.0 * x}); }, 0.0,
                                2.0 * kPi, o)
                          .value;
    CHECK(std::abs(v) < 1e-10);  // whole periods cancel
    const complex w =
        integrate([](double x) { return std::exp(complex{0, 40.0 * x}); }, 0.0, 1.0, o).value;
    const complex want = (std::exp(complex{0, 40.0}) - 1.0) / complex{0, 40.0};
    CHECK(std::abs(w - want) < 1e-11);
}

TEST_CASE("breakpoint kink handled by seeding") {
    auto f = [](double x) { return x < 1.0 ? x : 2.0 - x; };
    QuadOptions o;
    o.breakpoints = {1.0};
    CHECK(integrate_real(f, 0, 2, o) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relative tolerance rescues huge integrals") {
    QuadOptions o;
    o.abs_tol = 1e-12;  // absurd in absolute terms for this magnitude
    o.rel_tol = 1e-12;
    for (double g = 1e-9; g < 1; g *= 4) o.breakpoints.push_back(g);
    const double v = integrate_real([](double x) { return std::pow(x, -2.5); }, 1e-9, 1.0, o);
    const double want = (std::pow(1e-9, -1.5) - 1.0) / 1.5;
    CHECK(v == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("osc_power_tail differences match the simpson oracle") {
    // the infinite upper limit cancels in differences, which the independent
    // oracle can integrate exactly; the absolute anchor is covered by the
    // stable closed-form exponent test in test_radial
    for (double p : {-1.2, -1.7, -3.0}) {
        for (auto [W, W2] : std::vector<std::pair<double, double>>{{0.4, 7.0}, {3.0, 90.0}, {25.0, 500.0}}) {
            std::vector<double> cuts;
            for (double x = W; x < W2; x += 2.0) cuts.push_back(x);
            cuts.push_back(W2);
            const auto ora = oracle::integrate_pieces(
                [p](double w) { return std::exp(oracle::complexd{0, w}) * std::pow(w, p); }, cuts,
                1e-14);
            const complex got = osc_power_tail(W, p) - osc_power_tail(W2, p);
            CHECK(std::abs(got - complex{ora.real(), ora.imag()}) <
                  1e-9 * std::max(1.0, std::pow(W, p)));
        }
    }
}

TEST_CASE("chebyshev interpolant hits its tolerance") {
    auto f = [](double x) { return std::exp(complex{0, 3.0 * x}) / (1.0 + x * x); };
    auto c = ChebInterp::build(f, 0.0, 8.0, 1e-11, 64, 2048);
    REQUIRE(c.ok());
    for (double x = 0; x <= 8.0; x += 0.173)
        CHECK(std::abs(c(x) - f(x)) < 1e-9);
}

TEST_CASE("pchip is monotone and accurate on smooth data") {
    std::vector<double> xs, ys;
    for (int i = 0; i <= 40; ++i) {
        const double x = i / 40.0 * 3.0;
        xs.push_back(x);
        ys.push_back(std::exp(-x));
    }
    Pchip p(xs, ys);
    double prev = p(0.0);
    for (double x = 0.01; x <= 3.0; x += 0.01) {
        const double v = p(x);
        CHECK(v <= prev + 1e-14);  // monotone decreasing
        CHECK(v == doctest::Approx(std::exp(-x)).epsilon(1e-5));
        prev = v;
    }
}
