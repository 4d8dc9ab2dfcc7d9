#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/triple.hpp"
#include "oracle_utils.hpp"

using namespace levy;

namespace {
double sup_gap(const CharFn& f, const CharFn& g) {
    return sup_gap_on_grid(f, g, default_probe_grid(f.dim()));
}
}  // namespace

TEST_CASE("exponent of elementary triples") {
    CHECK(std::abs(exponent_of(gaussian_triple(0.0, 1.0))(2.0) - complex{-2.0, 0.0}) < 1e-14);
    CHECK(std::abs(exponent_of(gaussian_triple(1.0, 0.0))(3.0) - complex{0.0, 3.0}) < 1e-14);
    // single atom (r=2, w=0.5) beyond the unit ball: no compensator
    auto cp = compound_poisson_triple(0.5, {{{2.0}, 1.0}});
    CHECK(std::abs(exponent_of(cp)(1.0) - complex{-0.7080734182735712, 0.4546487134128408}) <
          1e-14);
}

TEST_CASE("gamma exponent matches the analytic characteristic function") {
    auto phi = exponent_of(gamma_triple(1.0, 1.0));
    double worst = 0;
    for (const auto& y : phi.probes())
        worst = std::max(worst, std::abs(phi(y) - (-std::log(complex{1.0, -y[0]}))));
    CHECK(worst < 1e-6);
    // gamma(2, 0.5): CF (1 - iy/0.5)^{-2}
    auto phi2 = exponent_of(gamma_triple(2.0, 0.5));
    double worst2 = 0;
    for (const auto& y : phi2.probes())
        worst2 = std::max(worst2, std::abs(phi2(y) - (-2.0 * std::log(complex{1.0, -y[0] / 0.5}))));
    CHECK(worst2 < 1e-6);
}

TEST_CASE("exponent invariants hold for every family") {
    std::vector<LevyTriple> fixtures = {
        gaussian_triple(0.3, 2.0), gamma_triple(1.0, 1.0),
        compound_poisson_triple(1.0, {{{0.5}, 0.5}, {{2.0}, 0.5}}), stable_triple(0.7, 1.0)};
    for (const auto& t : fixtures) {
        auto c = check_charfn(exponent_of(t));
        CHECK(c.at_zero < 1e-12);
        CHECK(c.worst_hermitian < 1e-8);
        CHECK(c.worst_real_part < 1e-9);
    }
}

TEST_CASE("two-dimensional exponent") {
    Matrix cov(2);
    cov(0, 0) = 1.0;
    cov(1, 1) = 2.0;
    auto g = gaussian_triple(Vec{0.0, 0.0}, cov);
    CHECK(std::abs(exponent_of(g)(Vec{1.0, 1.0}) - complex{-1.5, 0.0}) < 1e-14);
    auto cp = compound_poisson_triple(1.0, {{{2.0, 0.0}, 0.5}, {{0.0, 2.0}, 0.5}});
    auto phi = exponent_of(cp);
    CHECK(phi.probes().size() == 4096);
    const complex v = phi(Vec{1.0, 0.0});
    const complex want = 0.5 * (std::exp(complex{0, 2.0}) - 1.0);  // only the first atom moves
    CHECK(std::abs(v - want) < 1e-13);
}

TEST_CASE("convolution is component-wise addition") {
    auto a = gaussian_triple(1.0, 1.0), b = gaussian_triple(2.0, 3.0);
    auto c = convolve(a, b);
    CHECK(c.shift[0] == doctest::Approx(3.0));
    CHECK(c.covariance(0, 0) == doctest::Approx(4.0));
    // identity element
    auto delta0 = gaussian_triple(0.0, 0.0);
    auto d = convolve(gamma_triple(1.0, 1.0), delta0);
    CHECK(sup_gap(exponent_of(d), exponent_of(gamma_triple(1.0, 1.0))) < 1e-12);
    // exponents add (quadrature oracle route)
    auto cp = compound_poisson_triple(1.0, {{{2.0}, 1.0}});
    auto both = convolve(gamma_triple(1.0, 1.0), cp);
    auto sum_fn = CharFn(1, [&](const Vec& y) {
        return exponent_of(gamma_triple(1.0, 1.0))(y) + exponent_of(cp)(y);
    });
    CHECK(sup_gap(exponent_of(both), sum_fn) < 1e-7);
    CHECK_THROWS_AS(convolve(a, gaussian_triple(Vec{0, 0}, Matrix(2))), dimension_error);
}

TEST_CASE("convolution powers scale the exponent") {
    auto t = gamma_triple(1.0, 1.0);
    CHECK(sup_gap(exponent_of(conv_power(t, 1.0)), exponent_of(t)) < 1e-12);
    auto g2 = conv_power(gaussian_triple(0.0, 1.0), 2.0);
    CHECK(g2.covariance(0, 0) == doctest::Approx(2.0));
    auto half = exponent_of(conv_power(t, 0.5));
    auto phi = exponent_of(t);
    auto want = CharFn(1, [phi](const Vec& y) { return 0.5 * phi(y); });
    CHECK(sup_gap(half, want) < 1e-7);
    CHECK_THROWS_AS(conv_power(t, 0.0), domain_error);
}

TEST_CASE("dilation: gaussian scaling and the exponent identity") {
    auto g = dilate(gaussian_triple(0.0, 1.0), 3.0);
    CHECK(g.covariance(0, 0) == doctest::Approx(9.0));
    auto t = gamma_triple(1.0, 1.0);
    CHECK(sup_gap(exponent_of(dilate(t, 1.0)), exponent_of(t)) < 1e-12);
    CHECK_THROWS_AS(dilate(t, 0.0), domain_error);

    // Phi_u(y) = Phi(u y) for an atom crossing the unit ball and for gamma
    auto atom = compound_poisson_triple(1.0, {{{0.5}, 1.0}});
    for (double u : {4.0, -2.0, 0.5, 3.0}) {
        for (const auto* tp : {&atom, &t}) {
            auto lhs = exponent_of(dilate(*tp, u));
            auto phi = exponent_of(*tp);
            auto rhs = CharFn(1, [phi, u](const Vec& y) { return phi(scaled(y, u)); });
            CHECK(sup_gap(lhs, rhs) < 2e-7);
        }
    }
    // roundtrip
    auto rt = dilate(dilate(t, 4.0), 0.25);
    CHECK(sup_gap(exponent_of(rt), exponent_of(t)) < 2e-7);
}

TEST_CASE("log moment") {
    CHECK(triple_log_moment(gaussian_triple(0.0, 1.0)) == 0.0);
    auto cp = compound_poisson_triple(2.0, {{{std::exp(1.0)}, 1.0}});
    CHECK(triple_log_moment(cp) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(triple_log_moment(gamma_triple(1.0, 1.0)) ==
          doctest::Approx(0.09784319721667018).epsilon(1e-8));
}

TEST_CASE("family construction details") {
    auto cp = compound_poisson_triple(1.0, {{{2.0}, 1.0}});
    CHECK(cp.shift[0] == 0.0);  // atom outside the unit ball: compensator-free
    CHECK(cp.covariance(0, 0) == 0.0);
    REQUIRE(cp.levy_measure.rays.size() == 1);
    CHECK(cp.levy_measure.rays[0].atoms[0].radius == doctest::Approx(2.0));
    CHECK(cp.levy_measure.rays[0].atoms[0].weight == doctest::Approx(1.0));

    auto gam = gamma_triple(1.0, 1.0);
    CHECK(gam.shift[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(gamma_triple(-1.0, 1.0), domain_error);
    CHECK_THROWS_AS(stable_triple(1.2, 1.0), domain_error);
    CHECK_THROWS_AS(compound_poisson_triple(1.0, {{{2.0}, 0.4}}), domain_error);  // probs != 1
}

TEST_CASE("triple validation") {
    Matrix bad(2);
    bad(0, 0) = 1.0;
    bad(0, 1) = bad(1, 0) = 2.0;
    bad(1, 1) = 1.0;  // eigenvalue -1
    RadialLevyMeasure empty;
    empty.dim = 2;
    CHECK_THROWS_AS(make_triple(Vec{0, 0}, bad, empty), domain_error);
}

TEST_CASE("moment summary") {
    auto ms = moment_summary(gamma_triple(1.0, 1.0));
    REQUIRE(ms.mean_finite);
    CHECK(ms.mean[0] == doctest::Approx(1.0).epsilon(1e-9));  // Gamma(1,1) mean
    CHECK(ms.m2 == doctest::Approx(1.0).epsilon(1e-9));       // int r^2 e^{-r}/r dr
    auto st = moment_summary(stable_triple(0.7, 1.0));
    CHECK_FALSE(st.mean_finite);
}

TEST_CASE("probe grids and parallel evaluation") {
    CHECK(default_probe_grid(1).size() == 64);
    CHECK(default_probe_grid(2).size() == 64 * 64);
    auto phi = exponent_of(gamma_triple(1.0, 1.0));
    const auto par = eval_grid(phi, phi.probes());
    const auto ser = serial::eval_grid(phi, phi.probes());
    CHECK(par == ser);  // bit-identical
    CHECK(phi.grid_values() == par);
}
