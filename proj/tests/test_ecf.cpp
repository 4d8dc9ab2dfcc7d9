#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/ecf.hpp"

using namespace levy;

namespace {
SampleBatch batch_of(std::vector<double> values) {
    SampleBatch b;
    b.dim = 1;
    b.n = static_cast<int64_t>(values.size());
    b.values = std::move(values);
    return b;
}
}  // namespace

TEST_CASE("ecf of degenerate batches") {
    auto zeros = batch_of(std::vector<double>(100, 0.0));
    for (const auto& v : ecf(zeros, default_probe_grid(1)))
        CHECK(std::abs(v - complex{1.0, 0.0}) < 1e-15);
    auto pi_batch = batch_of({kPi});
    const auto v = ecf(pi_batch, {{1.0}});
    CHECK(std::abs(v[0] - complex{-1.0, 0.0}) < 1e-12);
    SampleBatch empty;
    CHECK_THROWS_AS(ecf(empty, {{1.0}}), domain_error);
}

TEST_CASE("ecf modulus never exceeds one") {
    SimConfig c;
    c.n_samples = 5000;
    c.seed = 3;
    auto b = sample_increment(gamma_triple(1.0, 1.0), 1.0, c, 5000);
    for (const auto& v : ecf(b, default_probe_grid(1))) CHECK(std::abs(v) <= 1.0 + 1e-12);
}

TEST_CASE("one million gaussian samples at y=1") {
    const int64_t n = 1000000;
    SimConfig c;
    c.n_samples = n;
    c.seed = 17;
    auto b = sample_increment(gaussian_triple(0.0, 1.0), 1.0, c, n);
    const auto v = ecf(b, {{1.0}});
    CHECK(std::abs(v[0] - std::exp(-0.5)) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("compare: self-consistency passes, wrong variance fails") {
    const int64_t n = 100000;
    SimConfig c;
    c.n_samples = n;
    c.seed = 5;
    auto b = sample_increment(gaussian_triple(0.0, 1.0), 1.0, c, n);
    auto ok = compare(b, exponent_of(gaussian_triple(0.0, 1.0)));
    CHECK(ok.pass);
    CHECK(ok.band == doctest::Approx(3.0 / std::sqrt(static_cast<double>(n))));

    auto bad = compare(b, exponent_of(gaussian_triple(0.0, 4.0)));
    CHECK_FALSE(bad.pass);
    // |e^{-1/2} - e^{-2}| at y = 1 is about 0.47, far beyond the band
    double gap_at_1 = 0;
    for (size_t i = 0; i < bad.probes.size(); ++i)
        if (std::abs(bad.probes[i][0] - 1.0) < 0.09) gap_at_1 = bad.gaps[i];
    CHECK(gap_at_1 > 0.4);
}

TEST_CASE("conjugation symmetry of the report") {
    SimConfig c;
    c.n_samples = 20000;
    c.seed = 9;
    auto b = sample_increment(gamma_triple(1.0, 1.0), 1.0, c, 20000);
    const auto vs = ecf(b, {{2.5}, {-2.5}});
    CHECK(vs[1] == std::conj(vs[0]));  // exact mirror
}

TEST_CASE("serial and parallel ecf agree bitwise") {
    SimConfig c;
    c.n_samples = 30000;
    c.seed = 21;
    auto b = sample_increment(gaussian_triple(0.0, 1.0), 1.0, c, 30000);
    const auto probes = default_probe_grid(1);
    CHECK(ecf(b, probes) == serial::ecf(b, probes));
}

TEST_CASE("false-failure rate at the c=3 band") {
    // 20 seeded self-consistency runs; at c=3 virtually none should fail
    int failures = 0;
    for (uint64_t seed = 100; seed < 120; ++seed) {
        SimConfig c;
        c.n_samples = 4000;
        c.seed = seed;
        auto b = sample_increment(gaussian_triple(0.0, 1.0), 1.0, c, 4000);
        if (!compare(b, exponent_of(gaussian_triple(0.0, 1.0))).pass) ++failures;
    }
    CHECK(failures <= 1);
}

TEST_CASE("batch moments") {
    auto b = batch_of({1.0, 2.0, 3.0, 4.0});
    CHECK(batch_mean(b) == doctest::Approx(2.5));
    CHECK(batch_variance(b) == doctest::Approx(5.0 / 3));
}
