// Timings of the OpenMP kernels against their serial reference paths:
// increment sampling, MAFLP sampling, ECF estimation, probe-grid exponent
// evaluation. The counter-keyed RNG makes parallel and serial output
// bit-identical, so the benchmark also cross-checks equality.
#include <chrono>
#include <cstdio>
#include <cstring>

#include "levy/ecf.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace levy;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool equal) {
    std::printf("%-28s %10.1f %10.1f %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, equal ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int64_t n = 200000;
    if (argc > 1) n = std::atoll(argv[1]);
#ifdef _OPENMP
    std::printf("threads: %d, samples: %lld\n\n", omp_get_max_threads(),
                static_cast<long long>(n));
#endif
    std::printf("%-28s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");

    const LevyTriple gauss = gaussian_triple(0.0, 1.0);
    const LevyTriple gam = gamma_triple(1.0, 1.0);
    SimConfig cfg;
    cfg.n_samples = n;
    cfg.seed = 42;
    cfg.n_time_steps = 128;

    {
        auto t0 = clk::now();
        const auto a = serial::sample_increment(gam, 0.5, cfg, n);
        const double ts = ms_since(t0);
        t0 = clk::now();
        const auto b = sample_increment(gam, 0.5, cfg, n);
        row("gamma increments", ts, ms_since(t0), a.values == b.values);
    }
    {
        SimConfig mc = cfg;
        mc.n_samples = n / 20;
        auto t0 = clk::now();
        const auto a = serial::sample_maflp(gauss, 0.25, 1.0, mc);
        const double ts = ms_since(t0);
        t0 = clk::now();
        const auto b = sample_maflp(gauss, 0.25, 1.0, mc);
        row("maflp Z(1) gaussian", ts, ms_since(t0), a.values == b.values);
    }
    {
        const auto batch = sample_increment(gauss, 1.0, cfg, n);
        const auto probes = default_probe_grid(1);
        auto t0 = clk::now();
        const auto a = serial::ecf(batch, probes);
        const double ts = ms_since(t0);
        t0 = clk::now();
        const auto b = ecf(batch, probes);
        row("ecf 64 probes", ts, ms_since(t0), a == b);
    }
    {
        const CharFn phi = exponent_of(gam);
        (void)phi(Vec{1.0});  // warm the write-once accelerator
        const auto probes = default_probe_grid(1);
        std::vector<Vec> many;
        for (int k = 0; k < 64; ++k) many.insert(many.end(), probes.begin(), probes.end());
        auto t0 = clk::now();
        const auto a = serial::eval_grid(phi, many);
        const double ts = ms_since(t0);
        t0 = clk::now();
        const auto b = eval_grid(phi, many);
        row("exponent grid eval", ts, ms_since(t0), a == b);
    }
    return 0;
}
