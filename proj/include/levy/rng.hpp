// Counter-based RNG (Philox4x32-10) with distribution samplers. Streams are
// keyed by (seed, stream kind, sample index, term index) so parallel Monte
// Carlo is reproducible bit-for-bit regardless of scheduling.
#pragma once

#include <cmath>
#include <cstdint>

#include "levy/common.hpp"

namespace levy {

class CounterRng {
public:
    CounterRng(uint64_t seed, uint32_t stream, uint64_t sample, uint32_t term)
        : x0_(static_cast<uint32_t>(sample)), x1_(static_cast<uint32_t>(sample >> 32)),
          x2_(term), x3_(0) {
        uint64_t k = splitmix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1ULL));
        k0_ = static_cast<uint32_t>(k);
        k1_ = static_cast<uint32_t>(k >> 32);
    }

    uint32_t next_u32() {
        if (idx_ == 4) {
            block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    uint64_t next_u64() {
        const uint64_t lo = next_u32();
        return (static_cast<uint64_t>(next_u32()) << 32) | lo;
    }

    // (0, 1]
    double uniform() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }
    // open (0, 1)
    double uniform_oo() { return ((next_u64() >> 12) + 0.5) * 0x1.0p-52; }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double exponential() { return -std::log(uniform()); }

    int64_t poisson(double lambda) {
        if (!(lambda >= 0)) throw domain_error("poisson rate must be >= 0");
        if (lambda == 0) return 0;
        if (lambda > 30.0) return poisson(lambda * 0.5) + poisson(lambda * 0.5);
        const double L = std::exp(-lambda);
        int64_t k = 0;
        double p = uniform();
        while (p > L) {
            ++k;
            p *= uniform();
            if (k > 4096) throw domain_error("poisson sampler runaway");
        }
        return k;
    }

    // unit-rate gamma, Marsaglia-Tsang with the shape<1 boost
    double gamma(double shape) {
        if (!(shape > 0)) throw domain_error("gamma shape must be > 0");
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::exp(std::log(uniform()) / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_oo();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Kanter's sampler: E exp(-s X) = exp(-s^alpha), alpha in (0,1)
    double positive_stable(double alpha) {
        if (!(alpha > 0) || !(alpha < 1)) throw domain_error("stable index must be in (0,1)");
        const double u = uniform_oo() * kPi;
        const double e = exponential();
        const double a = std::pow(std::sin(alpha * u), alpha / (1.0 - alpha)) *
                         std::sin((1.0 - alpha) * u) /
                         std::pow(std::sin(u), 1.0 / (1.0 - alpha));
        return std::pow(a / e, (1.0 - alpha) / alpha);
    }

private:
    static uint64_t splitmix(uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
        const uint64_t p = static_cast<uint64_t>(a) * b;
        hi = static_cast<uint32_t>(p >> 32);
        lo = static_cast<uint32_t>(p);
    }

    void block() {
        uint32_t c0 = x0_, c1 = x1_, c2 = x2_, c3 = x3_;
        uint32_t k0 = k0_, k1 = k1_;
        for (int round = 0; round < 10; ++round) {
            uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c0, hi0, lo0);
            mulhilo(0xCD9E8D57u, c2, hi1, lo1);
            const uint32_t n0 = hi1 ^ c1 ^ k0;
            const uint32_t n1 = lo1;
            const uint32_t n2 = hi0 ^ c3 ^ k1;
            const uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        ++x3_;  // block counter
    }

    uint32_t k0_ = 0, k1_ = 0;
    uint32_t x0_, x1_, x2_, x3_;
    uint32_t out_[4] = {};
    int idx_ = 4;
};

}  // namespace levy
