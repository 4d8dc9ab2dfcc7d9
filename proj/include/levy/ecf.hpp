// Empirical characteristic functions and the statistical comparison of
// sample batches against analytic exponents.
#pragma once

#include "levy/simulate.hpp"
#include "levy/triple.hpp"

namespace levy {

// (1/n) sum_k e^{i<y, X_k>} per probe; OpenMP over probes, inner sum kept in
// index order so the serial reference matches bit for bit.
std::vector<complex> ecf(const SampleBatch& batch, const std::vector<Vec>& probes);

namespace serial {
std::vector<complex> ecf(const SampleBatch& batch, const std::vector<Vec>& probes);
}

struct EcfReport {
    std::vector<Vec> probes;
    std::vector<complex> ecf_values;
    std::vector<complex> target_values;  // e^{Phi(y)}
    std::vector<double> gaps;
    double band = 0;  // confidence / sqrt(n)
    double confidence = 3.0;
    int64_t n_samples = 0;
    bool pass = false;
    double worst_gap = 0;
};

EcfReport compare(const SampleBatch& batch, const CharFn& target, double confidence = 3.0);

// Sample mean/variance along one coordinate; convenience for moment tests.
double batch_mean(const SampleBatch& batch, int d = 0);
double batch_variance(const SampleBatch& batch, int d = 0);

}  // namespace levy
