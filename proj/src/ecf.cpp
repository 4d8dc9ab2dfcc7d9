#include "levy/ecf.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levy {

namespace {
complex ecf_at(const SampleBatch& b, const Vec& y) {
    double re = 0, im = 0;
    const int dim = b.dim;
    for (int64_t k = 0; k < b.n; ++k) {
        double phase = 0;
        const double* row = &b.values[k * dim];
        for (int d = 0; d < dim; ++d) phase += y[d] * row[d];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return {re / static_cast<double>(b.n), im / static_cast<double>(b.n)};
}
}  // namespace

std::vector<complex> ecf(const SampleBatch& batch, const std::vector<Vec>& probes) {
    if (batch.n <= 0) throw domain_error("ecf needs a nonempty batch");
    std::vector<complex> out(probes.size());
    const int64_t m = static_cast<int64_t>(probes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int64_t i = 0; i < m; ++i) out[i] = ecf_at(batch, probes[i]);
    return out;
}

namespace serial {
std::vector<complex> ecf(const SampleBatch& batch, const std::vector<Vec>& probes) {
    if (batch.n <= 0) throw domain_error("ecf needs a nonempty batch");
    std::vector<complex> out(probes.size());
    for (size_t i = 0; i < probes.size(); ++i) out[i] = ecf_at(batch, probes[i]);
    return out;
}
}  // namespace serial

EcfReport compare(const SampleBatch& batch, const CharFn& target, double confidence) {
    if (batch.dim != target.dim()) throw dimension_error("compare: dim mismatch");
    EcfReport rep;
    rep.probes = target.probes();
    rep.ecf_values = ecf(batch, rep.probes);
    rep.target_values.resize(rep.probes.size());
    const auto tv = eval_grid(target, rep.probes);
    for (size_t i = 0; i < tv.size(); ++i) rep.target_values[i] = std::exp(tv[i]);
    rep.n_samples = batch.n;
    rep.confidence = confidence;
    rep.band = confidence / std::sqrt(static_cast<double>(batch.n));
    rep.gaps.resize(rep.probes.size());
    rep.pass = true;
    for (size_t i = 0; i < rep.probes.size(); ++i) {
        rep.gaps[i] = std::abs(rep.ecf_values[i] - rep.target_values[i]);
        rep.worst_gap = std::max(rep.worst_gap, rep.gaps[i]);
        if (rep.gaps[i] > rep.band) rep.pass = false;
    }
    return rep;
}

double batch_mean(const SampleBatch& batch, int d) {
    double s = 0;
    for (int64_t k = 0; k < batch.n; ++k) s += batch.value(k, d);
    return s / static_cast<double>(batch.n);
}

double batch_variance(const SampleBatch& batch, int d) {
    const double m = batch_mean(batch, d);
    double s = 0;
    for (int64_t k = 0; k < batch.n; ++k) {
        const double x = batch.value(k, d) - m;
        s += x * x;
    }
    return s / static_cast<double>(batch.n - 1);
}

}  // namespace levy
