// Command implementations behind the levymap CLI; separated from main so
// tests can drive them directly.
#pragma once

#include <optional>
#include <string>

#include "levy/descriptor.hpp"

namespace levy::cli {

struct SimulateArgs {
    std::string spec_path;  // map spec json
    std::string dist_path;
    int64_t n = 10000;
    uint64_t seed = 1;
    double eps = 1e-3;
    int steps = 256;
    std::string out_csv;
};

struct MaflpArgs {
    std::string dist_path;
    double alpha = 0.25;
    double t = 1.0;
    int64_t n = 10000;
    uint64_t seed = 1;
    double eps = 1e-3;
    int steps = 256;
    std::string out_csv;
    std::string law_out;  // optional: exponent table CSV of z_law
};

int cmd_transform(const std::string& dist_path, const std::string& map_path,
                  const std::string& out_prefix);
int cmd_classify(const std::string& dist_path, double beta,
                 const std::optional<std::string>& rho_path, const std::string& out_path);
int cmd_simulate(const SimulateArgs& a);
int cmd_maflp(const MaflpArgs& a);
int cmd_verify(const std::string& samples_csv, const std::string& target_path, double confidence,
               const std::string& out_path);
int cmd_rerun(const std::string& manifest_path);

// Sample CSV round trip (header carries dim + provenance hash).
void write_batch_csv(const SampleBatch& b, const std::string& path);
SampleBatch read_batch_csv(const std::string& path);

// Probe-grid exponent table: y components, Re Phi, Im Phi.
void write_exponent_csv(const CharFn& f, const std::string& path);

// FNV-1a of a file's bytes, hex string.
std::string file_hash(const std::string& path);

void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace levy::cli
