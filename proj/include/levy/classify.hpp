// Decides when a generalized s-selfdecomposable law J^beta(nu) is in fact
// selfdecomposable, builds the witness rho with I(rho) = J^beta(nu), and
// verifies the triple relations tying nu to rho.
#pragma once

#include <map>
#include <optional>

#include "levy/integral_map.hpp"

namespace levy {

enum class Decision { yes, no, inconclusive };

struct IntervalEvidence {
    int ray = 0;
    double r_lo = 0, r_hi = 0;  // r_hi may be +inf (tail interval)
    double mass = 0;            // signed Delta mass found there
};

struct ClassificationReport {
    Decision decision = Decision::inconclusive;
    std::optional<LevyTriple> witness;
    std::optional<IntervalEvidence> failure_evidence;
    double log_moment_value = 0;  // may be +inf
    std::map<std::string, double> numeric_margins;
    std::string note;
};

struct ClassifyOptions {
    double tol = 1e-9;       // absolute interval-mass tolerance
    int grid_points = 512;   // log-spaced radii per ray
    double grid_lo = 1e-6;
    double grid_hi = 1e6;
};

// Condition (iv): the signed measure Delta = N - N^{(beta)} must be
// nonnegative on every radial interval and tail, and N needs a finite
// log-moment. Interval masses come from the exact identity
// Delta(a,b] = H(a) - H(b) with H(r) = r^beta int_r^inf u^{-beta} dM(u).
ClassificationReport check_iv(const LevyTriple& nu, double beta, const ClassifyOptions& = {});

// rho = [beta(b - b^beta), beta(S - S^beta), beta(N - N^beta)]; validated by
// the roundtrip I(rho) == J^beta(nu) on the probe grid (sup gap < 1e-5).
LevyTriple construct_witness(const LevyTriple& nu, double beta);

struct FactorizationResult {
    bool pass = false;
    double sup_gap = 0;
};
// Condition (ii) in exponent form: Phi_nu(y) = Psi_rho(y)/beta +
// int_0^1 Psi_rho(w y) dw/w on the probe grid.
FactorizationResult factorization_check(const LevyTriple& nu, const LevyTriple& rho, double beta);

struct CandidateResult {
    CharFn candidate;
    bool valid = false;  // result of check_iv; (iii) <=> (iv)
};
// Condition (iii): candidate exponent y -> beta[Phi(y) - beta int_0^1
// Phi(t y) t^{beta-1} dt].
CandidateResult check_iii(const LevyTriple& nu, double beta);

struct Corollary2Result {
    bool pass = false;
    double shift_margin = 0;
    double cov_margin = 0;
    double measure_margin = 0;
};
// The necessary-and-sufficient triple relations for J^beta(nu) = I(rho).
Corollary2Result corollary2_check(const LevyTriple& nu, const LevyTriple& rho, double beta,
                                  const ClassifyOptions& = {});

}  // namespace levy
