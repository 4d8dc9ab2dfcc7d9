// JSON wire formats shared by all modules and the CLI: distribution
// descriptors (families or explicit triples), map specs, reports.
#pragma once

#include "levy/classify.hpp"
#include "levy/ecf.hpp"

// vendored single-header nlohmann/json lives at vendor/json.hpp
#include <json.hpp>

namespace levy {

using json = nlohmann::json;

// {"family": ...} or {"triple": {...}}.
LevyTriple parse_distribution(const json& j);

// Wire form is always the explicit triple; closure densities are sampled
// onto a log grid with fitted tail exponents.
json distribution_to_json(const LevyTriple& t);

struct MapRequest {
    enum class Kind { jbeta, imap, general } kind = Kind::general;
    double beta = 1.0;
    IntegralMapSpec spec;
};
// Accepts {"transform":"jbeta","beta":b}, {"transform":"imap"} or a full
// {"kernel":...,"time_change":...,"interval":[a,b|"inf"]} spec; the two
// closed-form maps are recognized either way.
MapRequest parse_map_spec(const json& j);
json map_spec_to_json(const IntegralMapSpec& s);

json classification_to_json(const ClassificationReport& r);
json ecf_report_to_json(const EcfReport& r);

// A CharFn target for `verify`: a distribution, {"dist":...,"map":...} or
// {"maflp":{"dist":...,"alpha":...,"t":...}}.
CharFn parse_target(const json& j);

}  // namespace levy
