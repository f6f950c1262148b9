#ifndef ERGOKIT_JSON_IO_HPP
#define ERGOKIT_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "ergokit/invariant.hpp"
#include "ergokit/simulate.hpp"
#include "ergokit/structure.hpp"

namespace ergokit {

// Kernel wire format:
//   { "n": int, "format": "dense",    "rows":    [[...], ...], "labels": [...]? }
//   { "n": int, "format": "triplets", "entries": [[i,j,p], ...], "labels": [...]? }
// Triplet entries not listed are exactly zero; duplicate (i,j) pairs are
// rejected. Parsing validates through the strict kernel contract.
StochasticKernel kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const StochasticKernel& p);

ProbMeasure measure_from_json(const nlohmann::json& j, int n);
nlohmann::json measure_to_json(const ProbMeasure& mu);

StateFunction function_from_json(const nlohmann::json& j, int n);
nlohmann::json function_to_json(const StateFunction& f);

nlohmann::json state_set_to_json(const StateSet& s);  // ascending indices
StateSet state_set_from_json(const nlohmann::json& j, int universe);

// {"verdict": "indecomposable"|"decomposable", "witness": {"A":[...],"B":[...]}|null,
//  "closed_classes": [[...],...], "transient": [...]}
nlohmann::json analysis_to_json(const ClassDecomposition& dec,
                                const IndecomposabilityCertificate& cert);
IndecomposabilityCertificate indecomposability_from_json(
    const nlohmann::json& j, int n);

// {"verdict": "unique"|"multiple", "measure": [...]|null, "ergodic": bool|null,
//  "witness": {"mu1","mu2","separator","density","B1","B2"}|null}
nlohmann::json uniqueness_to_json(const UniquenessCertificate& cert);
UniquenessCertificate uniqueness_from_json(const nlohmann::json& j, int n);

nlohmann::json decomposition_to_json(const ErgodicDecomposition& dec);
nlohmann::json stability_to_json(const StabilityReport& report);

// CSV artifacts. Floats print shortest-round-trip, rows end with '\n'.
std::string curve_to_csv(const std::vector<CurvePoint>& curve);  // header n,tv
std::string doeblin_to_csv(const DoeblinReport& report);  // header n,tv,bound

// Shortest-round-trip decimal form of a double (the same rendering JSON
// output uses), for deterministic CSV.
std::string format_double(double x);

nlohmann::json load_json_file(const std::string& path);  // parse_error on failure

}  // namespace ergokit

#endif  // ERGOKIT_JSON_IO_HPP
