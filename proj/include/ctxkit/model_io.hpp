#pragma once

// JSON encodings of models and verdicts.
//
// Model file:
//   {"observables":[...], "outcomes":[...], "contexts":[[...],...],
//    "tables":[[p,...],...]}
// where tables[i] lists context i's probabilities in lexicographic tuple
// order. Doubles are written in shortest round-trip form, so a model read
// back from its own serialisation has bit-identical rows.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ctxkit/analysis.hpp"
#include "ctxkit/scenario.hpp"

namespace ctxkit {

/// Throws ParseError on schema problems, or the scenario/shape errors of
/// MeasurementScenario::create and EmpiricalModel.
EmpiricalModel model_from_json(const nlohmann::json& doc);
nlohmann::ordered_json model_to_json(const EmpiricalModel& model);

EmpiricalModel read_model_file(const std::filesystem::path& path);
void write_model_file(const std::filesystem::path& path, const EmpiricalModel& model);

nlohmann::ordered_json verdict_to_json(const ContextualityVerdict& verdict);

}  // namespace ctxkit
