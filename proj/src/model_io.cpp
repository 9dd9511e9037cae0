#include "ctxkit/model_io.hpp"

#include <charconv>

#include "ctxkit/atomic_file.hpp"
#include "ctxkit/error.hpp"

namespace ctxkit {

namespace {

using nlohmann::json;

std::string label_from_json(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::ParseError, std::string(what) + " labels must be strings or integers");
}

// Outcome labels that read as plain integers are written back as numbers.
nlohmann::ordered_json label_to_json(const std::string& label) {
  long long value = 0;
  const auto* first = label.data();
  const auto* last = label.data() + label.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc{} && ptr == last && std::to_string(value) == label) return value;
  return label;
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_array()) throw Error(ErrorCode::ParseError, std::string("field \"") + key + "\" must be an array");
  return v;
}

}  // namespace

EmpiricalModel model_from_json(const json& doc) {
  std::vector<std::string> observables;
  for (const auto& v : field(doc, "observables")) observables.push_back(label_from_json(v, "observable"));
  std::vector<std::string> outcomes;
  for (const auto& v : field(doc, "outcomes")) outcomes.push_back(label_from_json(v, "outcome"));
  std::vector<std::vector<std::string>> cover;
  for (const auto& ctx : field(doc, "contexts")) {
    if (!ctx.is_array()) throw Error(ErrorCode::ParseError, "each context must be an array");
    std::vector<std::string> labels;
    for (const auto& v : ctx) labels.push_back(label_from_json(v, "observable"));
    cover.push_back(std::move(labels));
  }
  std::vector<std::vector<double>> tables;
  for (const auto& row : field(doc, "tables")) {
    if (!row.is_array()) throw Error(ErrorCode::ParseError, "each table must be an array");
    std::vector<double> values;
    for (const auto& p : row) {
      if (!p.is_number()) throw Error(ErrorCode::ParseError, "probabilities must be numbers");
      values.push_back(p.get<double>());
    }
    tables.push_back(std::move(values));
  }
  auto scenario = MeasurementScenario::create(std::move(observables), cover, std::move(outcomes));
  return EmpiricalModel(std::move(scenario), std::move(tables));
}

nlohmann::ordered_json model_to_json(const EmpiricalModel& model) {
  const auto& s = model.scenario();
  nlohmann::ordered_json doc;
  doc["observables"] = s.observables();
  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const auto& o : s.outcomes()) outcomes.push_back(label_to_json(o));
  doc["outcomes"] = std::move(outcomes);
  nlohmann::ordered_json contexts = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < s.context_count(); ++c) contexts.push_back(s.context_labels(c));
  doc["contexts"] = std::move(contexts);
  doc["tables"] = model.tables();
  return doc;
}

EmpiricalModel read_model_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

void write_model_file(const std::filesystem::path& path, const EmpiricalModel& model) {
  write_file_atomically(path, model_to_json(model).dump(2) + "\n");
}

nlohmann::ordered_json verdict_to_json(const ContextualityVerdict& v) {
  nlohmann::ordered_json doc;
  doc["cf"] = v.cf;
  doc["sf"] = v.sf;
  doc["contexts"] = v.context_count;
  doc["nonsignalling"] = v.nonsignalling;
  doc["logically_contextual"] = v.logically_contextual;
  doc["strongly_contextual"] = v.strongly_contextual;
  doc["signalling_aware_contextual"] = v.signalling_aware_contextual;
  if (v.nonsignalling_contextual) doc["nonsignalling_contextual"] = *v.nonsignalling_contextual;
  return doc;
}

}  // namespace ctxkit
