#include "ctxkit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "ctxkit/analysis.hpp"
#include "ctxkit/csv.hpp"
#include "ctxkit/error.hpp"

namespace ctxkit {

using nlohmann::json;

ProbabilityRecord record_from_json(const json& doc) {
  ProbabilityRecord rec;
  if (!doc.is_object()) throw Error(ErrorCode::InvalidRecord, "record must be a JSON object");
  if (!doc.contains("instance_id") || !doc["instance_id"].is_string()) {
    throw Error(ErrorCode::InvalidRecord, "missing string \"instance_id\"");
  }
  rec.instance_id = doc["instance_id"].get<std::string>();
  if (!doc.contains("raw_scores") || !doc["raw_scores"].is_array() || doc["raw_scores"].size() != 3) {
    throw Error(ErrorCode::InvalidRecord, rec.instance_id + ": \"raw_scores\" must hold exactly 3 pairs");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& pair = doc["raw_scores"][i];
    if (!pair.is_array() || pair.size() != 2) {
      throw Error(ErrorCode::InvalidRecord, fmt::format("{}: score {} is not a pair", rec.instance_id, i));
    }
    for (std::size_t k = 0; k < 2; ++k) {
      if (!pair[k].is_number()) throw Error(ErrorCode::InvalidRecord, rec.instance_id + ": non-numeric score");
      const double p = pair[k].get<double>();
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidRecord, fmt::format("{}: score {} outside (0, 1]", rec.instance_id, p));
      }
      rec.raw_scores[i][k] = p;
    }
  }
  return rec;
}

nlohmann::ordered_json record_to_json(const ProbabilityRecord& record) {
  nlohmann::ordered_json doc;
  doc["instance_id"] = record.instance_id;
  doc["raw_scores"] = record.raw_scores;
  return doc;
}

std::vector<ProbabilityRecord> read_probability_records(std::istream& in) {
  std::vector<ProbabilityRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: {}", line_no, e.what()));
    }
    try {
      records.push_back(record_from_json(doc));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return records;
}

std::pair<double, double> normalize(double p_first, double p_second) {
  const double mass = p_first + p_second;
  if (!(mass > 0.0) || p_first < 0.0 || p_second < 0.0) {
    throw Error(ErrorCode::ZeroMass, fmt::format("cannot normalise ({}, {})", p_first, p_second));
  }
  const double first = p_first / mass;
  return {first, 1.0 - first};
}

std::array<double, 3> first_noun_probabilities(const ProbabilityRecord& record) {
  std::array<double, 3> p{};
  for (std::size_t i = 0; i < 3; ++i) p[i] = normalize(record.raw_scores[i][0], record.raw_scores[i][1]).first;
  return p;
}

EmpiricalModel build_model(const ProbabilityRecord& record) {
  const auto p = first_noun_probabilities(record);
  return EmpiricalModel(minimal_scenario(), {{p[0], 0.0, 0.0, 1.0 - p[0]},
                                             {p[1], 0.0, 0.0, 1.0 - p[1]},
                                             {0.0, p[2], 1.0 - p[2], 0.0}});
}

std::optional<InstanceMetadata> parse_instance_id(const std::string& instance_id) {
  std::vector<std::string> parts;
  std::stringstream ss(instance_id);
  std::string part;
  while (std::getline(ss, part, ':')) {
    std::replace(part.begin(), part.end(), '_', ' ');
    parts.push_back(part);
  }
  if (parts.size() != 6 || instance_id.back() == ':') return std::nullopt;
  return InstanceMetadata{{parts[1], parts[2]}, {parts[3], parts[4], parts[5]}, parts[0]};
}

AnalysisRow classify(const ProbabilityRecord& record) {
  AnalysisRow row;
  row.instance_id = record.instance_id;
  row.metadata = parse_instance_id(record.instance_id);
  row.p = first_noun_probabilities(record);
  for (std::size_t i = 0; i < 3; ++i) row.eps[i] = 2.0 * row.p[i] - 1.0;
  row.sf = pr_like_sf(row.eps);
  row.contextual = row.sf < kContextualSfThreshold;
  return row;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t Histogram::contextual_bins() const {
  // Bin k is contextual iff its right edge (k+1)/bins <= 1/6.
  std::size_t k = 0;
  while (k < bins() && (k + 1) * 6 <= bins()) ++k;
  return k;
}

std::size_t histogram_bin(double sf, std::size_t bins) {
  if (!(sf >= 0.0 && sf <= 1.0)) throw Error(ErrorCode::InvalidRecord, fmt::format("sf {} outside [0, 1]", sf));
  const auto edge = [bins](std::size_t k) { return static_cast<double>(k) / static_cast<double>(bins); };
  std::size_t bin = std::min(bins - 1, static_cast<std::size_t>(std::floor(sf * static_cast<double>(bins))));
  while (bin > 0 && sf < edge(bin)) --bin;
  while (bin + 1 < bins && sf >= edge(bin + 1)) ++bin;
  return bin;
}

Histogram histogram_of(std::span<const double> sfs) {
  Histogram h;
  for (double sf : sfs) ++h.counts[histogram_bin(sf, h.bins())];
  return h;
}

Aggregate aggregate(std::span<const AnalysisRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no analysis rows to aggregate");
  Aggregate agg;
  std::map<std::string, std::size_t> pair_index;
  for (const auto& row : rows) {
    ++agg.histogram.counts[histogram_bin(row.sf, agg.histogram.bins())];
    ++agg.summary.total;
    if (row.contextual) ++agg.summary.contextual;

    PairSummary key{"unknown", {"", ""}, 0, 0};
    if (row.metadata) {
      key.category = row.metadata->category;
      key.nouns = row.metadata->nouns;
      std::sort(key.nouns.begin(), key.nouns.end());
    }
    const std::string id = key.category + '\n' + key.nouns[0] + '\n' + key.nouns[1];
    auto [it, inserted] = pair_index.emplace(id, agg.summary.per_pair.size());
    if (inserted) agg.summary.per_pair.push_back(key);
    auto& entry = agg.summary.per_pair[it->second];
    ++entry.total;
    if (row.contextual) ++entry.contextual;
  }
  return agg;
}

nlohmann::ordered_json histogram_to_json(const Histogram& h) {
  nlohmann::ordered_json doc;
  std::vector<double> edges;
  for (std::size_t k = 0; k < h.bins(); ++k) edges.push_back(h.left_edge(k));
  doc["bins"] = h.bins();
  doc["left_edges"] = edges;
  doc["counts"] = h.counts;
  doc["contextual_bins"] = h.contextual_bins();
  doc["total"] = h.total();
  return doc;
}

nlohmann::ordered_json summary_to_json(const Aggregate& agg) {
  nlohmann::ordered_json doc;
  doc["total"] = agg.summary.total;
  doc["contextual"] = agg.summary.contextual;
  doc["contextual_threshold"] = kContextualSfThreshold;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : agg.summary.per_pair) {
    nlohmann::ordered_json entry;
    entry["category"] = p.category;
    entry["nouns"] = p.nouns;
    entry["total"] = p.total;
    entry["contextual"] = p.contextual;
    pairs.push_back(std::move(entry));
  }
  doc["per_pair"] = std::move(pairs);
  doc["histogram"] = histogram_to_json(agg.histogram);
  return doc;
}

std::string rows_to_csv(std::span<const AnalysisRow> rows) {
  std::string out = "instance_id,noun1,noun2,x1,x2,x3,category,P1,P2,P3,eps1,eps2,eps3,sf,contextual\n";
  for (const auto& row : rows) {
    std::vector<std::string> fields{row.instance_id};
    if (row.metadata) {
      const auto& m = *row.metadata;
      fields.insert(fields.end(), {m.nouns[0], m.nouns[1], m.modifiers[0], m.modifiers[1], m.modifiers[2], m.category});
    } else {
      fields.insert(fields.end(), 6, std::string{});
    }
    for (double v : row.p) fields.push_back(fmt::format("{:.15g}", v));
    for (double v : row.eps) fields.push_back(fmt::format("{:.15g}", v));
    fields.push_back(fmt::format("{:.15g}", row.sf));
    fields.push_back(row.contextual ? "true" : "false");
    out += csv::join_row(fields);
    out += '\n';
  }
  return out;
}

std::vector<double> sf_column_from_csv(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw Error(ErrorCode::ParseError, "results CSV is empty");
  const auto& header = rows.front();
  const auto it = std::find(header.begin(), header.end(), "sf");
  if (it == header.end()) throw Error(ErrorCode::ParseError, "results CSV has no \"sf\" column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> sfs;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (col >= rows[r].size()) throw Error(ErrorCode::ParseError, fmt::format("CSV row {} is short", r + 1));
    try {
      std::size_t used = 0;
      const double v = std::stod(rows[r][col], &used);
      if (used != rows[r][col].size()) throw std::invalid_argument("trailing characters");
      sfs.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, fmt::format("CSV row {}: bad sf \"{}\"", r + 1, rows[r][col]));
    }
  }
  return sfs;
}

namespace {

std::vector<std::size_t> cycle_order(const MeasurementScenario& s) {
  std::vector<std::size_t> degree(s.observable_count(), 0);
  for (const auto& ctx : s.contexts()) {
    if (ctx.size() != 2) throw Error(ErrorCode::NotCyclicScenario, "every context must hold two observables");
    ++degree[ctx[0]];
    ++degree[ctx[1]];
  }
  if (std::any_of(degree.begin(), degree.end(), [](std::size_t d) { return d != 2; })) {
    throw Error(ErrorCode::NotCyclicScenario, "every observable must lie in exactly two contexts");
  }
  std::vector<bool> used(s.context_count(), false);
  std::vector<std::size_t> cycle{0};
  std::size_t current = 0;
  for (std::size_t step = 0; step < s.context_count(); ++step) {
    std::size_t next_ctx = s.context_count();
    for (std::size_t c = 0; c < s.context_count(); ++c) {
      if (!used[c] && (s.context(c)[0] == current || s.context(c)[1] == current)) {
        next_ctx = c;
        break;
      }
    }
    if (next_ctx == s.context_count()) break;
    used[next_ctx] = true;
    const auto ctx = s.context(next_ctx);
    current = ctx[0] == current ? ctx[1] : ctx[0];
    if (current != 0) cycle.push_back(current);
  }
  if (cycle.size() != s.observable_count() || std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorCode::NotCyclicScenario, "the contexts do not form a single cycle");
  }
  return cycle;
}

BundleDiagram build_bundle(const PossibilisticModel& poss, const EmpiricalModel* model) {
  const auto& s = poss.scenario();
  BundleDiagram d;
  d.observables = s.observables();
  d.outcomes = s.outcomes();
  d.base_cycle = cycle_order(s);
  for (const auto& ctx : s.contexts()) d.base_edges.push_back({ctx[0], ctx[1]});
  for (std::size_t obs = 0; obs < s.observable_count(); ++obs) {
    for (std::size_t o = 0; o < s.outcome_count(); ++o) d.fiber_vertices.push_back({obs, o});
  }
  for (std::size_t c = 0; c < s.context_count(); ++c) {
    const auto ctx = s.context(c);
    const std::size_t first_edge = d.fiber_edges.size();
    for (std::size_t t = 0; t < s.tuple_count(c); ++t) {
      if (!poss.possible(c, t)) continue;
      const auto tuple = tuple_at(t, 2, s.outcome_count());
      FiberEdge e{c, ctx[0], tuple[0], ctx[1], tuple[1], std::nullopt};
      if (model) e.probability = model->row(c)[t];
      d.fiber_edges.push_back(e);
    }
    for (std::size_t i = first_edge; i < d.fiber_edges.size(); ++i) {
      for (std::size_t j = i + 1; j < d.fiber_edges.size(); ++j) {
        const auto& a = d.fiber_edges[i];
        const auto& b = d.fiber_edges[j];
        const auto da = static_cast<long>(a.from_outcome) - static_cast<long>(b.from_outcome);
        const auto db = static_cast<long>(a.to_outcome) - static_cast<long>(b.to_outcome);
        if (da * db < 0) d.crossing_pairs.push_back({i, j});
      }
    }
  }
  return d;
}

}  // namespace

BundleDiagram bundle_diagram(const PossibilisticModel& poss) { return build_bundle(poss, nullptr); }

BundleDiagram bundle_diagram(const EmpiricalModel& model, double support_tol) {
  const auto poss = possibilistic_collapse(model, support_tol);
  return build_bundle(poss, &model);
}

nlohmann::ordered_json bundle_to_json(const BundleDiagram& d) {
  auto vertex = [&](std::size_t obs, std::size_t o) {
    nlohmann::ordered_json v;
    v["observable"] = d.observables[obs];
    v["outcome"] = d.outcomes[o];
    return v;
  };
  nlohmann::ordered_json doc;
  nlohmann::ordered_json base;
  std::vector<std::string> cycle;
  for (std::size_t obs : d.base_cycle) cycle.push_back(d.observables[obs]);
  base["vertices"] = cycle;
  nlohmann::ordered_json base_edges = nlohmann::ordered_json::array();
  for (const auto& e : d.base_edges) base_edges.push_back({d.observables[e[0]], d.observables[e[1]]});
  base["edges"] = std::move(base_edges);
  doc["base"] = std::move(base);

  nlohmann::ordered_json fiber;
  nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
  for (const auto& v : d.fiber_vertices) vertices.push_back(vertex(v[0], v[1]));
  fiber["vertices"] = std::move(vertices);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : d.fiber_edges) {
    nlohmann::ordered_json edge;
    edge["context"] = e.context;
    edge["from"] = vertex(e.from_observable, e.from_outcome);
    edge["to"] = vertex(e.to_observable, e.to_outcome);
    if (e.probability) edge["probability"] = *e.probability;
    edges.push_back(std::move(edge));
  }
  fiber["edges"] = std::move(edges);
  fiber["crossing_pairs"] = d.crossing_pairs;
  doc["fiber"] = std::move(fiber);
  return doc;
}

std::string bundle_to_dot(const BundleDiagram& d) {
  std::string out = "graph bundle {\n";
  for (std::size_t obs : d.base_cycle) out += fmt::format("  \"{}\" [shape=point, xlabel=\"{}\"];\n", d.observables[obs], d.observables[obs]);
  for (const auto& e : d.base_edges) out += fmt::format("  \"{}\" -- \"{}\";\n", d.observables[e[0]], d.observables[e[1]]);
  for (const auto& v : d.fiber_vertices) {
    out += fmt::format("  \"{}:{}\" [label=\"{}\"];\n", d.observables[v[0]], d.outcomes[v[1]], d.outcomes[v[1]]);
  }
  for (const auto& e : d.fiber_edges) {
    out += fmt::format("  \"{}:{}\" -- \"{}:{}\"", d.observables[e.from_observable], d.outcomes[e.from_outcome],
                       d.observables[e.to_observable], d.outcomes[e.to_outcome]);
    if (e.probability) out += fmt::format(" [label=\"{:.4g}\"]", *e.probability);
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace ctxkit
