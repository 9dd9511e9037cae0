// ctxkit: contextuality analysis of PR-prism anaphora schemas.
//
//   ctxkit generate  --lexicon lex.json --articles grammatical --out masked.jsonl
//   ctxkit analyze   --probs probs.jsonl --out results.csv --summary summary.json
//   ctxkit check     --model model.json
//   ctxkit histogram --results results.csv --out hist.json
//   ctxkit bundle    --model model.json --possibilistic --out diagram.json
//   ctxkit builtin   pr_box --out pr_box.json
//
// Exit codes: 0 ok, 2 validation error, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctxkit/analysis.hpp"
#include "ctxkit/atomic_file.hpp"
#include "ctxkit/error.hpp"
#include "ctxkit/model_io.hpp"
#include "ctxkit/parallel.hpp"
#include "ctxkit/pipeline.hpp"
#include "ctxkit/schema.hpp"

using namespace ctxkit;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

AnalysisOptions options_from_env() {
  AnalysisOptions opts;
  if (const char* env = std::getenv("CTX_LP_TOL"); env && *env) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0)) {
      throw Error(ErrorCode::ParseError, fmt::format("CTX_LP_TOL must be a positive number, got \"{}\"", env));
    }
    opts.lp_tol = tol;
  }
  return opts;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return in;
}

int run_generate(const std::string& lexicon_path, const std::string& articles, const std::string& out) {
  const auto mode = article_mode_from_string(articles);
  const auto lexicon = read_lexicon_file(lexicon_path);
  std::string text;
  std::size_t n = 0;
  for_each_instance(lexicon, mode, [&](const SchemaInstance& inst) {
    text += instance_to_json(inst).dump();
    text += '\n';
    ++n;
  });
  write_file_atomically(out, text);
  std::cerr << fmt::format("wrote {} instances to {}\n", n, out);
  return 0;
}

std::unordered_map<std::string, InstanceMetadata> read_instances(const std::string& path) {
  std::unordered_map<std::string, InstanceMetadata> index;
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, fmt::format("{} line {}: {}", path, line_no, e.what()));
    }
    const auto inst = instance_from_json(doc);
    index[inst.instance_id] = InstanceMetadata{inst.nouns, inst.modifiers, std::string(to_string(inst.category))};
  }
  return index;
}

int run_analyze(const std::string& probs, const std::string& out, const std::string& summary,
                const std::string& instances, bool serial) {
  auto in = open_input(probs);
  const auto records = read_probability_records(in);
  auto rows = classify_all(records, serial ? Execution::Serial : Execution::Parallel);

  if (!instances.empty()) {
    const auto index = read_instances(instances);
    std::size_t unmatched = 0;
    for (auto& row : rows) {
      if (auto it = index.find(row.instance_id); it != index.end()) {
        row.metadata = it->second;
      } else {
        ++unmatched;
      }
    }
    if (unmatched > 0) {
      std::cerr << fmt::format("warning: {} of {} records have no generated instance; ids treated as opaque\n",
                               unmatched, rows.size());
    }
  }

  const auto agg = aggregate(rows);
  write_file_atomically(out, rows_to_csv(rows));
  write_file_atomically(summary, summary_to_json(agg).dump(2) + "\n");
  std::cerr << fmt::format("{} models, {} contextual (sf < 1/6)\n", agg.summary.total, agg.summary.contextual);
  return 0;
}

int run_check(const std::string& model_path, double norm_tol, std::size_t max_pivots) {
  const auto model = read_model_file(model_path);
  validate_model(model, norm_tol);
  auto opts = options_from_env();
  opts.max_pivots = max_pivots;
  const auto v = verdict(model, opts);
  std::cout << verdict_to_json(v).dump(2) << '\n';
  return 0;
}

int run_histogram(const std::string& results, const std::string& out) {
  const auto sfs = sf_column_from_csv(read_file(results));
  if (sfs.empty()) throw Error(ErrorCode::EmptyInput, results + " has no rows");
  write_file_atomically(out, histogram_to_json(histogram_of(sfs)).dump(2) + "\n");
  return 0;
}

int run_bundle(const std::string& model_path, bool possibilistic, const std::string& out, const std::string& format,
               double support_tol) {
  const auto model = read_model_file(model_path);
  validate_model(model, kIngestedNormTol);
  const auto diagram =
      possibilistic ? bundle_diagram(possibilistic_collapse(model, support_tol)) : bundle_diagram(model, support_tol);
  write_file_atomically(out, format == "dot" ? bundle_to_dot(diagram) : bundle_to_json(diagram).dump(2) + "\n");
  return 0;
}

int run_builtin(const std::string& name, const std::string& out) {
  const auto models = builtin_models();
  const auto it = models.find(name);
  if (it == models.end()) {
    std::string known;
    for (const auto& [k, _] : models) known += (known.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::ParseError, fmt::format("unknown builtin \"{}\" (known: {})", name, known));
  }
  if (out.empty()) {
    std::cout << model_to_json(it->second).dump(2) << '\n';
  } else {
    write_model_file(out, it->second);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality analysis of PR-prism anaphora schemas"};
  app.require_subcommand(1);

  std::string lexicon, articles = "grammatical", out, probs, summary, instances, model, results, format = "json";
  std::string builtin_name;
  bool serial = false, possibilistic = false;
  double norm_tol = kIngestedNormTol, support_tol = kDefaultSupportTol;
  std::size_t max_pivots = kDefaultMaxPivots;

  auto* gen = app.add_subcommand("generate", "Enumerate masked-sentence instances from a lexicon");
  gen->add_option("--lexicon", lexicon, "Lexicon JSON")->required();
  gen->add_option("--articles", articles, "Article mode")->check(CLI::IsMember({"grammatical", "paper-exact"}));
  gen->add_option("--out", out, "Masked-sentence JSON-lines")->required();

  auto* ana = app.add_subcommand("analyze", "Classify probability records and aggregate");
  ana->add_option("--probs", probs, "Probability JSON-lines")->required();
  ana->add_option("--out", out, "Results CSV")->required();
  ana->add_option("--summary", summary, "Summary JSON")->required();
  ana->add_option("--instances", instances, "Masked-sentence JSON-lines from generate, for metadata");
  ana->add_flag("--serial", serial, "Disable the parallel classifier");

  auto* chk = app.add_subcommand("check", "Print the contextuality verdict of a model");
  chk->add_option("--model", model, "Empirical model JSON")->required();
  chk->add_option("--norm-tol", norm_tol, "Row normalisation tolerance");
  chk->add_option("--max-pivots", max_pivots, "Simplex pivot cap per LP")->check(CLI::PositiveNumber);

  auto* his = app.add_subcommand("histogram", "Bin the sf column of a results CSV");
  his->add_option("--results", results, "Results CSV")->required();
  his->add_option("--out", out, "Histogram JSON")->required();

  auto* bun = app.add_subcommand("bundle", "Export the bundle diagram of a cyclic model");
  bun->add_option("--model", model, "Empirical model JSON")->required();
  bun->add_flag("--possibilistic", possibilistic, "Collapse to supports and omit probabilities");
  bun->add_option("--out", out, "Diagram file")->required();
  bun->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  bun->add_option("--support-tol", support_tol, "Entries above this count as possible");

  auto* bui = app.add_subcommand("builtin", "Write a built-in model as JSON");
  bui->add_option("name", builtin_name, "bell_chsh, pr_box, pr_box_chsh or pr_prism")->required();
  bui->add_option("--out", out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*gen) return run_generate(lexicon, articles, out);
    if (*ana) return run_analyze(probs, out, summary, instances, serial);
    if (*chk) return run_check(model, norm_tol, max_pivots);
    if (*his) return run_histogram(results, out);
    if (*bun) return run_bundle(model, possibilistic, out, format, support_tol);
    if (*bui) return run_builtin(builtin_name, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
