#include "ctxkit/parallel.hpp"

#include <exception>

#include <omp.h>

namespace ctxkit {

namespace {

// Runs fn(i) for every index, capturing exceptions per item so none escape
// the parallel region. The lowest failing index wins, as in a serial loop.
template <typename Fn>
void for_each_index(std::size_t n, Execution mode, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
  if (mode == Execution::Serial) {
    for (long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<AnalysisRow> classify_all(std::span<const ProbabilityRecord> records, Execution mode) {
  std::vector<AnalysisRow> rows(records.size());
  for_each_index(records.size(), mode, [&](std::size_t i) { rows[i] = classify(records[i]); });
  return rows;
}

std::vector<ContextualityVerdict> verdict_all(std::span<const EmpiricalModel> models, const AnalysisOptions& options,
                                              Execution mode) {
  std::vector<ContextualityVerdict> out(models.size());
  for_each_index(models.size(), mode, [&](std::size_t i) { out[i] = verdict(models[i], options); });
  return out;
}

int worker_threads() { return omp_get_max_threads(); }

}  // namespace ctxkit
