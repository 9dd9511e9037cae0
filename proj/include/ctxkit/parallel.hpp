#pragma once

// Batch kernels. Serial is the reference path; Parallel splits independent
// items across OpenMP threads and must produce identical results.

#include <span>
#include <vector>

#include "ctxkit/analysis.hpp"
#include "ctxkit/pipeline.hpp"

namespace ctxkit {

enum class Execution { Serial, Parallel };

std::vector<AnalysisRow> classify_all(std::span<const ProbabilityRecord> records,
                                      Execution mode = Execution::Parallel);

/// One verdict per model. The first exception thrown by any item (lowest
/// index) is rethrown after the loop.
std::vector<ContextualityVerdict> verdict_all(std::span<const EmpiricalModel> models,
                                              const AnalysisOptions& options = {},
                                              Execution mode = Execution::Parallel);

int worker_threads();

}  // namespace ctxkit
