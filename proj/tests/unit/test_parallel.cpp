#include "doctest.h"

#include <random>

#include "ctxkit/error.hpp"
#include "ctxkit/parallel.hpp"

using namespace ctxkit;

TEST_CASE("parallel classification matches the serial reference") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1e-4, 1.0);
  std::vector<ProbabilityRecord> records(5000);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].instance_id = "adjective:cat:dog:a:b:" + std::to_string(i);
    for (auto& pair : records[i].raw_scores) pair = {u(rng), u(rng)};
  }
  const auto serial = classify_all(records, Execution::Serial);
  const auto parallel = classify_all(records, Execution::Parallel);
  CHECK(rows_to_csv(serial) == rows_to_csv(parallel));
}

TEST_CASE("parallel verdicts match the serial reference") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  std::vector<EmpiricalModel> models{bell_chsh(), pr_box_chsh()};
  for (int i = 0; i < 40; ++i) models.push_back(pr_prism({eps(rng), eps(rng), eps(rng)}));
  const auto a = verdict_all(models, {}, Execution::Serial);
  const auto b = verdict_all(models, {}, Execution::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].cf == b[i].cf);
    CHECK(a[i].sf == b[i].sf);
    CHECK(a[i].signalling_aware_contextual == b[i].signalling_aware_contextual);
    CHECK(a[i].strongly_contextual == b[i].strongly_contextual);
  }
}

TEST_CASE("the first failing record is reported, whichever thread hit it") {
  std::vector<ProbabilityRecord> records(1000, ProbabilityRecord{"ok", {{{0.1, 0.2}, {0.3, 0.3}, {0.5, 0.5}}}});
  records[700].raw_scores[1] = {0.0, 0.0};
  records[900].raw_scores[2] = {0.0, 0.0};
  records[700].instance_id = "bad-700";
  for (auto mode : {Execution::Serial, Execution::Parallel}) {
    try {
      classify_all(records, mode);
      FAIL("expected ZeroMass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroMass);
    }
  }
  CHECK(worker_threads() >= 1);
}
