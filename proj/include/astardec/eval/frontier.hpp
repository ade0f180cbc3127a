#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "astardec/eval/benchmark.hpp"

namespace astardec::eval {

struct FrontierRow {
  std::string method;
  std::uint64_t budget = 0;
  double accuracy = 0.0;
  double mean_tokens = 0.0;
  double mean_prm_passes = 0.0;
};

/// One row per summary, sorted by (method, budget).
std::vector<FrontierRow> export_frontier(const std::vector<BenchmarkSummary>& summaries);

/// Header "method,budget,accuracy,mean_tokens,mean_prm_passes".
void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows);

}  // namespace astardec::eval
