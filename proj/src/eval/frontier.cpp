#include "astardec/eval/frontier.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace astardec::eval {

std::vector<FrontierRow> export_frontier(const std::vector<BenchmarkSummary>& summaries) {
  std::vector<FrontierRow> rows;
  rows.reserve(summaries.size());
  for (const auto& s : summaries) {
    rows.push_back({std::string(to_string(s.method)), s.budget, s.accuracy, s.mean_tokens, s.mean_prm_passes});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const FrontierRow& a, const FrontierRow& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.budget < b.budget;
  });
  return rows;
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows) {
  out << "method,budget,accuracy,mean_tokens,mean_prm_passes\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{:.6f},{:.3f},{:.3f}\n", r.method, r.budget, r.accuracy, r.mean_tokens,
                       r.mean_prm_passes);
  }
}

}  // namespace astardec::eval
