#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "astardec/search/types.hpp"
#include "json.hpp"

namespace astardec::search {

enum class EventKind { begin, push, pop, prune, end };

/// One line of a search trace. Which fields are meaningful depends on `kind`:
///
///   begin  k, d_max, b_max, tau_h, token_limit
///   push   id, parent (absent for the root), depth, g, h, f, goal, truncated
///   pop    id, depth, g, h, f
///   prune  parent, depth, h, reason ("breadth" | "threshold")
///   end    reason (termination), expanded, inserted, id (final state)
struct TraceEvent {
  EventKind kind = EventKind::push;
  StateId id = 0;
  std::optional<StateId> parent;
  std::uint32_t depth = 0;
  double g = 0.0;
  double h = 0.0;
  double f = 0.0;
  bool goal = false;
  bool truncated = false;
  std::string reason;
  ScaleControls controls;
  std::uint64_t expanded = 0;
  std::uint64_t inserted = 0;

  bool operator==(const TraceEvent&) const = default;
};

nlohmann::json to_json(const TraceEvent& event);
/// Throws TraceError on a malformed record.
TraceEvent event_from_json(const nlohmann::json& j);

/// Line-delimited JSON, one event per line.
void write_trace(std::ostream& out, const std::vector<TraceEvent>& events);
std::string trace_to_string(const std::vector<TraceEvent>& events);
/// Throws TraceError on a corrupt line (message names the 1-based line).
std::vector<TraceEvent> read_trace(std::istream& in);
std::vector<TraceEvent> read_trace_file(const std::filesystem::path& path);

struct Violation {
  std::size_t line = 0;  ///< 1-based line of the offending record
  std::string message;
};

struct ReplayReport {
  std::size_t events = 0;
  std::size_t pushes = 0;
  std::size_t pops = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Re-check the search invariants over a recorded trace: f = g + h on every
/// push, exact step costs, consistency h(parent) <= c + h(child), f
/// monotonicity along edges (equality iff h(child) <= h(parent)), a
/// non-decreasing pop sequence, per-depth breadth caps, and the overall node
/// bound 1 + b_max * d_max.
ReplayReport verify_trace(const std::vector<TraceEvent>& events);

}  // namespace astardec::search
