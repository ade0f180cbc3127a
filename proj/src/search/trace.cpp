#include "astardec/search/trace.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "astardec/common.hpp"
#include "astardec/search/cost.hpp"

namespace astardec::search {
namespace {

std::string_view kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::begin:
      return "begin";
    case EventKind::push:
      return "push";
    case EventKind::pop:
      return "pop";
    case EventKind::prune:
      return "prune";
    case EventKind::end:
      return "end";
  }
  return "unknown";
}

EventKind kind_from_name(const std::string& name) {
  for (auto k : {EventKind::begin, EventKind::push, EventKind::pop, EventKind::prune, EventKind::end}) {
    if (kind_name(k) == name) return k;
  }
  throw TraceError("unknown event kind '" + name + "'");
}

}  // namespace

nlohmann::json to_json(const TraceEvent& e) {
  nlohmann::json j;
  j["event"] = kind_name(e.kind);
  switch (e.kind) {
    case EventKind::begin:
      j["k"] = e.controls.k;
      j["d_max"] = e.controls.d_max;
      j["b_max"] = e.controls.b_max;
      j["tau_h"] = e.controls.tau_h;
      j["token_limit"] = e.controls.token_limit;
      if (e.controls.global_token_budget) j["global_token_budget"] = *e.controls.global_token_budget;
      break;
    case EventKind::push:
      j["id"] = e.id;
      if (e.parent) j["parent"] = *e.parent;
      j["depth"] = e.depth;
      j["g"] = e.g;
      j["h"] = e.h;
      j["f"] = e.f;
      j["goal"] = e.goal;
      if (e.truncated) j["truncated"] = true;
      break;
    case EventKind::pop:
      j["id"] = e.id;
      j["depth"] = e.depth;
      j["g"] = e.g;
      j["h"] = e.h;
      j["f"] = e.f;
      break;
    case EventKind::prune:
      j["parent"] = e.parent.value_or(0);
      j["depth"] = e.depth;
      j["h"] = e.h;
      j["reason"] = e.reason;
      break;
    case EventKind::end:
      j["reason"] = e.reason;
      j["expanded"] = e.expanded;
      j["inserted"] = e.inserted;
      j["id"] = e.id;
      break;
  }
  return j;
}

TraceEvent event_from_json(const nlohmann::json& j) {
  try {
    TraceEvent e;
    e.kind = kind_from_name(j.at("event").get<std::string>());
    switch (e.kind) {
      case EventKind::begin:
        e.controls.k = j.at("k").get<int>();
        e.controls.d_max = j.at("d_max").get<int>();
        e.controls.b_max = j.at("b_max").get<int>();
        e.controls.tau_h = j.at("tau_h").get<double>();
        e.controls.token_limit = j.at("token_limit").get<std::uint64_t>();
        if (j.contains("global_token_budget")) {
          e.controls.global_token_budget = j["global_token_budget"].get<std::uint64_t>();
        }
        break;
      case EventKind::push:
        e.id = j.at("id").get<StateId>();
        if (j.contains("parent")) e.parent = j["parent"].get<StateId>();
        e.depth = j.at("depth").get<std::uint32_t>();
        e.g = j.at("g").get<double>();
        e.h = j.at("h").get<double>();
        e.f = j.at("f").get<double>();
        e.goal = j.at("goal").get<bool>();
        e.truncated = j.value("truncated", false);
        break;
      case EventKind::pop:
        e.id = j.at("id").get<StateId>();
        e.depth = j.at("depth").get<std::uint32_t>();
        e.g = j.at("g").get<double>();
        e.h = j.at("h").get<double>();
        e.f = j.at("f").get<double>();
        break;
      case EventKind::prune:
        e.parent = j.at("parent").get<StateId>();
        e.depth = j.at("depth").get<std::uint32_t>();
        e.h = j.at("h").get<double>();
        e.reason = j.at("reason").get<std::string>();
        break;
      case EventKind::end:
        e.reason = j.at("reason").get<std::string>();
        e.expanded = j.at("expanded").get<std::uint64_t>();
        e.inserted = j.at("inserted").get<std::uint64_t>();
        e.id = j.at("id").get<StateId>();
        break;
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw TraceError(ex.what());
  }
}

void write_trace(std::ostream& out, const std::vector<TraceEvent>& events) {
  for (const auto& e : events) out << to_json(e).dump() << '\n';
}

std::string trace_to_string(const std::vector<TraceEvent>& events) {
  std::ostringstream out;
  write_trace(out, events);
  return out.str();
}

std::vector<TraceEvent> read_trace(std::istream& in) {
  std::vector<TraceEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& ex) {
      throw TraceError("line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const TraceError& ex) {
      throw TraceError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return events;
}

std::vector<TraceEvent> read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace " + path.string());
  return read_trace(in);
}

ReplayReport verify_trace(const std::vector<TraceEvent>& events) {
  ReplayReport report;
  report.events = events.size();

  struct Node {
    std::uint32_t depth;
    double g, h, f;
  };
  std::unordered_map<StateId, Node> nodes;
  std::map<std::uint32_t, int> per_depth;
  std::optional<ScaleControls> controls;
  std::optional<double> last_pop_f;

  auto flag = [&](std::size_t index, std::string message) {
    report.violations.push_back({index + 1, std::move(message)});
  };
  auto fmt = [](double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
  };

  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& e = events[i];
    switch (e.kind) {
      case EventKind::begin:
        controls = e.controls;
        break;

      case EventKind::push: {
        ++report.pushes;
        if (e.f != total_cost(e.g, e.h)) flag(i, "f != g + h (f=" + fmt(e.f) + ")");
        if (e.g < 0.0) flag(i, "negative g");
        if (e.h < 0.0 || e.h > 1.0) flag(i, "h outside [0, 1]");
        if (nodes.count(e.id)) flag(i, "duplicate state id " + std::to_string(e.id));
        if (!e.parent) {
          if (e.depth != 0 || e.g != 0.0) flag(i, "root must have depth 0 and g 0");
        } else {
          auto it = nodes.find(*e.parent);
          if (it == nodes.end()) {
            flag(i, "unknown parent " + std::to_string(*e.parent));
          } else {
            const Node& p = it->second;
            const double step = cost_increment(p.h, e.h);
            if (e.depth != p.depth + 1) flag(i, "depth is not parent depth + 1");
            if (e.g != p.g + step) flag(i, "g != parent g + max(0, h(parent) - h(child))");
            if (e.g < p.g) flag(i, "g decreased along an edge");
            if (!(p.h <= (e.g - p.g) + e.h)) flag(i, "inconsistent step: h(parent) > c + h(child)");
            if (e.f < p.f) {
              flag(i, "f decreased along an edge (" + fmt(p.f) + " -> " + fmt(e.f) + ")");
            } else if ((e.f == p.f) != (e.h <= p.h)) {
              flag(i, "f equality does not match h(child) <= h(parent)");
            }
            ++per_depth[e.depth];
            if (controls && per_depth[e.depth] > controls->b_max) {
              flag(i, "more than b_max insertions at depth " + std::to_string(e.depth));
            }
          }
        }
        nodes[e.id] = {e.depth, e.g, e.h, e.f};
        if (controls) {
          const auto bound = 1 + static_cast<std::uint64_t>(controls->b_max) * controls->d_max;
          if (report.pushes > bound) flag(i, "node bound 1 + b_max * d_max exceeded");
        }
        break;
      }

      case EventKind::pop: {
        ++report.pops;
        auto it = nodes.find(e.id);
        if (it == nodes.end()) {
          flag(i, "pop of unknown state " + std::to_string(e.id));
        } else if (it->second.f != e.f || it->second.g != e.g || it->second.h != e.h) {
          flag(i, "popped values differ from pushed values");
        }
        if (last_pop_f && e.f < *last_pop_f) {
          flag(i, "pop sequence decreased (" + fmt(*last_pop_f) + " -> " + fmt(e.f) + ")");
        }
        last_pop_f = e.f;
        break;
      }

      case EventKind::prune: {
        if (e.reason != "breadth" && e.reason != "threshold") flag(i, "unknown prune reason");
        if (e.parent) {
          auto it = nodes.find(*e.parent);
          if (it == nodes.end()) {
            flag(i, "prune under unknown parent");
          } else if (!(it->second.h <= cost_increment(it->second.h, e.h) + e.h)) {
            flag(i, "inconsistent step on pruned candidate");
          }
        }
        break;
      }

      case EventKind::end:
        if (!termination_from_string(e.reason)) flag(i, "unknown termination reason");
        if (e.inserted != report.pushes) flag(i, "end.inserted does not match push count");
        break;
    }
  }
  return report;
}

}  // namespace astardec::search
