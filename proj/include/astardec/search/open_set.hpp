#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace astardec::search {

/// Min-priority queue over (f, h, insertion sequence).
class OpenSet {
 public:
  struct Entry {
    double f;
    double h;
    std::uint64_t sequence;
    std::size_t payload;
  };

  /// Returns the insertion sequence number assigned to the entry.
  std::uint64_t push(double f, double h, std::size_t payload);
  Entry pop();
  const Entry& top() const { return heap_.top(); }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.h != b.h) return a.h > b.h;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace astardec::search
