#include "astardec/search/open_set.hpp"

#include <stdexcept>

namespace astardec::search {

std::uint64_t OpenSet::push(double f, double h, std::size_t payload) {
  const std::uint64_t seq = next_sequence_++;
  heap_.push({f, h, seq, payload});
  return seq;
}

OpenSet::Entry OpenSet::pop() {
  if (heap_.empty()) throw std::logic_error("OpenSet::pop on empty set");
  Entry e = heap_.top();
  heap_.pop();
  return e;
}

}  // namespace astardec::search
