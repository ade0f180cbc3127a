#pragma once

#include <cstdint>
#include <string>

namespace astardec {

/// One reasoning step of a trajectory.
struct Thought {
  std::string text;
  std::uint32_t token_count = 0;
  bool contains_eos = false;

  bool operator==(const Thought&) const = default;
};

}  // namespace astardec
