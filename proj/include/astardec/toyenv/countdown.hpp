#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "astardec/policy/policy.hpp"
#include "json.hpp"

namespace astardec::toyenv {

/// Combine the numbers with +, -, *, / (intermediate results stay positive
/// integers, division only when exact, each number used once) until some
/// operation produces the target.
struct CountdownSpec {
  std::vector<std::int64_t> numbers;
  std::int64_t target = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static CountdownSpec from_json(const nlohmann::json& j);
};

std::string countdown_prompt(const CountdownSpec& spec);

/// Numbers still available after the last step in `text` ("(left: ...)"),
/// or the spec's numbers when no step has been taken.
std::vector<std::int64_t> countdown_available(const CountdownSpec& spec, std::string_view text);

/// Every application of one operator to two available numbers, as thoughts
/// like "2*3=6 (left: 6)". Pairs in index order, operators in the order
/// + - * /. Truncated to k. A result equal to the target carries EOS.
std::vector<policy::Candidate> countdown_expand(const CountdownSpec& spec,
                                                const std::vector<std::int64_t>& available, int k);

class CountdownPolicy : public policy::Policy {
 public:
  explicit CountdownPolicy(CountdownSpec spec);

  std::vector<policy::Candidate> sample(std::string_view prefix, int k,
                                        const policy::SamplingParams& params) override;

 private:
  CountdownSpec spec_;
};

/// Exhaustive enumeration: can any sequence of operations produce the target?
bool countdown_solvable(const CountdownSpec& spec);

}  // namespace astardec::toyenv
