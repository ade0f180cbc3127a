#pragma once

#include <string_view>
#include <vector>

#include "astardec/thought.hpp"

namespace astardec::policy {

inline constexpr std::string_view kFinalAnswerLead = "Therefore, the final answer is:";
inline constexpr std::string_view kTerminalSentence = "I hope it is correct.";

/// True when `text` carries the template's terminal sentence.
bool has_terminal_sentence(std::string_view text);

/// Split text into thoughts at "## Step <n>:" headers and at the final-answer
/// sentence. Joining the texts of the result reproduces the input exactly.
std::vector<Thought> segment(std::string_view full_text);

}  // namespace astardec::policy
