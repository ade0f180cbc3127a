#pragma once

#include <string>
#include <string_view>

namespace astardec::policy {

/// Chain-of-thought instructions shared by every method.
extern const std::string_view kCotInstructions;

/// Instructions followed by "\n\nProblem: <problem>\n\n". The trailing blank
/// line leaves the continuation positioned at the first step header.
std::string render_cot_prompt(std::string_view problem);

}  // namespace astardec::policy
