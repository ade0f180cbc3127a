#include "astardec/policy/prompt.hpp"

#include "astardec/common.hpp"

namespace astardec::policy {

const std::string_view kCotInstructions =
    "Solve the following math problem efficiently and clearly:\n"
    "\n"
    "- For simple problems (2 steps or fewer):\n"
    "Provide a concise solution with minimal explanation.\n"
    "\n"
    "- For complex problems (3 steps or more):\n"
    "Use this step-by-step format:\n"
    "\n"
    "## Step 1: [Concise description]\n"
    "[Brief explanation and calculations]\n"
    "\n"
    "## Step 2: [Concise description]\n"
    "[Brief explanation and calculations]\n"
    "\n"
    "...\n"
    "\n"
    "Regardless of the approach, always conclude with:\n"
    "\n"
    "Therefore, the final answer is: boxed{answer}. I hope it is correct.\n"
    "\n"
    "Where [answer] is just the final number or expression that solves the problem.";

std::string render_cot_prompt(std::string_view problem) {
  if (problem.empty()) throw ConfigError("render_cot_prompt: empty problem");
  std::string out(kCotInstructions);
  out += "\n\nProblem: ";
  out += problem;
  out += "\n\n";
  return out;
}

}  // namespace astardec::policy
