#include "astardec/policy/segment.hpp"

#include <algorithm>
#include <cctype>

#include "astardec/common.hpp"

namespace astardec::policy {
namespace {

constexpr std::string_view kHeader = "## Step ";

// Length of a "## Step <digits>:" header starting at `pos`, or 0.
std::size_t header_length_at(std::string_view text, std::size_t pos) {
  if (text.compare(pos, kHeader.size(), kHeader) != 0) return 0;
  std::size_t i = pos + kHeader.size();
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0 || i >= text.size() || text[i] != ':') return 0;
  return i + 1 - pos;
}

}  // namespace

bool has_terminal_sentence(std::string_view text) {
  return text.find(kTerminalSentence) != std::string_view::npos;
}

std::vector<Thought> segment(std::string_view full_text) {
  std::vector<Thought> thoughts;
  if (full_text.empty()) return thoughts;

  std::vector<std::size_t> cuts{0};
  for (std::size_t pos = 1; pos < full_text.size(); ++pos) {
    if (header_length_at(full_text, pos) > 0 ||
        full_text.compare(pos, kFinalAnswerLead.size(), kFinalAnswerLead) == 0) {
      cuts.push_back(pos);
    }
  }
  cuts.push_back(full_text.size());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    std::string_view piece = full_text.substr(cuts[i], cuts[i + 1] - cuts[i]);
    thoughts.push_back({std::string(piece), count_tokens(piece), has_terminal_sentence(piece)});
  }
  return thoughts;
}

}  // namespace astardec::policy
