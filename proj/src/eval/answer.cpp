#include "astardec/eval/answer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <numeric>

namespace astardec::eval {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (from.empty()) return;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Index of the brace closing the one at `open`, or npos.
std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

// Replace every "<command>{X}" by "X".
void unwrap_command(std::string& s, std::string_view command) {
  std::size_t pos = 0;
  while ((pos = s.find(command, pos)) != std::string::npos) {
    const std::size_t open = pos + command.size();
    if (open >= s.size() || s[open] != '{') {
      pos = open;
      continue;
    }
    const std::size_t close = matching_brace(s, open);
    if (close == std::string::npos) return;
    s = s.substr(0, pos) + s.substr(open + 1, close - open - 1) + s.substr(close + 1);
  }
}

bool strip_enclosing(std::string& s, std::string_view open, std::string_view close) {
  if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
    s = trim(s.substr(open.size(), s.size() - open.size() - close.size()));
    return true;
  }
  return false;
}

// A whole-string "\boxed{...}" or "boxed{...}".
bool strip_boxed(std::string& s) {
  for (std::string_view lead : {"\\boxed", "boxed"}) {
    if (!s.starts_with(lead) || s.size() <= lead.size() || s[lead.size()] != '{') continue;
    if (matching_brace(s, lead.size()) != s.size() - 1) continue;
    s = trim(s.substr(lead.size() + 1, s.size() - lead.size() - 2));
    return true;
  }
  return false;
}

struct Rational {
  std::int64_t num;
  std::int64_t den;
};

constexpr std::int64_t kMaxMagnitude = 1'000'000'000'000'000'000LL;

// Unsigned integer or terminating decimal ("12", "1.50", ".5", "5.").
std::optional<Rational> parse_unsigned_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    seen_digit = true;
    if (num > kMaxMagnitude / 10) return std::nullopt;
    num = num * 10 + (c - '0');
    if (seen_dot) {
      if (den > kMaxMagnitude / 10) return std::nullopt;
      den *= 10;
    }
  }
  if (!seen_digit) return std::nullopt;
  return Rational{num, den};
}

std::optional<Rational> parse_signed_decimal(std::string_view s) {
  bool negative = false;
  while (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (s.front() == '-') negative = !negative;
    s.remove_prefix(1);
  }
  auto r = parse_unsigned_decimal(s);
  if (r && negative) r->num = -r->num;
  return r;
}

std::optional<Rational> divide(Rational a, Rational b) {
  if (b.num == 0) return std::nullopt;
  __int128 num = static_cast<__int128>(a.num) * b.den;
  __int128 den = static_cast<__int128>(a.den) * b.num;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 x = num < 0 ? -num : num;
  __int128 y = den;
  while (y != 0) {
    const __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > 1) {
    num /= x;
    den /= x;
  }
  if (num > kMaxMagnitude || num < -kMaxMagnitude || den > kMaxMagnitude) return std::nullopt;
  return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// s has had all whitespace removed.
std::optional<Rational> parse_rational(std::string_view s) {
  bool negative = false;
  while (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    if (s.front() == '-') negative = !negative;
    s.remove_prefix(1);
  }
  std::optional<Rational> value;
  if (s.starts_with("\\frac{")) {
    const std::size_t open1 = 5;
    const std::size_t close1 = matching_brace(s, open1);
    if (close1 == std::string_view::npos || close1 + 1 >= s.size() || s[close1 + 1] != '{') return std::nullopt;
    const std::size_t close2 = matching_brace(s, close1 + 1);
    if (close2 != s.size() - 1) return std::nullopt;
    auto top = parse_signed_decimal(s.substr(open1 + 1, close1 - open1 - 1));
    auto bottom = parse_signed_decimal(s.substr(close1 + 2, close2 - close1 - 2));
    if (!top || !bottom) return std::nullopt;
    value = divide(*top, *bottom);
  } else if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    auto top = parse_signed_decimal(s.substr(0, slash));
    auto bottom = parse_signed_decimal(s.substr(slash + 1));
    if (!top || !bottom) return std::nullopt;
    value = divide(*top, *bottom);
  } else {
    auto r = parse_unsigned_decimal(s);
    if (r) value = divide(*r, {1, 1});
  }
  if (value && negative) value->num = -value->num;
  return value;
}

bool is_thousands_grouped(std::string_view s) {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  const auto first_comma = whole.find(',');
  if (first_comma == std::string_view::npos || first_comma == 0 || first_comma > 3) return false;
  for (std::size_t i = 0; i < whole.size(); ++i) {
    const bool comma_slot = i >= first_comma && (i - first_comma) % 4 == 0;
    if (comma_slot ? whole[i] != ',' : !std::isdigit(static_cast<unsigned char>(whole[i]))) return false;
  }
  return (whole.size() - first_comma) % 4 == 0;
}

std::string normalize_once(std::string_view raw) {
  std::string s = trim(raw);

  for (bool changed = true; changed;) {
    changed = strip_enclosing(s, "$$", "$$") || strip_enclosing(s, "$", "$") ||
              strip_enclosing(s, "\\(", "\\)") || strip_enclosing(s, "\\[", "\\]") || strip_boxed(s);
  }

  for (std::string_view cmd : {"\\text", "\\textbf", "\\mathrm", "\\mathbf"}) unwrap_command(s, cmd);
  replace_all(s, "\\dfrac", "\\frac");
  replace_all(s, "\\tfrac", "\\frac");
  for (std::string_view junk : {"\\left", "\\right", "\\!", "\\,", "\\;", "\\:", "^{\\circ}", "^\\circ",
                                "\\circ", "\\$", "\\%", "%", "$"}) {
    replace_all(s, junk, "");
  }
  replace_all(s, "\\ ", " ");
  s = trim(s);
  if (s.size() > 1 && s.back() == '.') s = trim(s.substr(0, s.size() - 1));

  // \frac12 -> \frac{1}{2}
  for (std::size_t pos = 0; (pos = s.find("\\frac", pos)) != std::string::npos; pos += 5) {
    const std::size_t a = pos + 5;
    if (a + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[a])) &&
        std::isdigit(static_cast<unsigned char>(s[a + 1]))) {
      s = s.substr(0, a) + "{" + s[a] + "}{" + s[a + 1] + "}" + s.substr(a + 2);
    }
  }

  // "x = 5" -> "5"
  if (s.size() > 2 && std::isalpha(static_cast<unsigned char>(s[0]))) {
    std::size_t i = 1;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i < s.size() && s[i] == '=' && s.find('=', i + 1) == std::string::npos) s = trim(s.substr(i + 1));
  }

  std::string compact;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (is_thousands_grouped(compact)) compact.erase(std::remove(compact.begin(), compact.end(), ','), compact.end());

  if (auto r = parse_rational(compact)) {
    if (r->den == 1) return std::to_string(r->num);
    return std::to_string(r->num) + "/" + std::to_string(r->den);
  }
  std::transform(compact.begin(), compact.end(), compact.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return compact;
}

}  // namespace

std::optional<std::string> extract_answer(std::string_view completion) {
  std::size_t pos = completion.rfind("boxed{");
  if (pos == std::string_view::npos) return std::nullopt;
  const std::size_t open = pos + 5;
  const std::size_t close = matching_brace(completion, open);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(completion.substr(open + 1, close - open - 1));
}

std::string normalize_answer(std::string_view raw) {
  std::string current = normalize_once(raw);
  for (int i = 0; i < 8; ++i) {
    std::string next = normalize_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

bool exact_match(std::string_view candidate, std::string_view reference) {
  return normalize_answer(candidate) == normalize_answer(reference);
}

}  // namespace astardec::eval
