#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace astardec::eval {

/// Content of the last "boxed{...}" (with or without a leading backslash),
/// nested braces preserved. Unbalanced or absent -> nullopt.
std::optional<std::string> extract_answer(std::string_view completion);

/// Canonical answer form. The supported grammar is documented in
/// docs/normalization.md; in short:
///   - whitespace trimmed; $..$, \(..\), \[..\] and a whole-string \boxed{..}
///     removed; \text/\textbf/\mathrm/\mathbf unwrapped; \left, \right, thin
///     spaces, degree marks, \$ and percent signs dropped; one trailing period
///     dropped; a leading "x =" style assignment dropped
///   - integers, terminating decimals, a/b and \frac{a}{b} (also \dfrac,
///     \tfrac and \frac12 shorthand) become a reduced fraction "p/q" or an
///     integer "p", with the sign in front
///   - anything else is lowercased with all whitespace removed
/// The result is a fixed point: normalize_answer(normalize_answer(x)) ==
/// normalize_answer(x).
std::string normalize_answer(std::string_view raw);

/// normalize_answer(candidate) == normalize_answer(reference).
bool exact_match(std::string_view candidate, std::string_view reference);

}  // namespace astardec::eval
