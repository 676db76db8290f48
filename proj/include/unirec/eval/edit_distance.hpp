#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace unirec::eval {

/// Unit-cost insert/delete/substitute distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// levenshtein / max(|gt|, |pred|) in scalar values; 0 when both are empty.
double normalized_ed(std::string_view gt, std::string_view pred);

enum class ScoreMode { Raw, Hst };

std::string_view mode_name(ScoreMode mode) noexcept;
std::optional<ScoreMode> parse_score_mode(std::string_view s);

/// Raw: identity. Hst: decode_hst, then every Unicode whitespace run becomes
/// "\n\n" if it holds two or more line feeds and " " otherwise, then both
/// ends are trimmed. Idempotent.
std::string canonicalize(std::string_view text, ScoreMode mode);

}  // namespace unirec::eval
