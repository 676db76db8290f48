#include "unirec/eval/edit_distance.hpp"

#include <algorithm>

#include "unirec/core/utf8.hpp"
#include "unirec/hst/codec.hpp"
#include "unirec/simd/kernels.hpp"

namespace unirec::eval {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string ua = utf8::decode(a);
  const std::u32string ub = utf8::decode(b);
  return simd::edit_distance(ua, ub);
}

double normalized_ed(std::string_view gt, std::string_view pred) {
  const std::u32string ug = utf8::decode(gt);
  const std::u32string up = utf8::decode(pred);
  const std::size_t longest = std::max(ug.size(), up.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(simd::edit_distance(ug, up)) / static_cast<double>(longest);
}

std::string_view mode_name(ScoreMode mode) noexcept { return mode == ScoreMode::Hst ? "hst" : "raw"; }

std::optional<ScoreMode> parse_score_mode(std::string_view s) {
  if (s == "hst") return ScoreMode::Hst;
  if (s == "raw") return ScoreMode::Raw;
  return std::nullopt;
}

std::string canonicalize(std::string_view text, ScoreMode mode) {
  if (mode == ScoreMode::Raw) return std::string(text);
  const std::u32string cps = utf8::decode(hst::decode_hst(text));
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!utf8::is_space(cps[i])) {
      utf8::append(out, cps[i]);
      ++i;
      continue;
    }
    std::size_t newlines = 0;
    const std::size_t start = i;
    for (; i < cps.size() && utf8::is_space(cps[i]); ++i) newlines += cps[i] == U'\n' ? 1 : 0;
    if (start == 0 || i == cps.size()) continue;  // trim both ends
    out += newlines >= 2 ? "\n\n" : " ";
  }
  return out;
}

}  // namespace unirec::eval
