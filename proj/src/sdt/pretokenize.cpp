#include "unirec/sdt/pretokenize.hpp"

namespace unirec::sdt {
namespace {

enum class Cls { Letter, Digit, Space, Punct };

bool ascii_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

Cls classify(unsigned char c) {
  if (ascii_alpha(c) || c >= 0x80) return Cls::Letter;
  if (c >= '0' && c <= '9') return Cls::Digit;
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return Cls::Space;
  return Cls::Punct;
}

bool starts_command(std::string_view s, std::size_t i) {
  return i + 1 < s.size() && s[i] == '\\' && ascii_alpha(static_cast<unsigned char>(s[i + 1]));
}

// End of the non-space chunk that begins at `i`.
std::size_t scan_word(std::string_view s, std::size_t i) {
  const auto at = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  if (starts_command(s, i)) {
    std::size_t e = i + 1;
    while (e < s.size() && ascii_alpha(at(e))) ++e;
    return e;
  }
  const Cls cls = classify(at(i));
  std::size_t e = i + 1;
  while (e < s.size() && classify(at(e)) == cls) {
    if (cls == Cls::Punct && starts_command(s, e)) break;
    ++e;
  }
  return e;
}

// A space attaches to the chunk at `i` unless that chunk is a control word,
// so "\frac" gets the same token wherever it sits.
bool leads_word(std::string_view s, std::size_t i) {
  return classify(static_cast<unsigned char>(s[i])) != Cls::Space && !starts_command(s, i);
}

}  // namespace

std::vector<std::string_view> pretokenize(std::string_view raw) {
  std::vector<std::string_view> chunks;
  std::size_t i = 0;
  while (i < raw.size()) {
    const Cls cls = classify(static_cast<unsigned char>(raw[i]));
    if (cls != Cls::Space) {
      const std::size_t e = scan_word(raw, i);
      chunks.push_back(raw.substr(i, e - i));
      i = e;
      continue;
    }
    if (raw[i] == ' ' && i + 1 < raw.size() && leads_word(raw, i + 1)) {
      const std::size_t e = scan_word(raw, i + 1);
      chunks.push_back(raw.substr(i, e - i));
      i = e;
      continue;
    }
    std::size_t e = i + 1;
    while (e < raw.size() && classify(static_cast<unsigned char>(raw[e])) == Cls::Space) ++e;
    // Leave a final ' ' to lead the following word.
    if (e < raw.size() && e - i > 1 && raw[e - 1] == ' ' && leads_word(raw, e)) --e;
    chunks.push_back(raw.substr(i, e - i));
    i = e;
  }
  return chunks;
}

}  // namespace unirec::sdt
