#include "unirec/sdt/byte_alphabet.hpp"

#include <unordered_map>

#include "unirec/core/utf8.hpp"

namespace unirec::sdt {
namespace {

struct Tables {
  std::array<std::string, 256> symbol;
  std::unordered_map<char32_t, unsigned char> inverse;

  Tables() {
    char32_t shifted = 256;
    for (int b = 0; b < 256; ++b) {
      const bool printable = (b >= 0x21 && b <= 0x7E) || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE);
      const char32_t cp = printable ? static_cast<char32_t>(b) : shifted++;
      utf8::append(symbol[b], cp);
      inverse.emplace(cp, static_cast<unsigned char>(b));
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

const std::array<std::string, 256>& byte_symbols() { return tables().symbol; }

std::string bytes_to_symbols(std::string_view raw) {
  const auto& sym = tables().symbol;
  std::string out;
  out.reserve(raw.size() * 2);
  for (char c : raw) out += sym[static_cast<unsigned char>(c)];
  return out;
}

std::optional<std::string> symbols_to_bytes(std::string_view symbols) {
  const auto& inv = tables().inverse;
  std::string out;
  out.reserve(symbols.size());
  for (char32_t cp : utf8::decode(symbols)) {
    const auto it = inv.find(cp);
    if (it == inv.end()) return std::nullopt;
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

}  // namespace unirec::sdt
