#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace unirec::sdt {

// Byte-level alphabet: every byte gets a printable stand-in so token
// surfaces are valid UTF-8. Printable Latin-1 bytes map to themselves and the
// rest are shifted into U+0100.. (space becomes U+0120 'Ġ').

/// UTF-8 surface of each byte.
const std::array<std::string, 256>& byte_symbols();

std::string bytes_to_symbols(std::string_view raw);

/// Inverse of `bytes_to_symbols`; nullopt when a code point is not a byte stand-in.
std::optional<std::string> symbols_to_bytes(std::string_view symbols);

}  // namespace unirec::sdt
