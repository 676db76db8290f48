#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace unirec::utf8 {

inline constexpr char32_t kReplacement = U'�';

/// Decodes UTF-8 into Unicode scalar values. Each byte that does not start a
/// well-formed sequence (overlong forms and surrogates included) decodes to
/// U+FFFD, so the function is total.
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

/// Number of scalar values `decode` would produce.
std::size_t length(std::string_view bytes);

/// Byte length of the sequence starting at `bytes[pos]`, 1 for invalid bytes.
std::size_t sequence_length(std::string_view bytes, std::size_t pos);

/// Unicode White_Space property.
bool is_space(char32_t cp) noexcept;

}  // namespace unirec::utf8
