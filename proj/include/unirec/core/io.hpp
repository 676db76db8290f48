#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace unirec::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& value);

/// Lines without their terminators; a trailing empty line is not reported.
std::vector<std::string> split_lines(std::string_view text);

/// JSONL artifacts may open with a single `{"header": {...}}` line carrying
/// provenance (seed, artifact kind). Readers skip it.
json jsonl_header(std::string_view artifact, std::uint64_t seed);
bool is_jsonl_header(const json& line);

std::vector<json> parse_jsonl(std::string_view text);
std::vector<json> read_jsonl(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<json>& records);

/// Compact one-line dump; invalid UTF-8 is replaced rather than thrown.
std::string dump_line(const json& value);

}  // namespace unirec::io
