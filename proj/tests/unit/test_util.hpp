#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "unirec/core/rng.hpp"
#include "unirec/core/utf8.hpp"

namespace unirec::testing {

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("unirec_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

// Random string of up to `max_len` scalars drawn from a small mixed
// Latin/CJK alphabet, so that collisions and shared substrings are common.
inline std::string random_mixed(Rng& rng, std::size_t max_len) {
  static const char32_t kAlphabet[] = {U'a', U'b', U'c', U'd', U' ', U'x', U'数', U'学', U'公', U'式', U'é'};
  const auto len = static_cast<std::size_t>(rng.below(max_len + 1));
  std::string out;
  for (std::size_t i = 0; i < len; ++i) utf8::append(out, kAlphabet[rng.below(std::size(kAlphabet))]);
  return out;
}

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(UNIREC_TEST_DATA_DIR) / name;
}

}  // namespace unirec::testing
