#pragma once

#include <cstdint>

#include <json.hpp>

namespace unirec::decode {

inline constexpr std::int64_t kMaxWidth = 960;
inline constexpr std::int64_t kMaxHeight = 1408;
inline constexpr std::int64_t kPatch = 32;
inline constexpr std::int64_t kFeatureDim = 768;

struct GeometrySpec {
  std::int64_t input_h = 0;
  std::int64_t input_w = 0;
  std::int64_t scaled_h = 0;
  std::int64_t scaled_w = 0;
  std::int64_t padded_h = 0;
  std::int64_t padded_w = 0;
  std::int64_t grid_h = 0;
  std::int64_t grid_w = 0;
  std::int64_t tokens = 0;  // N = grid_h * grid_w
  std::int64_t feature_dim = kFeatureDim;

  bool operator==(const GeometrySpec&) const = default;
};

/// Native-resolution fit: scale = min(960/W, 1408/H, 1), never up; the scaled
/// size is rounded half up (at least 1 pixel) and padded right/bottom to a
/// multiple of 32. Exact integer arithmetic. Throws Error unless H, W >= 1.
GeometrySpec fit_geometry(std::int64_t height, std::int64_t width);

nlohmann::json to_json(const GeometrySpec& spec);

}  // namespace unirec::decode
