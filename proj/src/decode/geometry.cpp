#include "unirec/decode/geometry.hpp"

#include <string>

#include "unirec/core/error.hpp"

namespace unirec::decode {
namespace {

// round(num / den) half up, for positive operands.
std::int64_t round_div(std::int64_t num, std::int64_t den) { return (2 * num + den) / (2 * den); }

std::int64_t pad_to_patch(std::int64_t v) { return (v + kPatch - 1) / kPatch * kPatch; }

}  // namespace

GeometrySpec fit_geometry(std::int64_t height, std::int64_t width) {
  if (height < 1 || width < 1) {
    throw Error("image size must be at least 1x1, got " + std::to_string(height) + "x" + std::to_string(width));
  }
  // Products stay far below 2^63 for any size whose round_div fits.
  if (height > (std::int64_t{1} << 40) || width > (std::int64_t{1} << 40)) throw Error("image size too large");

  GeometrySpec g;
  g.input_h = height;
  g.input_w = width;
  if (width <= kMaxWidth && height <= kMaxHeight) {
    g.scaled_h = height;
    g.scaled_w = width;
  } else if (kMaxWidth * height < kMaxHeight * width) {
    // width cap binds: scale = 960 / W
    g.scaled_w = kMaxWidth;
    g.scaled_h = round_div(height * kMaxWidth, width);
  } else if (kMaxWidth * height > kMaxHeight * width) {
    g.scaled_h = kMaxHeight;
    g.scaled_w = round_div(width * kMaxHeight, height);
  } else {
    g.scaled_h = kMaxHeight;
    g.scaled_w = kMaxWidth;
  }
  if (g.scaled_h < 1) g.scaled_h = 1;
  if (g.scaled_w < 1) g.scaled_w = 1;
  g.padded_h = pad_to_patch(g.scaled_h);
  g.padded_w = pad_to_patch(g.scaled_w);
  g.grid_h = g.padded_h / kPatch;
  g.grid_w = g.padded_w / kPatch;
  g.tokens = g.grid_h * g.grid_w;
  return g;
}

nlohmann::json to_json(const GeometrySpec& g) {
  return {{"input", {{"h", g.input_h}, {"w", g.input_w}}},
          {"scaled", {{"h", g.scaled_h}, {"w", g.scaled_w}}},
          {"padded", {{"h", g.padded_h}, {"w", g.padded_w}}},
          {"grid", {{"h", g.grid_h}, {"w", g.grid_w}}},
          {"N", g.tokens},
          {"D", g.feature_dim}};
}

}  // namespace unirec::decode
