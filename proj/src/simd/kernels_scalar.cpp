#include <algorithm>
#include <cmath>
#include <vector>

#include "unirec/simd/kernels.hpp"

namespace unirec::simd {

std::size_t edit_distance_scalar(std::span<const char32_t> a, std::span<const char32_t> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();

  // Two-row Wagner-Fischer over the shorter string.
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] != b[j - 1] ? 1 : 0);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

ProbStats prob_stats_scalar(std::span<const double> p) {
  ProbStats s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    s.sum += x;
    if (!std::isfinite(x)) s.finite = false;
    if (x < s.min) s.min = x;
    if (x > s.max) {
      s.max = x;
      s.argmax = i;
    }
  }
  return s;
}

}  // namespace unirec::simd
