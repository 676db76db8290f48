#pragma once

#include <cstddef>
#include <limits>
#include <span>

namespace unirec::simd {

// Unit-cost Levenshtein distance over code points.
//
// The `_scalar` variants are the reference kernels; the `_avx2` variants must
// agree with them exactly (edit distance, argmax, flags) or to rounding
// (sums). Calling an `_avx2` kernel on a CPU without AVX2 is undefined; use
// the dispatched entry points unless a test pins the ISA.

std::size_t edit_distance_scalar(std::span<const char32_t> a, std::span<const char32_t> b);
std::size_t edit_distance_avx2(std::span<const char32_t> a, std::span<const char32_t> b);

/// Dispatched. Strips the common prefix and suffix before running a kernel.
std::size_t edit_distance(std::span<const char32_t> a, std::span<const char32_t> b);

// One pass over a next-token probability vector.
struct ProbStats {
  double sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;  // lowest index attaining `max`
  bool finite = true;      // no NaN or infinity anywhere
};

ProbStats prob_stats_scalar(std::span<const double> p);
ProbStats prob_stats_avx2(std::span<const double> p);
ProbStats prob_stats(std::span<const double> p);

}  // namespace unirec::simd
