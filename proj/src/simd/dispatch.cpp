#include "unirec/simd/cpu.hpp"
#include "unirec/simd/kernels.hpp"

namespace unirec::simd {

std::size_t edit_distance(std::span<const char32_t> a, std::span<const char32_t> b) {
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  a = a.subspan(prefix);
  b = b.subspan(prefix);
  std::size_t suffix = 0;
  while (suffix < a.size() && suffix < b.size() &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
    ++suffix;
  }
  a = a.first(a.size() - suffix);
  b = b.first(b.size() - suffix);
  return active_isa() == Isa::Avx2 ? edit_distance_avx2(a, b) : edit_distance_scalar(a, b);
}

ProbStats prob_stats(std::span<const double> p) {
  return active_isa() == Isa::Avx2 ? prob_stats_avx2(p) : prob_stats_scalar(p);
}

}  // namespace unirec::simd
