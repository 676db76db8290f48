#include <algorithm>
#include <cstdint>
#include <vector>

#include "unirec/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define UNIREC_HAVE_X86 1
#endif

namespace unirec::simd {

#if UNIREC_HAVE_X86
namespace {

// Anti-diagonal DP. Cell (i, j) lives on diagonal k = i + j at index i, so
// the three predecessors are contiguous loads from the previous two
// diagonals. `b_rev` is b reversed, which makes b[j - 1] = b_rev[n - k + i]
// contiguous in i as well.
__attribute__((target("avx2"))) std::int32_t diagonal_sweep(const char32_t* a, std::int32_t m,
                                                            const char32_t* b_rev, std::int32_t n,
                                                            std::int32_t* cur, std::int32_t* prev,
                                                            std::int32_t* prev2) {
  const __m256i one = _mm256_set1_epi32(1);
  for (std::int32_t k = 0; k <= m + n; ++k) {
    if (k <= n) cur[0] = k;
    if (k <= m) cur[k] = k;
    std::int32_t i = std::max(1, k - n);
    const std::int32_t last = std::min(m, k - 1);
    for (; i + 7 <= last; i += 8) {
      const __m256i up = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev + i - 1));
      const __m256i left = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev + i));
      const __m256i diag = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prev2 + i - 1));
      const __m256i ca = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i - 1));
      const __m256i cb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b_rev + n - k + i));
      // eq is -1 on a match, so one + eq is the substitution cost.
      const __m256i eq = _mm256_cmpeq_epi32(ca, cb);
      const __m256i sub = _mm256_add_epi32(diag, _mm256_add_epi32(one, eq));
      const __m256i gap = _mm256_add_epi32(_mm256_min_epi32(up, left), one);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(cur + i), _mm256_min_epi32(gap, sub));
    }
    for (; i <= last; ++i) {
      const std::int32_t j = k - i;
      const std::int32_t sub = prev2[i - 1] + (a[i - 1] != b_rev[n - j] ? 1 : 0);
      cur[i] = std::min(std::min(prev[i - 1], prev[i]) + 1, sub);
    }
    std::int32_t* spare = prev2;
    prev2 = prev;
    prev = cur;
    cur = spare;
  }
  return prev[m];
}

__attribute__((target("avx2"))) ProbStats reduce_probs(const double* p, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d sum = zero;
  __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d hi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256i hi_idx = _mm256_setzero_si256();
  __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i step = _mm256_set1_epi64x(4);
  __m256d finite = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(p + i);
    sum = _mm256_add_pd(sum, x);
    lo = _mm256_min_pd(x, lo);
    const __m256d gt = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
    hi = _mm256_blendv_pd(hi, x, gt);
    hi_idx = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(hi_idx), _mm256_castsi256_pd(idx), gt));
    finite = _mm256_and_pd(finite, _mm256_cmp_pd(_mm256_sub_pd(x, x), zero, _CMP_EQ_OQ));
    idx = _mm256_add_epi64(idx, step);
  }

  alignas(32) double sums[4], los[4], his[4], fin[4];
  alignas(32) std::int64_t his_idx[4];
  _mm256_store_pd(sums, sum);
  _mm256_store_pd(los, lo);
  _mm256_store_pd(his, hi);
  _mm256_store_pd(fin, finite);
  _mm256_store_si256(reinterpret_cast<__m256i*>(his_idx), hi_idx);

  ProbStats s;
  s.sum = (sums[0] + sums[1]) + (sums[2] + sums[3]);
  for (int lane = 0; lane < 4; ++lane) {
    if (los[lane] < s.min) s.min = los[lane];
    const auto lane_idx = static_cast<std::size_t>(his_idx[lane]);
    if (his[lane] > s.max || (his[lane] == s.max && lane_idx < s.argmax)) {
      s.max = his[lane];
      s.argmax = lane_idx;
    }
    std::int64_t bits;
    __builtin_memcpy(&bits, &fin[lane], sizeof bits);
    if (bits == 0) s.finite = false;
  }
  if (s.max == -std::numeric_limits<double>::infinity()) s.argmax = 0;
  for (; i < n; ++i) {
    const double x = p[i];
    s.sum += x;
    if (!(x - x == 0.0)) s.finite = false;
    if (x < s.min) s.min = x;
    if (x > s.max) {
      s.max = x;
      s.argmax = i;
    }
  }
  return s;
}

}  // namespace

std::size_t edit_distance_avx2(std::span<const char32_t> a, std::span<const char32_t> b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  constexpr std::size_t kLimit = 1u << 30;
  if (a.size() >= kLimit || b.size() >= kLimit) return edit_distance_scalar(a, b);

  const auto m = static_cast<std::int32_t>(a.size());
  const auto n = static_cast<std::int32_t>(b.size());
  std::vector<char32_t> b_rev(b.rbegin(), b.rend());
  std::vector<std::int32_t> buf(3 * (a.size() + 1), 0);
  std::int32_t* base = buf.data();
  return static_cast<std::size_t>(
      diagonal_sweep(a.data(), m, b_rev.data(), n, base, base + (m + 1), base + 2 * (m + 1)));
}

ProbStats prob_stats_avx2(std::span<const double> p) { return reduce_probs(p.data(), p.size()); }

#else

std::size_t edit_distance_avx2(std::span<const char32_t> a, std::span<const char32_t> b) {
  return edit_distance_scalar(a, b);
}

ProbStats prob_stats_avx2(std::span<const double> p) { return prob_stats_scalar(p); }

#endif

}  // namespace unirec::simd
