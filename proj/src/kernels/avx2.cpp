// Compiled with -mavx2; only entered after a CPUID check in dispatch.cpp.
#include <immintrin.h>

#include <bit>

#include "kernels_impl.hpp"

namespace vne::kernels::avx2_impl {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double sum(std::span<const double> values) {
  const std::size_t n = values.size();
  const double* p = values.data();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += p[i];
  return total;
}

double sum_where_le(std::span<const double> keys, std::span<const double> values, double limit) {
  const std::size_t n = keys.size();
  const __m256d lim = _mm256_set1_pd(limit);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(keys.data() + i), lim, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(values.data() + i)));
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    if (keys[i] <= limit) total += values[i];
  }
  return total;
}

std::size_t screen(std::span<const double> cpu, std::span<const double> bw, double need_cpu,
                   double need_bw, std::span<std::uint8_t> out) {
  const std::size_t n = cpu.size();
  const __m256d nc = _mm256_set1_pd(need_cpu);
  const __m256d nb = _mm256_set1_pd(need_bw);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(_mm256_loadu_pd(cpu.data() + i), nc, _CMP_GE_OQ),
                                     _mm256_cmp_pd(_mm256_loadu_pd(bw.data() + i), nb, _CMP_GE_OQ));
    const unsigned bits = static_cast<unsigned>(_mm256_movemask_pd(ok));
    out[i] = bits & 1u;
    out[i + 1] = (bits >> 1) & 1u;
    out[i + 2] = (bits >> 2) & 1u;
    out[i + 3] = (bits >> 3) & 1u;
    count += static_cast<std::size_t>(std::popcount(bits));
  }
  for (; i < n; ++i) {
    const bool ok = cpu[i] >= need_cpu && bw[i] >= need_bw;
    out[i] = ok ? 1 : 0;
    count += ok;
  }
  return count;
}

std::size_t mismatch(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::uint8_t> out) {
  const std::size_t n = a.size();
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const unsigned eq =
        static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb))));
    const unsigned diff = ~eq & 0xffu;
    for (unsigned k = 0; k < 8; ++k) out[i + k] = (diff >> k) & 1u;
    count += static_cast<std::size_t>(std::popcount(diff));
  }
  for (; i < n; ++i) {
    const bool d = a[i] != b[i];
    out[i] = d ? 1 : 0;
    count += d;
  }
  return count;
}

}  // namespace vne::kernels::avx2_impl
