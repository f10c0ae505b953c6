#pragma once

// Data-parallel inner loops used by the embedder and the metrics layer.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is picked once at startup from CPUID; setting the
// environment variable VNE_SIMD=scalar forces the reference path. Mask and
// count kernels are bit-identical across variants. Reductions agree exactly
// on inputs from the resource grid (see kResourceQuantum) and to rounding
// otherwise.

#include <cstddef>
#include <cstdint>
#include <span>

namespace vne::kernels {

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  const char* name;

  /// Sum of all values.
  double (*sum)(std::span<const double> values);

  /// Sum of values[i] where keys[i] <= limit. Spans have equal length.
  double (*sum_where_le)(std::span<const double> keys, std::span<const double> values, double limit);

  /// out[i] = cpu[i] >= need_cpu && bw[i] >= need_bw. Returns the count of
  /// admitted entries.
  std::size_t (*screen)(std::span<const double> cpu, std::span<const double> bw, double need_cpu,
                        double need_bw, std::span<std::uint8_t> out);

  /// out[i] = a[i] != b[i]. Returns the number of mismatches.
  std::size_t (*mismatch)(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                          std::span<std::uint8_t> out);
};

const Table& scalar();

/// nullptr when the AVX2 variant is not built or the CPU lacks AVX2.
const Table* avx2();

/// The table selected for this process.
const Table& active();

}  // namespace vne::kernels
