#include "kernels_impl.hpp"

namespace vne::kernels::scalar_impl {

double sum(std::span<const double> values) {
  double acc = 0;
  for (double v : values) acc += v;
  return acc;
}

double sum_where_le(std::span<const double> keys, std::span<const double> values, double limit) {
  double acc = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] <= limit) acc += values[i];
  }
  return acc;
}

std::size_t screen(std::span<const double> cpu, std::span<const double> bw, double need_cpu,
                   double need_bw, std::span<std::uint8_t> out) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < cpu.size(); ++i) {
    const bool ok = cpu[i] >= need_cpu && bw[i] >= need_bw;
    out[i] = ok ? 1 : 0;
    count += ok;
  }
  return count;
}

std::size_t mismatch(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::uint8_t> out) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool diff = a[i] != b[i];
    out[i] = diff ? 1 : 0;
    count += diff;
  }
  return count;
}

}  // namespace vne::kernels::scalar_impl
