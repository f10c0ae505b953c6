#pragma once

#include "vne/kernels.hpp"

namespace vne::kernels {

namespace scalar_impl {
double sum(std::span<const double> values);
double sum_where_le(std::span<const double> keys, std::span<const double> values, double limit);
std::size_t screen(std::span<const double> cpu, std::span<const double> bw, double need_cpu,
                   double need_bw, std::span<std::uint8_t> out);
std::size_t mismatch(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::uint8_t> out);
}  // namespace scalar_impl

#if defined(VNE_HAVE_AVX2)
namespace avx2_impl {
double sum(std::span<const double> values);
double sum_where_le(std::span<const double> keys, std::span<const double> values, double limit);
std::size_t screen(std::span<const double> cpu, std::span<const double> bw, double need_cpu,
                   double need_bw, std::span<std::uint8_t> out);
std::size_t mismatch(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                     std::span<std::uint8_t> out);
}  // namespace avx2_impl
#endif

}  // namespace vne::kernels
