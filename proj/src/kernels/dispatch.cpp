#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace vne::kernels {

namespace {

constexpr Table kScalar{Isa::scalar, "scalar", scalar_impl::sum, scalar_impl::sum_where_le,
                        scalar_impl::screen, scalar_impl::mismatch};

#if defined(VNE_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2, "avx2", avx2_impl::sum, avx2_impl::sum_where_le,
                      avx2_impl::screen, avx2_impl::mismatch};
#endif

const Table& select() {
  if (const char* env = std::getenv("VNE_SIMD"); env && std::string_view(env) == "scalar") {
    return kScalar;
  }
  if (const Table* t = avx2()) return *t;
  return kScalar;
}

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#if defined(VNE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = select();
  return chosen;
}

}  // namespace vne::kernels
