#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "vne/kernels.hpp"
#include "vne/rng.hpp"
#include "vne/topology.hpp"

using namespace vne;

namespace {

std::vector<double> grid_values(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = quantize(rng.uniform(0, 500));
  return v;
}

std::vector<const kernels::Table*> variants() {
  std::vector<const kernels::Table*> out{&kernels::scalar()};
  if (const kernels::Table* t = kernels::avx2()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("active table is one of the built variants") {
  const kernels::Table& a = kernels::active();
  const char* forced = std::getenv("VNE_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") CHECK(a.isa == kernels::Isa::scalar);
  CHECK((&a == &kernels::scalar() || &a == kernels::avx2()));
}

TEST_CASE("scalar reference against a plain loop") {
  Rng rng(3);
  const auto& s = kernels::scalar();
  for (std::size_t n : {0u, 1u, 7u, 64u}) {
    const auto keys = grid_values(rng, n);
    const auto vals = grid_values(rng, n);
    double total = 0, masked = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += vals[i];
      if (keys[i] <= 250) masked += vals[i];
    }
    CHECK(s.sum(vals) == total);
    CHECK(s.sum_where_le(keys, vals, 250) == masked);
  }
}

TEST_CASE("variants agree") {
  const auto tables = variants();
  if (tables.size() < 2) {
    MESSAGE("AVX2 variant unavailable; only the reference path is exercised");
  }
  Rng rng(11);
  for (std::size_t n = 0; n < 130; ++n) {
    const auto a = grid_values(rng, n);
    const auto b = grid_values(rng, n);
    std::vector<std::int32_t> ia(n), ib(n);
    for (std::size_t i = 0; i < n; ++i) {
      ia[i] = static_cast<std::int32_t>(rng.below(4));
      ib[i] = static_cast<std::int32_t>(rng.below(4));
    }
    std::vector<double> raw(n);
    for (double& x : raw) x = rng.uniform(-1e3, 1e3);

    const auto& ref = *tables[0];
    std::vector<std::uint8_t> ref_mask(n), ref_mis(n);
    const std::size_t ref_count = ref.screen(a, b, 200, 300, ref_mask);
    const std::size_t ref_diff = ref.mismatch(ia, ib, ref_mis);
    for (const kernels::Table* t : tables) {
      CAPTURE(t->name);
      CAPTURE(n);
      CHECK(t->sum(a) == ref.sum(a));
      CHECK(t->sum_where_le(a, b, 250) == ref.sum_where_le(a, b, 250));
      CHECK(t->sum(raw) == doctest::Approx(ref.sum(raw)).epsilon(1e-12).scale(1e3));
      std::vector<std::uint8_t> mask(n), mis(n);
      CHECK(t->screen(a, b, 200, 300, mask) == ref_count);
      CHECK(mask == ref_mask);
      CHECK(t->mismatch(ia, ib, mis) == ref_diff);
      CHECK(mis == ref_mis);
    }
    std::size_t expect = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ok = a[i] >= 200 && b[i] >= 300;
      CHECK(ref_mask[i] == static_cast<std::uint8_t>(ok));
      expect += ok;
    }
    CHECK(ref_count == expect);
  }
}

TEST_CASE("screen boundary is inclusive") {
  for (const kernels::Table* t : variants()) {
    const std::vector<double> cpu{100, 99.5, 100, 100, 100, 100, 100, 100, 100};
    const std::vector<double> bw{5, 5, 4.9, 5, 5, 5, 5, 5, 5};
    std::vector<std::uint8_t> out(cpu.size());
    CHECK(t->screen(cpu, bw, 100, 5, out) == 7);
    CHECK(out[0] == 1);
    CHECK(out[1] == 0);
    CHECK(out[2] == 0);
  }
}
