#include <doctest.h>

#include <algorithm>
#include <vector>

#include "beeps/jitterjump.hpp"
#include "beeps/kernels.hpp"
#include "beeps/rng.hpp"

using namespace beeps;

namespace {

std::vector<std::int32_t> random_prefix(Rng& rng, std::size_t len, std::uint64_t density_per_16) {
  std::vector<std::int32_t> prefix(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + (rng.below(16) < density_per_16 ? 1 : 0);
  return prefix;
}

// Guard-window definition checked slot by slot: p is free iff no marked
// slot x satisfies x in [p - b - 2, p + b + 1] on the circle.
std::vector<Slot> free_slots_oracle(const SlotSet& heard, std::optional<Slot> own, Slot b) {
  const Slot q = heard.period();
  std::vector<Slot> marks(heard.begin(), heard.end());
  if (own) marks.push_back(*own);
  std::vector<Slot> out;
  for (Slot p = 0; p < q; ++p) {
    bool blocked = false;
    for (Slot x : marks) {
      for (Slot d = -b - 2; d <= b + 1 && !blocked; ++d) blocked = (((p + d) % q + q) % q) == x;
    }
    if (!blocked) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar zero_windows matches the definition") {
  const std::vector<std::int32_t> prefix{0, 0, 1, 1, 1, 2, 2, 2, 2};
  std::vector<std::uint32_t> out(6);
  const auto n = kernels::zero_windows_scalar(prefix, 6, 0, 2, out);
  out.resize(n);
  CHECK(out == std::vector<std::uint32_t>{2, 5});
}

TEST_CASE("avx2 zero_windows is equivalent to scalar") {
  if (!kernels::supported(kernels::Isa::Avx2)) {
    MESSAGE("AVX2 unavailable; equivalence skipped");
    return;
  }
  const auto simd = kernels::zero_windows_for(kernels::Isa::Avx2);
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t count = 1 + rng.below(300);
    const std::size_t lo = rng.below(20);
    const std::size_t hi = lo + 1 + rng.below(20);
    const auto prefix = random_prefix(rng, count + hi, rng.below(8));
    std::vector<std::uint32_t> a(count), b(count);
    const auto na = kernels::zero_windows_scalar(prefix, count, lo, hi, a);
    const auto nb = simd(prefix, count, lo, hi, b);
    REQUIRE(na == nb);
    a.resize(na);
    b.resize(nb);
    CHECK(a == b);
  }
}

TEST_CASE("dispatch reports a usable variant") {
  const auto isa = kernels::active_isa();
  CHECK(kernels::supported(isa));
  CHECK_FALSE(kernels::isa_name(isa).empty());
  CHECK(kernels::zero_windows_for(kernels::Isa::Scalar) == &kernels::zero_windows_scalar);
}

TEST_CASE("free slots: single heard beep blocks exactly its guard span") {
  SlotSet heard(32);
  heard.insert(10);
  const auto f = free_slots(heard, std::nullopt, 2);
  CHECK(f.size() == 24);
  for (Slot p = 7; p <= 14; ++p) CHECK(std::find(f.begin(), f.end(), p) == f.end());
  CHECK(std::find(f.begin(), f.end(), 6) != f.end());
  CHECK(std::find(f.begin(), f.end(), 15) != f.end());
}

TEST_CASE("free slots: empty neighbourhood leaves every slot free") {
  const auto f = free_slots(SlotSet(40), std::nullopt, 3);
  CHECK(f.size() == 40);
  CHECK(f.front() == 0);
  CHECK(f.back() == 39);
}

TEST_CASE("free slots agree with the slot-by-slot oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 1500; ++trial) {
    const Slot q = 4 + static_cast<Slot>(rng.below(120));
    const Slot b = 1 + static_cast<Slot>(rng.below(6));
    SlotSet heard(q);
    const auto k = rng.below(5);
    for (std::uint64_t i = 0; i < k; ++i) heard.insert(static_cast<Slot>(rng.below(static_cast<std::uint64_t>(q))));
    std::optional<Slot> own;
    if (rng.coin()) own = static_cast<Slot>(rng.below(static_cast<std::uint64_t>(q)));
    CHECK(free_slots(heard, own, b) == free_slots_oracle(heard, own, b));
  }
}
