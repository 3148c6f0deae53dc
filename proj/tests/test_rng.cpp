#include <set>
#include <vector>

#include "doctest.h"
#include "siht/rng.hpp"

using siht::Rng;

TEST_CASE("identical seeds give identical draws") {
  Rng a(0), b(0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds give different sequences") {
  Rng a(0), b(1);
  int diff = 0;
  for (int i = 0; i < 100; ++i)
    if (a.next_u64() != b.next_u64()) ++diff;
  CHECK(diff > 90);
}

TEST_CASE("labeled substreams are deterministic and distinct") {
  Rng root(0);
  Rng s1 = root.substream("batch");
  Rng s2 = root.substream("batch");
  Rng s3 = root.substream("mc");
  std::vector<std::uint64_t> d1, d2, d3;
  for (int i = 0; i < 100; ++i) {
    d1.push_back(s1.next_u64());
    d2.push_back(s2.next_u64());
    d3.push_back(s3.next_u64());
  }
  CHECK(d1 == d2);
  CHECK(d1 != d3);
}

// Golden draws pin the substream derivation; mt19937_64's output sequence is
// specified by the standard, so these are portable. Recorded once from this
// implementation.
TEST_CASE("golden substream draws") {
  Rng s = Rng(0).substream("batch");
  CHECK(s.next_u64() == 17983495144920196613ULL);
  CHECK(s.next_u64() == 16362745659160021040ULL);
  CHECK(s.next_u64() == 14719352506639414925ULL);
  Rng m = Rng(42).substream("mc");
  CHECK(m.next_u64() == 11932092121920614999ULL);
  CHECK(Rng::fnv1a64("batch") == 11066837980844723771ULL);
  CHECK(Rng::splitmix64(123) == 13032462758197477675ULL);
}

TEST_CASE("uniform_below stays in range and covers values") {
  Rng r(42);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = r.uniform_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("uniform01 in (0,1], normal has sane moments") {
  Rng r(7);
  double sum = 0.0, sum2 = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const double u = r.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
  for (int i = 0; i < trials; ++i) {
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(sum / trials == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(sum2 / trials == doctest::Approx(1.0).epsilon(0.02));
}
