#include <doctest.h>

#include <cstdint>
#include <vector>

#include "mixsys/parallel.hpp"
#include "mixsys/rng.hpp"

using namespace mixsys;

TEST_CASE("rng is a pure function of (seed, stream, counter)") {
  CHECK(rng::at(1, 2, 3) == rng::at(1, 2, 3));
  CHECK(rng::at(1, 2, 3) != rng::at(1, 2, 4));
  CHECK(rng::at(1, 2, 3) != rng::at(1, 3, 3));
  CHECK(rng::at(2, 2, 3) != rng::at(1, 2, 3));

  rng::Stream s(42, 7);
  std::vector<double> first;
  for (int i = 0; i < 16; ++i) first.push_back(s.next_uniform());
  rng::Stream s2(42, 7);
  for (int i = 0; i < 16; ++i) CHECK(s2.next_uniform() == first[i]);
  for (double u : first) {
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform(lo,hi) stays in range and fills it") {
  double mn = 1e9, mx = -1e9;
  for (int i = 0; i < 4096; ++i) {
    double u = rng::uniform(5, 0, i, -2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u < 3.0);
    mn = std::min(mn, u);
    mx = std::max(mx, u);
  }
  CHECK(mn < -1.9);
  CHECK(mx > 2.9);
}

TEST_CASE("parallel_chunks result is invariant under thread count") {
  auto run = [](int threads) {
    auto parts = parallel_chunks<double>(100000, 1024, threads, [](std::size_t b, std::size_t e) {
      double acc = 0.0;
      for (std::size_t i = b; i < e; ++i) acc += rng::uniform(9, 4, i) - 0.5;
      return acc;
    });
    double total = 0.0;
    for (double p : parts) total += p;
    return total;
  };
  double t1 = run(1);
  CHECK(run(2) == t1);
  CHECK(run(5) == t1);
  // Chunk count is a function of n alone.
  auto parts = parallel_chunks<int>(10, 3, 4, [](std::size_t b, std::size_t e) {
    return static_cast<int>(e - b);
  });
  REQUIRE(parts.size() == 4);
  CHECK(parts[0] == 3);
  CHECK(parts[3] == 1);
}
