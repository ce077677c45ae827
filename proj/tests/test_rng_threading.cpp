#include <doctest.h>

#include <cmath>
#include <vector>

#include "pwl/rng.hpp"
#include "pwl/thread_pool.hpp"

TEST_CASE("rng streams are deterministic and independent of draw interleaving") {
  pwl::Rng a = pwl::Rng::derive(123, "env", 4);
  pwl::Rng b = pwl::Rng::derive(123, "env", 4);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  pwl::Rng c = pwl::Rng::derive(123, "env", 5);
  CHECK(c.next_u64() != pwl::Rng::derive(123, "env", 4).next_u64());
  CHECK(pwl::Rng::derive(123, "push", 4).next_u64() !=
        pwl::Rng::derive(123, "env", 4).next_u64());
}

TEST_CASE("uniform and normal moments") {
  pwl::Rng rng(99);
  const int n = 200000;
  double usum = 0.0, nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < n; ++i) {
    usum += rng.uniform();
    const double z = rng.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(usum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(nsum / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(nsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("parallel_for results are identical for any worker count") {
  const std::size_t n = 1000;
  auto run = [&](int workers) {
    pwl::ThreadPool pool(workers);
    std::vector<double> out(n, 0.0);
    pool.parallel_for(n, 16, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 50; ++j) acc += std::sin(0.01 * static_cast<double>(i * 50 + j));
        out[i] = acc;
      }
    });
    return out;
  };
  const auto serial = run(0);
  const auto two = run(2);
  const auto many = run(7);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(serial[i] == two[i]);
    CHECK(serial[i] == many[i]);
  }
}

TEST_CASE("parallel_for covers every index exactly once") {
  pwl::ThreadPool pool(3);
  std::vector<int> hits(257, 0);
  pool.parallel_for(hits.size(), 8, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) hits[i] += 1;
  });
  for (int h : hits) CHECK(h == 1);
}
