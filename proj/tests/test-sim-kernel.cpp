#include "blend/sim-kernel.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <vector>

using namespace blend;

TEST_CASE("equal fire times execute in scheduling order")
{
  Simulator sim;
  std::vector<int> order;
  sim.schedule(5, [&] { order.push_back(1); });
  sim.schedule(5, [&] { order.push_back(2); });
  sim.schedule(2, [&] { order.push_back(0); });

  size_t n = sim.runUntil(10);
  CHECK(n == 3);
  CHECK(order == std::vector<int>{0, 1, 2});
  CHECK(sim.now() == 10);
}

TEST_CASE("runUntil leaves later events pending")
{
  Simulator sim;
  int fired = 0;
  sim.schedule(3, [&] { ++fired; });
  sim.schedule(8, [&] { ++fired; });
  CHECK(sim.runUntil(5) == 1);
  CHECK(fired == 1);
  CHECK(sim.pending());
  CHECK(sim.runUntil(8) == 1);
  CHECK(fired == 2);
}

TEST_CASE("cancel before fire suppresses the action")
{
  Simulator sim;
  int fired = 0;
  auto id = sim.schedule(4, [&] { ++fired; });
  CHECK(sim.cancel(id));
  CHECK(sim.runUntil(10) == 0);
  CHECK(fired == 0);
  CHECK_FALSE(sim.cancel(id)); // second cancel: already gone
}

TEST_CASE("cancel of a fired event returns false")
{
  Simulator sim;
  auto id = sim.schedule(1, [] {});
  sim.runUntil(2);
  CHECK_FALSE(sim.cancel(id));
}

TEST_CASE("events scheduled while running fire in order")
{
  Simulator sim;
  std::vector<int> order;
  sim.schedule(1, [&] {
    order.push_back(1);
    sim.schedule(0, [&] { order.push_back(2); });
    sim.schedule(1, [&] { order.push_back(3); });
  });
  sim.run(secondsToUs(1));
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(sim.now() == 2);
}

TEST_CASE("clock never runs backwards")
{
  Simulator sim;
  TimeUs last = -1;
  bool monotone = true;
  for (int i = 0; i < 50; ++i) {
    sim.schedule(i % 7, [&, i] {
      if (sim.now() < last) {
        monotone = false;
      }
      last = sim.now();
      if (i % 3 == 0) {
        sim.schedule(2, [&] {
          if (sim.now() < last) {
            monotone = false;
          }
          last = sim.now();
        });
      }
    });
  }
  sim.run(secondsToUs(1));
  CHECK(monotone);
}

TEST_CASE("rng streams are pure functions of seed and label")
{
  Simulator a(42);
  Simulator b(42);
  auto s1 = a.rngStream("nonce");
  auto s2 = b.rngStream("nonce");
  for (int i = 0; i < 100; ++i) {
    REQUIRE(s1.next() == s2.next());
  }

  auto s3 = a.rngStream("nonce");
  auto s4 = a.rngStream("loss");
  CHECK(s3.next() != s4.next()); // different labels diverge

  Simulator c(43);
  auto s5 = c.rngStream("nonce");
  auto s6 = a.rngStream("nonce");
  CHECK(s5.next() != s6.next()); // different seeds diverge
}

TEST_CASE("rng ranges stay inside bounds")
{
  Simulator sim(1);
  auto rng = sim.rngStream("t");
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = rng.nextRange(3, 9);
    REQUIRE(v >= 3);
    REQUIRE(v <= 9);
    double u = rng.nextUnit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}
