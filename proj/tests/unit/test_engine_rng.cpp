#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vnfsdn/sim/engine.hpp"
#include "vnfsdn/sim/rng.hpp"

namespace vnfsdn::sim {
namespace {

TEST(Engine, HandlersNeverSeeTheClockGoBack) {
  Engine e;
  std::mt19937_64 gen(3);
  std::uint64_t last = 0;
  std::uint64_t seen = 0;
  e.on(EventKind::PacketArrival, [&](const Event& ev) {
    EXPECT_GE(e.now().us, last);
    EXPECT_EQ(ev.time, e.now());
    last = e.now().us;
    ++seen;
    // handlers schedule follow-ups at or after now
    if (seen < 5000) e.schedule_in(gen() % 50, EventKind::PacketArrival);
  });
  for (int i = 0; i < 100; ++i) e.schedule(SimTime{gen() % 1000}, EventKind::PacketArrival);
  e.run_until(SimTime{1'000'000});
  EXPECT_EQ(e.now().us, 1'000'000U);
  EXPECT_EQ(seen, e.processed_total());
}

TEST(Engine, ProcessesExactlyTheEventsUpToTheHorizon) {
  Engine e;
  std::mt19937_64 gen(5);
  std::uint64_t expected = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t t = gen() % 2000;
    if (t <= 1000) ++expected;
    e.schedule(SimTime{t}, EventKind::WindowBoundary);
  }
  EXPECT_EQ(e.run_until(SimTime{1000}), expected);
  EXPECT_EQ(e.pending(), 1000 - expected);
  EXPECT_EQ(e.scheduled_total(), 1000U);
}

TEST(Engine, EqualTimesKeepFifoOrder) {
  Engine e;
  std::vector<std::uint64_t> order;
  e.on(EventKind::TrafficEmit, [&](const Event& ev) { order.push_back(ev.payload); });
  for (std::uint64_t i = 0; i < 10; ++i) e.schedule(SimTime{42}, EventKind::TrafficEmit, 0, i);
  e.schedule(SimTime{41}, EventKind::TrafficEmit, 0, 99);
  e.run_until(SimTime{100});
  ASSERT_EQ(order.size(), 11U);
  EXPECT_EQ(order.front(), 99U);
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(order[i + 1], i);
}

TEST(Engine, RejectsSchedulingInThePast) {
  Engine e;
  e.run_until(SimTime{500});
  EXPECT_THROW(e.schedule(SimTime{499}, EventKind::PacketArrival), TimeTravel);
  EXPECT_THROW(e.run_until(SimTime{10}), TimeTravel);
  EXPECT_NO_THROW(e.schedule(SimTime{500}, EventKind::PacketArrival));
}

TEST(Engine, ObserverSeesEveryEvent) {
  Engine e;
  int observed = 0;
  e.observe([&](const Event&) { ++observed; });
  for (int i = 0; i < 7; ++i) e.schedule(SimTime{static_cast<std::uint64_t>(i)}, EventKind::MonitorSample);
  e.run_until(SimTime{10});
  EXPECT_EQ(observed, 7);
}

TEST(Rng, DrawsArePureFunctionsOfSeedNameAndCounter) {
  RngStream a(9, "benign/0");
  RngStream b(9, "benign/0");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.counter(), 100U);

  RngStream other_name(9, "benign/1");
  RngStream other_seed(10, "benign/0");
  RngStream fresh(9, "benign/0");
  int same_name = 0, same_seed = 0;
  for (int i = 0; i < 100; ++i) {
    auto x = fresh.next_u64();
    same_name += x == other_name.next_u64();
    same_seed += x == other_seed.next_u64();
  }
  EXPECT_EQ(same_name, 0);
  EXPECT_EQ(same_seed, 0);
}

TEST(Rng, StreamsDoNotPerturbEachOther) {
  RngRegistry solo(4);
  auto& s = solo.register_stream("ddos/0/3");
  std::vector<std::uint64_t> alone;
  for (int i = 0; i < 50; ++i) alone.push_back(s.next_u64());

  RngRegistry busy(4);
  auto& noise = busy.register_stream("benign/2");
  auto& t = busy.register_stream("ddos/0/3");
  for (int i = 0; i < 50; ++i) {
    for (int k = 0; k < i % 4; ++k) noise.next_u64();
    EXPECT_EQ(t.next_u64(), alone[i]);
  }
}

TEST(Rng, RegistryLookups) {
  RngRegistry r(1);
  EXPECT_FALSE(r.has("x"));
  auto& x = r.register_stream("x");
  EXPECT_EQ(&r.register_stream("x"), &x);
  EXPECT_EQ(&r.stream("x"), &x);
  EXPECT_THROW(r.stream("y"), UnknownStream);
}

TEST(Rng, DistributionsHaveTheRightShape) {
  RngStream s(123, "shape");
  constexpr int kN = 200'000;
  double sum = 0.0, lo = 1.0, hi = 0.0;
  for (int i = 0; i < kN; ++i) {
    double u = s.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_NEAR(sum / kN, 0.5, 0.005);
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);

  double esum = 0.0;
  for (int i = 0; i < kN; ++i) esum += s.exponential(4.0);
  EXPECT_NEAR(esum / kN, 0.25, 0.005);
  EXPECT_THROW(s.exponential(0.0), std::invalid_argument);

  std::vector<double> w{1.0, 0.0, 3.0};
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 40'000; ++i) ++counts[s.choice(w)];
  EXPECT_EQ(counts[1], 0);
  EXPECT_NEAR(counts[2] / 40'000.0, 0.75, 0.01);
  EXPECT_THROW(s.choice(std::vector<double>{}), std::invalid_argument);
}

}  // namespace
}  // namespace vnfsdn::sim
