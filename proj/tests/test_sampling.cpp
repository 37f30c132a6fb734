#include <doctest.h>

#include <cmath>
#include <random>

#include "trafficsim/events.hpp"
#include "trafficsim/rng.hpp"
#include "trafficsim/sampling.hpp"

using namespace traffic;

namespace {

StepDraws draws(double event, double kind, double type, double position, double size = 0.0,
                double capacity = 0.0, double removal = 0.0) {
  return StepDraws{event, kind, type, position, size, capacity, removal};
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("uniform distribution inverse transform") {
  auto d = Distribution::uniform(0.2, 1.0);
  d.validate();
  CHECK(d.sample(0.0) == 0.2);
  CHECK(d.sample(0.5) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(d.min_value() == 0.2);
  CHECK(d.max_value() == 1.0);
  CHECK_THROWS_AS(Distribution::uniform(1.0, 1.0).validate(), std::invalid_argument);
}

TEST_CASE("discrete distribution picks atoms by cumulative weight") {
  auto d = Distribution::discrete({0.5, 0.99}, {0.5, 0.5});
  d.validate();
  CHECK(d.sample(0.0) == 0.5);
  CHECK(d.sample(0.499) == 0.5);
  CHECK(d.sample(0.5) == 0.99);
  CHECK(d.sample(0.999) == 0.99);
  CHECK(d.min_value() == 0.5);
  CHECK(d.max_value() == 0.99);
  CHECK_THROWS_AS(Distribution::discrete({1.0}, {1.0, 2.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::discrete({1.0, 2.0}, {1.0, 0.0}).validate(),
                  std::invalid_argument);
}

TEST_CASE("interval measure inverts a piecewise-linear CDF") {
  IntervalMeasure m{{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}, 4.0};
  CHECK(m.sample(0.0) == 0.0);
  CHECK(m.sample(0.375) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.sample(0.75) == 1.0);  // weights 3:1, u = 0.75 lands on the boundary
  CHECK(m.sample(0.875) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("interval measure skips zero-weight intervals at the tail") {
  IntervalMeasure m{{0.0, 1.0}, {1.0, 5.0}, {2.0, 0.0}, 2.0};
  CHECK(m.sample(1.0 - 1e-16) <= 1.0);
  CHECK(m.sample(0.9999999999999999) <= 1.0);
  IntervalMeasure lead{{0.0, 1.0}, {1.0, 2.0}, {0.0, 1.0}, 1.0};
  CHECK(lead.sample(0.0) == 1.0);  // leading zero-weight interval never sampled
}

TEST_CASE("degenerate measures raise the documented error") {
  IntervalMeasure m{{0.0}, {1.0}, {0.0}, 0.0};
  CHECK(m.degenerate());
  CHECK_THROWS_AS(m.sample(0.5), DegenerateMeasureError);
  AtomMeasure am{{0.0}, {0.0}, 0.0};
  CHECK_THROWS_AS(am.sample(0.5), DegenerateMeasureError);
}

TEST_CASE("atom measure splits mass by normalized weights") {
  AtomMeasure m{{2.0, 5.0}, {0.3, 0.1}, 0.4};
  CHECK(m.sample(0.0) == 2.0);
  CHECK(m.sample(0.7499) == 2.0);
  CHECK(m.sample(0.75) == 5.0);  // at the boundary the next atom takes over
  CHECK(m.sample(0.9999) == 5.0);
}

TEST_CASE("event probabilities sum to one and clamp at one") {
  WarningCounters warn;
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double dt = 0.01 * u(eng);
    double add = 3.0 * u(eng), rem = 2.0 * u(eng);
    auto p = event_probabilities(dt, add, rem, &warn);
    CHECK(std::abs(p.p_none + p.p_add + p.p_remove - 1.0) <= 1e-12);
    CHECK(p.p_add >= 0.0);
    CHECK(p.p_remove >= 0.0);
  }
  CHECK(warn.prob_clamped == 0);

  auto p = event_probabilities(10.0, 0.4, 0.1, &warn);
  CHECK(warn.prob_clamped == 1);
  CHECK(p.p_none == 0.0);
  CHECK(p.p_add == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p.p_remove == doctest::Approx(0.2).epsilon(1e-15));

  auto q = event_probabilities(0.5, 0.0, 0.0, &warn);
  CHECK(q.p_none == 1.0);
  CHECK(q.p_add == 0.0);
  CHECK(q.p_remove == 0.0);
}

TEST_CASE("birth/removal split follows the rate ratio") {
  // add rate 0.03, two accidents at dissolution rate 0.25 each: removal share 0.5/0.53
  auto p = event_probabilities(1.0, 0.03, 0.5);
  CHECK(p.p_remove / (p.p_add + p.p_remove) == doctest::Approx(0.5 / 0.53).epsilon(1e-14));

  EventParams par;
  WarningCounters warn;
  auto s1 = [](double u) { return u; };
  auto s2 = [](double u) { return -u; };
  double thresh = 0.03 / 0.53;
  auto birth = sample_event(1.0, 0.03, 2, par, draws(0.0, thresh - 1e-9, 0.0, 0.5), true,
                            true, s1, s2, warn);
  CHECK(birth.kind == EventKind::Add);
  CHECK(birth.u == 1);
  auto removal = sample_event(1.0, 0.03, 2, par, draws(0.0, thresh + 1e-9, 0.0, 0.5), true,
                              true, s1, s2, warn);
  CHECK(removal.kind == EventKind::Remove);
  CHECK(removal.u == -1);
}

TEST_CASE("no event beyond the step probability") {
  EventParams par;
  WarningCounters warn;
  auto s = [](double u) { return u; };
  double dt = 0.1, add = 0.2;  // pe = 0.02
  auto out = sample_event(dt, add, 0, par, draws(0.020001, 0.0, 0.0, 0.5), true, true, s, s,
                          warn);
  CHECK(out.kind == EventKind::None);
  CHECK(out.u == 0);
  auto fires = sample_event(dt, add, 0, par, draws(0.019999, 0.0, 0.0, 0.5), true, true, s, s,
                            warn);
  CHECK(fires.kind == EventKind::Add);
}

TEST_CASE("zero total rate is a guaranteed no-op") {
  EventParams par;
  WarningCounters warn;
  auto s = [](double u) { return u; };
  auto out = sample_event(0.5, 0.0, 0, par, draws(0.0, 0.0, 0.0, 0.0), true, true, s, s, warn);
  CHECK(out.kind == EventKind::None);
}

TEST_CASE("accident parameters come from the configured distributions") {
  EventParams par;
  par.cap_dist = Distribution::discrete({0.99}, {1.0});
  WarningCounters warn;
  auto s = [](double u) { return 3.0 + u; };
  auto out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.0, 0.25, 0.5, 0.7), true, true,
                          s, s, warn);
  REQUIRE(out.kind == EventKind::Add);
  CHECK(out.added.c == 0.99);                 // point mass
  CHECK(out.added.s == doctest::Approx(0.2 + 0.5 * 0.8).epsilon(1e-15));
  CHECK(out.added.p == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("degenerate mixture component falls back to the other") {
  EventParams par;  // beta = 0.5
  WarningCounters warn;
  auto s1 = [](double) { return 1.0; };
  auto s2 = [](double) { return 2.0; };
  // wants type 1 (u_type < beta) but type 1 degenerate
  auto out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.2, 0.5), false, true, s1, s2,
                          warn);
  REQUIRE(out.kind == EventKind::Add);
  CHECK(out.added.p == 2.0);
  CHECK(warn.measure_fallback == 1);
  // wants type 2 but type 2 degenerate
  out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.7, 0.5), true, false, s1, s2, warn);
  REQUIRE(out.kind == EventKind::Add);
  CHECK(out.added.p == 1.0);
  CHECK(warn.measure_fallback == 2);
  // both degenerate: suppressed, u = 0
  out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.2, 0.5), false, false, s1, s2, warn);
  CHECK(out.kind == EventKind::None);
  CHECK(out.u == 0);
}

TEST_CASE("mixture respects beta without fallback") {
  EventParams par;  // beta = 0.5
  WarningCounters warn;
  auto s1 = [](double) { return 1.0; };
  auto s2 = [](double) { return 2.0; };
  auto out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.7, 0.5), true, true, s1, s2,
                          warn);
  REQUIRE(out.kind == EventKind::Add);
  CHECK(out.added.p == 2.0);  // u_type = 0.7 >= beta picks type 2
  out = sample_event(1.0, 1.0, 0, par, draws(0.0, 0.0, 0.3, 0.5), true, true, s1, s2, warn);
  CHECK(out.added.p == 1.0);
  CHECK(warn.measure_fallback == 0);
}

TEST_CASE("removal index is uniform over the accident list") {
  EventParams par;
  WarningCounters warn;
  auto s = [](double u) { return u; };
  auto pick = [&](double u_removal, int m) {
    auto out = sample_event(1.0, 0.0, m, par, draws(0.0, 0.999, 0.0, 0.0, 0.0, 0.0, u_removal),
                            true, true, s, s, warn);
    REQUIRE(out.kind == EventKind::Remove);
    return out.removed_index;
  };
  CHECK(pick(0.0, 3) == 0);
  CHECK(pick(0.34, 3) == 1);
  CHECK(pick(0.999, 3) == 2);
  CHECK(pick(0.9999999, 1) == 0);
  auto out = sample_event(1.0, 0.0, 3, par, draws(0.0, 0.999, 0.0, 0.0, 0.0, 0.0, 0.5), true,
                          true, s, s, warn);
  CHECK(out.l == 2);  // 1-based slot of index 1
}

TEST_CASE("full accident table converts a birth into a logged no-op") {
  EventParams par;
  par.max_accidents = 2;
  WarningCounters warn;
  auto s = [](double u) { return u; };
  auto out = sample_event(1.0, 1.0, 2, par, draws(0.0, 0.0, 0.2, 0.5), true, true, s, s, warn);
  CHECK(out.kind == EventKind::None);
  CHECK(warn.accident_overflow == 1);
}

TEST_CASE("event parameter validation") {
  EventParams par;
  CHECK_NOTHROW(par.validate());
  par.lambda_flux = -1.0;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = EventParams{};
  par.lambda_flux = 0.0;  // switching a channel off is allowed
  CHECK_NOTHROW(par.validate());
  par = EventParams{};
  par.beta = 1.5;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = EventParams{};
  par.c_max = 1.0;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = EventParams{};
  par.cap_dist = Distribution::discrete({0.995}, {1.0});  // above c_max
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = EventParams{};
  par.size_dist = Distribution::uniform(-0.1, 1.0);
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = EventParams{};
  par.max_accidents = 0;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
}

TEST_CASE("draw stream yields uniforms in [0,1) in a fixed order") {
  DrawStream a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    StepDraws da = a.next_step();
    StepDraws db = b.next_step();
    CHECK(da.event == db.event);
    CHECK(da.removal == db.removal);
    for (double v : {da.event, da.kind, da.type, da.position, da.size, da.capacity, da.removal}) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("seed mixing separates run indices") {
  CHECK(mix_seed(1, 0) == mix_seed(1, 0));
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  std::vector<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) seen.push_back(mix_seed(99, i));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

}  // TEST_SUITE
