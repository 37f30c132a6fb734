#include <doctest.h>

#include <cmath>
#include <random>

#include "trafficsim/capacity.hpp"

using namespace traffic;

namespace {

RoadConfig reference_road() {
  return RoadConfig{-10.0, 10.0, {{-10.0, 7.0}, {0.0, 5.0}, {5.0, 7.0}}, 0.02};
}

}  // namespace

TEST_SUITE("capacity") {

TEST_CASE("piecewise road values, left-closed segments") {
  RoadConfig road = reference_road();
  road.validate();
  CHECK(road.raw_at(-5.0) == 7.0);
  CHECK(road.raw_at(2.0) == 5.0);
  CHECK(road.raw_at(7.0) == 7.0);
  CHECK(road.raw_at(0.0) == 5.0);
  CHECK(road.raw_at(5.0) == 7.0);
  CHECK(road.min_factor() == 5.0);
  CHECK(road.max_factor() == 7.0);
}

TEST_CASE("positions wrap periodically") {
  RoadConfig road = reference_road();
  CHECK(road.wrap(-10.0) == -10.0);
  CHECK(road.wrap(10.0) == -10.0);
  CHECK(road.wrap(12.0) == doctest::Approx(-8.0).epsilon(1e-15));
  CHECK(road.wrap(-31.0) == doctest::Approx(9.0).epsilon(1e-15));
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    double x = u(eng);
    double w = road.wrap(x);
    CHECK(w >= road.a);
    CHECK(w < road.b);
    CHECK(road.raw_at(x) == road.raw_at(x + road.span()));
  }
}

TEST_CASE("linear smoothing ramps across interior jumps") {
  RoadConfig road = reference_road();
  CHECK(road.smoothed_at(0.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(road.smoothed_at(-0.01) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(road.smoothed_at(0.01) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(road.smoothed_at(0.005) == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(road.smoothed_at(5.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(road.smoothed_at(-5.0) == 7.0);  // far from every jump
  CHECK(road.smoothed_at(2.5) == 5.0);
}

TEST_CASE("smoothing ramps across the periodic seam") {
  RoadConfig road{-10.0, 10.0, {{-10.0, 2.0}, {0.0, 4.0}}, 0.02};
  road.validate();
  CHECK(road.smoothed_at(-10.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(road.smoothed_at(9.995) == doctest::Approx(3.5).epsilon(1e-13));
  CHECK(road.smoothed_at(-9.995) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(road.smoothed_at(5.0) == 4.0);
}

TEST_CASE("smoothed profile stays within segment bounds and Lipschitz slope") {
  RoadConfig road = reference_road();
  double slope = (7.0 - 5.0) / road.smoothing_width;
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    double x = u(eng), y = u(eng);
    double cx = road.smoothed_at(x), cy = road.smoothed_at(y);
    CHECK(cx >= road.min_factor());
    CHECK(cx <= road.max_factor());
    CHECK(std::abs(cx - cy) <= slope * std::abs(x - y) * (1.0 + 1e-9) + 1e-12);
  }
}

TEST_CASE("road validation rejects malformed segment lists") {
  RoadConfig r = reference_road();
  r.segments[0].from = -9.0;  // must start at a
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = reference_road();
  r.segments[1].factor = 0.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = reference_road();
  std::swap(r.segments[1], r.segments[2]);
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = reference_road();
  r.segments.push_back({5.015, 3.0});  // shorter than the smoothing width
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = reference_road();
  r.smoothing_width = -0.1;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("accident factor drops capacity on its interval, closed endpoints") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{0.0, 2.0, 0.5}}};
  CHECK(acc.factor_at(0.0, road) == 0.5);
  CHECK(acc.factor_at(0.99, road) == 0.5);
  CHECK(acc.factor_at(1.0, road) == 0.5);
  CHECK(acc.factor_at(1.01, road) == 1.0);
  CHECK(acc.factor_at(-1.01, road) == 1.0);
}

TEST_CASE("overlapping accidents multiply") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{0.0, 2.0, 0.9}, {0.5, 2.0, 0.95}}};
  CHECK(acc.factor_at(0.2, road) == doctest::Approx(0.1 * 0.05).epsilon(1e-14));
  CHECK(acc.factor_at(-0.8, road) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(acc.factor_at(1.2, road) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("accident interval wraps around the seam") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{9.9, 0.4, 0.5}}};
  CHECK(acc.factor_at(9.75, road) == 0.5);
  CHECK(acc.factor_at(-9.95, road) == 0.5);  // 0.15 past the seam
  CHECK(acc.factor_at(-9.65, road) == 1.0);
  CHECK(acc.factor_at(9.65, road) == 1.0);
}

TEST_CASE("accident wider than the road covers every point") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{0.0, 25.0, 0.3}}};
  for (double x : {-10.0, -3.3, 0.0, 4.7, 9.99}) CHECK(acc.factor_at(x, road) == 0.7);
}

TEST_CASE("smoothed accident edges ramp linearly") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{0.0, 2.0, 0.5}}};
  double eps = 0.1;  // ramp spans [s/2 - eps/2, s/2 + eps/2] around each edge
  CHECK(acc.smoothed_factor_at(0.0, road, eps) == 0.5);
  CHECK(acc.smoothed_factor_at(0.9, road, eps) == 0.5);
  CHECK(acc.smoothed_factor_at(1.0 + eps, road, eps) == 1.0);
  CHECK(acc.smoothed_factor_at(1.0, road, eps) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(acc.smoothed_factor_at(-1.0, road, eps) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(acc.smoothed_factor_at(1.04, road, eps) == doctest::Approx(0.95).epsilon(1e-13));
}

TEST_CASE("velocity model and flux") {
  VelocityModel vel;
  CHECK(vel.v(0.0) == 1.0);
  CHECK(vel.v(0.4) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(vel.v(1.0) == 0.0);
  CHECK(vel.v(1.3) == 0.0);  // clamped, never negative
  CHECK(vel.flux(2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(VelocityModel::rho_star == 0.5);
  VelocityModel fast{2.0};
  CHECK(fast.v(0.5) == 1.0);
}

TEST_CASE("total capacity is road times accidents") {
  RoadConfig road = reference_road();
  AccidentSet acc{{{2.0, 1.0, 0.99}}};
  CHECK(total_capacity(2.0, acc, road) == doctest::Approx(5.0 * 0.01).epsilon(1e-14));
  CHECK(total_capacity(-5.0, acc, road) == 7.0);
  CHECK(road_capacity(0.0, road) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(accident_capacity(2.0, acc, road) == doctest::Approx(0.01).epsilon(1e-14));
}

}  // TEST_SUITE
