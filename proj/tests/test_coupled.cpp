#include <doctest.h>

#include <tuple>
#include <vector>

#include "trafficsim/coupled.hpp"

using namespace traffic;

namespace {

RoadConfig flat_road(double a, double b) { return RoadConfig{a, b, {{a, 1.0}}, 0.0}; }

RoadConfig reference_road() {
  return RoadConfig{-10.0, 10.0, {{-10.0, 7.0}, {0.0, 5.0}, {5.0, 7.0}}, 0.02};
}

EventParams no_events() {
  EventParams par;
  par.lambda_flux = 0.0;
  par.lambda_jam = 0.0;
  par.lambda_dissolve = 0.0;
  return par;
}

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("without accidents both halves reproduce the standalone models bitwise") {
  auto rho0 = [](double) { return 0.4; };
  RoadConfig road = reference_road();

  CoupledModel cm(road, {}, no_events());
  auto cs = cm.init(100, 50, rho0);

  MacroModel mm(road, {}, no_events());
  auto ms = mm.init_cells(100, rho0);

  MicroModel um(road, {}, no_events());
  auto us = um.state_from_profile(50, rho0);

  REQUIRE(cs.L == us.L);
  for (int i = 0; i < 50; ++i) REQUIRE(cs.x[i] == us.x[i]);

  double dt = 0.02;
  DrawStream s1(9), s2(9), s3(9);
  for (int step = 0; step < 50; ++step) {
    cm.step(cs, dt, s1);
    mm.step(ms, dt, s2);
    um.step(us, dt, s3);
    for (int i = 0; i < 100; ++i) CHECK(cs.macro.rho[i] == ms.rho[i]);
    for (int i = 0; i < 50; ++i) CHECK(cs.x[i] == us.x[i]);
  }
}

TEST_CASE("a macro-owned accident slows exactly the covered vehicles") {
  auto rho0 = [](double) { return 0.4; };
  CoupledModel base(flat_road(0.0, 10.0), {}, no_events());
  auto plain = base.init(50, 10, rho0);
  auto blocked = plain;
  blocked.macro.acc.items.push_back({plain.x[3], 0.5, 0.99});
  base.macro().refresh_capacity(blocked.macro);

  double x3 = plain.x[3];
  double dt = 0.01;
  DrawStream s1(1), s2(1);
  base.step(plain, dt, s1);
  base.step(blocked, dt, s2);

  double free_disp = plain.x[3] - x3;
  double blocked_disp = blocked.x[3] - x3;
  REQUIRE(free_disp > 0.0);
  CHECK(blocked_disp / free_disp == doctest::Approx(0.01).epsilon(1e-12));
  // vehicles away from the accident are untouched
  for (int i : {0, 1, 5, 8}) CHECK(blocked.x[i] == plain.x[i]);
}

TEST_CASE("accident logs of macro-alone and coupled runs coincide under one seed") {
  auto rho0 = [](double) { return 0.4; };
  RoadConfig road = reference_road();
  EventParams par;  // scaled up so the short run sees several events
  par.lambda_flux *= 20.0;
  par.lambda_jam *= 20.0;
  par.lambda_dissolve *= 4.0;

  MacroModel mm(road, {}, par);
  auto ms = mm.init_cells(200, rho0);
  CoupledModel cm(road, {}, par);
  auto cs = cm.init(200, 100, rho0);

  using Entry = std::tuple<int, double, double, double, int, int, int>;
  auto record = [](const EventOutcome& o) {
    return Entry{static_cast<int>(o.kind), o.added.p, o.added.s, o.added.c,
                 o.removed_index, o.u, o.l};
  };

  double dt = 0.01;
  DrawStream s1(20260825), s2(20260825);
  int births = 0;
  for (int step = 0; step < 400; ++step) {
    auto em = record(mm.step(ms, dt, s1));
    auto ec = record(cm.step(cs, dt, s2));
    CHECK(em == ec);
    if (std::get<0>(em) == static_cast<int>(EventKind::Add)) ++births;
  }
  CHECK(births > 0);
  REQUIRE(ms.acc.count() == cs.macro.acc.count());
  for (int j = 0; j < ms.acc.count(); ++j) {
    CHECK(ms.acc.items[j].p == cs.macro.acc.items[j].p);
    CHECK(ms.acc.items[j].s == cs.macro.acc.items[j].s);
    CHECK(ms.acc.items[j].c == cs.macro.acc.items[j].c);
  }
}

TEST_CASE("vehicle-level density field starts on the macro profile") {
  auto rho0 = [](double) { return 0.4; };
  CoupledModel cm(flat_road(0.0, 10.0), {}, no_events());
  auto cs = cm.init(100, 200, rho0);
  for (double pos : {0.3, 2.9, 5.0, 7.7, 9.6})
    CHECK(cm.micro_density_at(cs, pos) == doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("step rejects dt beyond the vehicle collision bound in strict mode") {
  auto rho0 = [](double) { return 0.4; };
  CoupledModel strict(flat_road(0.0, 10.0), {}, no_events());
  auto st = strict.init(50, 100, rho0);  // L = 0.04, bound 0.04
  DrawStream s(2);
  CHECK_THROWS_AS(strict.step(st, 0.05, s), std::domain_error);

  MicroOptions relaxed;
  relaxed.enforce_cfl = false;
  CoupledModel loose(flat_road(0.0, 10.0), {}, no_events(), {}, relaxed);
  auto st2 = loose.init(50, 100, rho0);
  DrawStream s2(2);
  CHECK_NOTHROW(loose.step(st2, 0.05, s2));
  for (int i = 0; i + 1 < 100; ++i) CHECK(st2.x[i + 1] - st2.x[i] >= st2.L - 1e-12);
}

}  // TEST_SUITE
