#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gaitcert/integrator.hpp"

using namespace gaitcert;
using V2 = Eigen::Vector2d;

TEST_CASE("harmonic oscillator accuracy") {
  auto deriv = [](double, const V2& x) { return V2(x[1], -x[0]); };
  IntegratorOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  auto rk = make_rk45<V2>(deriv, opt);
  const double T = 10.0;
  auto r = rk.integrate(0.0, V2(1.0, 0.0), T, {});
  REQUIRE(r.reason == StopReason::reached_t_end);
  CHECK(r.x[0] == doctest::Approx(std::cos(T)).epsilon(1e-8));
  CHECK(r.x[1] == doctest::Approx(-std::sin(T)).epsilon(1e-8));
}

TEST_CASE("directional zero crossing is located precisely") {
  auto deriv = [](double, const V2& x) { return V2(x[1], -x[0]); };
  IntegratorOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  opt.event_value_tol = 1e-12;
  auto rk = make_rk45<V2>(deriv, opt);

  std::vector<Event<V2>> ev(1);
  // x = cos(t) falls through zero at t = pi/2.
  ev[0] = {[](double, const V2& x) { return x[0]; }, -1, 0.0};
  auto r = rk.integrate(0.0, V2(1.0, 0.0), 10.0, ev);
  REQUIRE(r.reason == StopReason::event);
  CHECK(r.event_index == 0);
  CHECK(r.t == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
  CHECK(std::abs(r.x[0]) < 1e-10);

  // Rising-only detection skips the fall and fires at 3*pi/2.
  ev[0].direction = +1;
  r = rk.integrate(0.0, V2(1.0, 0.0), 10.0, ev);
  REQUIRE(r.reason == StopReason::event);
  CHECK(r.t == doctest::Approx(3.0 * M_PI / 2.0).epsilon(1e-9));
}

TEST_CASE("events stay disarmed until the threshold clears") {
  auto deriv = [](double, const V2& x) { return V2(x[1], -x[0]); };
  IntegratorOptions opt;
  auto rk = make_rk45<V2>(deriv, opt);

  // Starts at x = 0 moving up; with an arming threshold the event may only
  // fire after x exceeded it, i.e. on the falling flank at t = pi.
  std::vector<Event<V2>> ev(1);
  ev[0] = {[](double, const V2& x) { return x[0]; }, -1, 1e-3};
  auto r = rk.integrate(0.0, V2(0.0, 1.0), 10.0, ev);
  REQUIRE(r.reason == StopReason::event);
  CHECK(r.t == doctest::Approx(M_PI).epsilon(1e-7));
}

TEST_CASE("dense observer covers the full span") {
  auto deriv = [](double, const V2& x) { return V2(x[1], -x[0]); };
  IntegratorOptions opt;
  auto rk = make_rk45<V2>(deriv, opt);
  double t_last = 0.0;
  long calls = 0;
  auto obs = [&](double t0, const V2&, const V2&, double t1, const V2&,
                 const V2&) {
    CHECK(t0 == doctest::Approx(t_last));
    t_last = t1;
    ++calls;
  };
  auto r = rk.integrate(0.0, V2(1.0, 0.0), 5.0, {}, obs);
  REQUIRE(r.reason == StopReason::reached_t_end);
  CHECK(t_last == doctest::Approx(5.0));
  CHECK(calls == r.n_steps);
}
