#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riccati/error.hpp"
#include "riccati/integrator.hpp"
#include "systems.hpp"

using namespace riccati;

namespace {

const VectorField kTangentField = [](double, std::span<const double> y, std::span<double> dy) {
  dy[0] = 1.0 + y[0] * y[0];
};

double tangent_error(double tol) {
  const auto grid = TimeGrid::uniform(0.0, 1.4, 1001);
  const double y0[1] = {0.0};
  const auto states = integrate_ivp(kTangentField, y0, grid, tol);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::max(err, std::abs(states[i][0] - std::tan(grid[i])));
  }
  return err;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TimeGrid({0.0}), Error);
  CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), Error);
  CHECK(TimeGrid::uniform(0.0, 2.0, 5)[2] == 1.0);
}

TEST_CASE("zero field keeps the initial value") {
  const VectorField zero = [](double, std::span<const double>, std::span<double> dy) {
    dy[0] = 0.0;
    dy[1] = 0.0;
  };
  const double y0[2] = {3.0, -1.5};
  const auto states = integrate_ivp(zero, y0, TimeGrid::uniform(0.0, 5.0, 11));
  for (const auto& s : states) {
    CHECK(s[0] == 3.0);
    CHECK(s[1] == -1.5);
  }
}

TEST_CASE("exponential within tol") {
  const VectorField f = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[0];
  };
  const auto grid = TimeGrid::uniform(0.0, 1.0, 1001);
  const double y0[1] = {1.0};
  const double tol = 1e-9;
  const auto states = integrate_ivp(f, y0, grid, tol);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(states[i][0] - std::exp(grid[i])) <= tol);
  }
}

TEST_CASE("tangent within ten times tol up to 1.4") {
  for (double tol : {1e-6, 1e-8, 1e-9, 1e-10}) {
    CHECK(tangent_error(tol) <= 10.0 * tol);
  }
}

TEST_CASE("halving tol never increases the tangent error") {
  double previous = tangent_error(1e-5);
  for (double tol = 5e-6; tol >= 1e-11; tol *= 0.5) {
    const double err = tangent_error(tol);
    CHECK(err <= previous);
    previous = err;
  }
}

TEST_CASE("blow-up in a fixed chart is a step-size underflow") {
  const auto grid = TimeGrid::uniform(0.0, 2.0, 11);
  const double y0[1] = {0.0};
  try {
    integrate_ivp(kTangentField, y0, grid);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepSizeUnderflow);
  }
}

TEST_CASE("projective integration through the pole of tan") {
  const auto sys = testsys::tangent({0.0, std::numbers::pi});
  const auto grid = TimeGrid::uniform(0.0, std::numbers::pi, 1001);
  const auto traj = integrate_riccati_projective(sys, ProjectivePoint::finite(0.0), grid);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::max(err, testsys::tan_distance(traj.states[i], grid[i]));
  }
  CHECK(err <= 1e-8);
  // Node 500 is t = pi/2 to rounding: the state is infinity there.
  CHECK(traj.states[500].is_infinite(1e-8));
  CHECK(traj.states[750].value() == doctest::Approx(std::tan(grid[750])).epsilon(1e-7));
}

TEST_CASE("projective integration of constant and linear systems") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 101);
  const auto still = integrate_riccati_projective(testsys::zero(), ProjectivePoint::finite(7.0), grid);
  for (const auto& s : still.states) CHECK(s.value() == doctest::Approx(7.0).epsilon(1e-15));
  const auto lin = RiccatiSystem::make(CoefficientFn::constant(0.0), CoefficientFn::constant(-0.7),
                                       CoefficientFn::constant(0.0), {0.0, 1.0});
  const auto traj = integrate_riccati_projective(lin, ProjectivePoint::finite(2.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(traj.states[i].value() - 2.0 * std::exp(-0.7 * grid[i])) <= 1e-9);
  }
}

TEST_CASE("reciprocal chart gives reciprocal trajectories") {
  const auto sys = testsys::mixed();
  // w = 1/x solves w' = -(a2 + a1 w + a0 w^2).
  const auto rec = RiccatiSystem::make(sys.a2.scaled(-1.0), sys.a1.scaled(-1.0),
                                       sys.a0.scaled(-1.0), sys.domain);
  const auto grid = TimeGrid::uniform(0.0, 1.0, 201);
  const auto x = integrate_riccati_projective(sys, ProjectivePoint::finite(0.4), grid);
  const auto w = integrate_riccati_projective(rec, ProjectivePoint::finite(2.5), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(projective_distance(x.states[i], ProjectivePoint(w.states[i].q(), w.states[i].p())) <= 1e-7);
  }
}

TEST_CASE("integration is deterministic") {
  const auto grid = TimeGrid::uniform(0.0, 3.0, 301);
  const auto a = integrate_riccati_projective(testsys::tangent(), ProjectivePoint::finite(0.3), grid);
  const auto b = integrate_riccati_projective(testsys::tangent(), ProjectivePoint::finite(0.3), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.states[i].p() == b.states[i].p());
    CHECK(a.states[i].q() == b.states[i].q());
  }
}

TEST_CASE("shooting counts passages through infinity") {
  const auto shot = shoot_riccati(testsys::tangent({0.0, 10.0}), ProjectivePoint::finite(0.0), 0.0, 10.0);
  // tan has poles at pi/2, 3pi/2, 5pi/2 in (0, 10]; x increases through each.
  CHECK(shot.poles == 3);
  CHECK(shot.signed_poles == -3);
  CHECK(testsys::tan_distance(shot.end, 10.0) <= 1e-8);
}

TEST_CASE("cumulative quadrature") {
  const auto grid = TimeGrid::uniform(0.0, 1.0, 101);
  std::vector<double> zero(101, 0.0), one(101, 1.0), sq(101);
  for (std::size_t i = 0; i < 101; ++i) sq[i] = grid[i] * grid[i];
  for (double v : cumulative_quadrature(grid, zero)) CHECK(v == 0.0);
  const auto ones = cumulative_quadrature(grid, one);
  for (std::size_t i = 0; i < 101; ++i) CHECK(ones[i] == doctest::Approx(grid[i]).epsilon(1e-14));
  CHECK(std::abs(cumulative_quadrature(grid, sq).back() - 1.0 / 3.0) <= 1e-10);
  // Cubics are exact on irregular grids too.
  const TimeGrid uneven({0.0, 0.1, 0.35, 0.4, 0.8, 1.0});
  std::vector<double> cube;
  for (double t : uneven.times()) cube.push_back(t * t * t - t);
  const auto q = cumulative_quadrature(uneven, cube);
  for (std::size_t i = 0; i < uneven.size(); ++i) {
    const double t = uneven[i];
    CHECK(std::abs(q[i] - (t * t * t * t / 4.0 - t * t / 2.0)) <= 1e-15);
  }
}

TEST_CASE("finite-difference weights") {
  const std::vector<double> nodes{-1.0, 0.0, 1.0};
  const auto w1 = fd_weights(0.0, nodes, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0.0));
  CHECK(w1[2] == doctest::Approx(0.5));
  const auto w2 = fd_weights(0.0, nodes, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  const auto grid = TimeGrid::uniform(0.0, 1.0, 201);
  std::vector<double> s(201);
  for (std::size_t i = 0; i < 201; ++i) s[i] = std::sin(grid[i]);
  const auto d = differentiate_samples(grid, s);
  for (std::size_t i = 0; i < 201; ++i) CHECK(std::abs(d[i] - std::cos(grid[i])) <= 1e-8);
}

TEST_CASE("riccati residual sees poles as regular points") {
  const auto grid = TimeGrid::uniform(0.0, 3.0, 601);
  Trajectory exact{grid, {}};
  for (double t : grid.times()) exact.states.emplace_back(std::sin(t), std::cos(t));
  for (double r : riccati_residual(testsys::tangent(), exact)) CHECK(std::abs(r) <= 1e-6);
}

TEST_CASE("hermite interpolation is exact on cubics") {
  auto f = [](double t) { return 2.0 * t * t * t - t + 1.0; };
  auto df = [](double t) { return 6.0 * t * t - 1.0; };
  CHECK(hermite_interpolate(0.5, 1.5, f(0.5), f(1.5), df(0.5), df(1.5), 1.1) ==
        doctest::Approx(f(1.1)).epsilon(1e-14));
}
