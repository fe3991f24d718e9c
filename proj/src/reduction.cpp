#include "riccati/reduction.hpp"

#include <cmath>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

RiccatiSystem riccati_from_linear(const LinearSecondOrder& lin) {
  return RiccatiSystem::make(lin.c.scaled(-1.0), lin.b.scaled(-1.0), CoefficientFn::constant(-1.0),
                             lin.domain);
}

LinearSolution solve_linear(const LinearSecondOrder& lin, double u0, double du0,
                            const TimeGrid& grid, double tol) {
  if (!lin.domain.contains(grid.front()) || !lin.domain.contains(grid.back())) {
    throw Error(ErrorCode::DomainExceeded, "grid leaves the equation's domain");
  }
  const auto b = lin.b;
  const auto c = lin.c;
  VectorField f = [b, c](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -b(t) * y[1] - c(t) * y[0];
  };
  const double y0[2] = {u0, du0};
  const auto states = integrate_ivp(f, y0, grid, tol);
  LinearSolution out{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.u[i] = states[i][0];
    out.du[i] = states[i][1];
  }
  return out;
}

Trajectory log_derivative(const LinearSolution& u) {
  if (u.u.size() != u.grid.size() || u.du.size() != u.grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "u and u' must be sampled on the grid");
  }
  Trajectory out{u.grid, {}};
  out.states.reserve(u.grid.size());
  for (std::size_t i = 0; i < u.grid.size(); ++i) {
    if (u.u[i] == 0.0 && u.du[i] == 0.0) {
      throw Error(ErrorCode::BothZero, "u and u' vanish together", i);
    }
    out.states.emplace_back(u.du[i], u.u[i]);
  }
  return out;
}

LinearSolution reconstruct_u(const Trajectory& x, double u0) {
  if (u0 == 0.0) throw Error(ErrorCode::InvalidArgument, "u0 must be nonzero");
  const std::size_t n = x.size();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x.states[i].q() == 0.0) throw Error(ErrorCode::PoleOnPath, "x is infinite", i);
    xs[i] = x.states[i].value();
  }
  // A pole strictly between nodes shows up as a sign change with large |x|
  // on both sides.
  for (std::size_t i = 1; i < n; ++i) {
    if (xs[i - 1] * xs[i] < 0.0 && std::abs(xs[i - 1]) > 1.0 && std::abs(xs[i]) > 1.0) {
      throw Error(ErrorCode::PoleOnPath,
                  fmt::format("x jumps from {:.6g} to {:.6g}", xs[i - 1], xs[i]), i);
    }
  }
  const auto v = cumulative_quadrature(x.grid, xs);
  LinearSolution out{x.grid, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] = u0 * std::exp(v[i]);
    out.du[i] = xs[i] * out.u[i];
  }
  return out;
}

bool projection_equivalence(std::pair<double, double> first, std::pair<double, double> second,
                            double tol) {
  const double n1 = std::hypot(first.first, first.second);
  const double n2 = std::hypot(second.first, second.second);
  if (n1 == 0.0 || n2 == 0.0) {
    throw Error(ErrorCode::ZeroData, "initial data (0, 0) is not a Riccati solution");
  }
  const double det = first.first * second.second - first.second * second.first;
  return std::abs(det) <= tol * n1 * n2;
}

}  // namespace riccati
