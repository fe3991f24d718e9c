#pragma once

#include <utility>

#include "riccati/core.hpp"
#include "riccati/integrator.hpp"

namespace riccati {

/// u'' + b(t) u' + c(t) u = 0.
struct LinearSecondOrder {
  CoefficientFn b = CoefficientFn::constant(0.0);
  CoefficientFn c = CoefficientFn::constant(0.0);
  Interval domain{0.0, 1.0};
};

/// x = u'/u turns the linear equation into x' = -c - b x - x^2.
RiccatiSystem riccati_from_linear(const LinearSecondOrder& lin);

/// Samples of u and u' on a grid.
struct LinearSolution {
  TimeGrid grid;
  std::vector<double> u;
  std::vector<double> du;
};

/// Integrates the equation as the first-order system (u, u').
LinearSolution solve_linear(const LinearSecondOrder& lin, double u0, double du0,
                            const TimeGrid& grid, double tol = kDefaultTol);

/// x = u'/u as the homogeneous pair (u' : u); zeros of u give infinity.
/// Throws BothZero where u = u' = 0.
Trajectory log_derivative(const LinearSolution& u);

/// u(t) = u0 exp(integral of x). Throws PoleOnPath if x passes through
/// infinity (the caller has to split the interval there).
LinearSolution reconstruct_u(const Trajectory& x, double u0);

/// Whether two initial pairs (u(0), u'(0)) are proportional, i.e. give the
/// same solution of the Riccati equation. The determinant is compared with
/// 1e-12 relative to the product of the pair norms. Throws ZeroData for (0, 0).
bool projection_equivalence(std::pair<double, double> first, std::pair<double, double> second,
                            double tol = 1e-12);

}  // namespace riccati
