#pragma once

#include <cmath>
#include <random>

#include "riccati/core.hpp"
#include "riccati/integrator.hpp"

namespace testsys {

using namespace riccati;

inline RiccatiSystem zero(Interval d = {0.0, 1.0}) {
  return RiccatiSystem::make(CoefficientFn::constant(0.0), CoefficientFn::constant(0.0),
                             CoefficientFn::constant(0.0), d);
}

/// x' = 1 + x^2, solutions tan(t + c).
inline RiccatiSystem tangent(Interval d = {0.0, 3.2}) {
  return RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::constant(0.0),
                             CoefficientFn::constant(1.0), d);
}

/// The mixed system (1, 0.3 t, 0.5) on [0, 1] used for the six-way comparisons.
inline RiccatiSystem mixed() {
  return RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::polynomial({0.0, 0.3}),
                             CoefficientFn::constant(0.5), {0.0, 1.0});
}

/// Smooth, nowhere-vanishing coefficients for the reduced equations.
inline RiccatiSystem smooth() {
  return RiccatiSystem::make(CoefficientFn::polynomial({1.0, 0.2, 0.1}),
                             CoefficientFn::polynomial({0.3, -0.4}),
                             CoefficientFn::polynomial({0.5, 0.25}), {0.0, 1.0});
}

inline double tan_distance(const ProjectivePoint& x, double t, double shift = 0.0) {
  return projective_distance(x, ProjectivePoint(std::sin(t + shift), std::cos(t + shift)));
}

inline double max_distance(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, projective_distance(a.states[i], b.states[i]));
  return m;
}

}  // namespace testsys
