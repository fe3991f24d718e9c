#pragma once

#include <array>
#include <cmath>
#include <string>

#include "riccati/coefficient.hpp"

namespace riccati {

/// A point of the extended real line in homogeneous coordinates (p : q).
/// Finite x is (x : 1); infinity is (1 : 0). Stored canonicalized:
/// p^2 + q^2 = 1 with the first nonzero coordinate positive.
class ProjectivePoint {
 public:
  ProjectivePoint() : p_(0.0), q_(1.0) {}
  ProjectivePoint(double p, double q);

  static ProjectivePoint finite(double x) { return {x, 1.0}; }
  static ProjectivePoint infinity() { return {1.0, 0.0}; }

  double p() const { return p_; }
  double q() const { return q_; }

  bool is_infinite(double tol = 0.0) const { return std::abs(q_) <= tol; }

  /// Scalar value p/q; +inf when q == 0.
  double value() const;

  /// Equality of canonical pairs within an absolute tolerance.
  bool approx_equal(const ProjectivePoint& other, double tol = 1e-12) const;

  std::string to_string() const;

 private:
  double p_;
  double q_;
};

/// |sin| of the angle between the two lines through the origin: a metric on
/// RP^1 equal to |x - y| / sqrt((1 + x^2)(1 + y^2)) for finite points.
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Determinant p_a q_b - p_b q_a; the homogeneous form of a - b.
inline double difference(const ProjectivePoint& a, const ProjectivePoint& b) {
  return a.p() * b.q() - b.p() * a.q();
}

/// 2x2 real matrix [[alpha, beta], [gamma, delta]] acting on RP^1 by
/// x -> (alpha x + beta) / (gamma x + delta).
struct Sl2Element {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 1.0;

  static Sl2Element identity() { return {}; }

  double det() const { return alpha * delta - beta * gamma; }
  double trace() const { return alpha + delta; }

  Sl2Element operator*(const Sl2Element& rhs) const {
    return {alpha * rhs.alpha + beta * rhs.gamma, alpha * rhs.beta + beta * rhs.delta,
            gamma * rhs.alpha + delta * rhs.gamma, gamma * rhs.beta + delta * rhs.delta};
  }
  Sl2Element operator-() const { return {-alpha, -beta, -gamma, -delta}; }

  Sl2Element inverse() const { return {delta, -beta, -gamma, alpha}; }

  /// Divides every entry by sqrt(det); requires det > 0.
  Sl2Element renormalized() const;

  double max_abs_diff(const Sl2Element& other) const;

  std::array<double, 4> entries() const { return {alpha, beta, gamma, delta}; }
};

ProjectivePoint moebius_apply(const Sl2Element& a, const ProjectivePoint& x);

/// The three one-parameter subgroups of the action: L0 translates
/// (x -> x + s), L1 scales (x -> e^s x), L2 is the special conformal map
/// x -> x / (1 - s x).
enum class Generator { L0 = 0, L1 = 1, L2 = 2 };

Sl2Element sl2_exp_generator(Generator which, double s);

/// (x - x1)(x2 - x3) / ((x - x2)(x1 - x3)), computed from 2x2 determinants.
/// Throws DegenerateTriple when two of x1, x2, x3 coincide and PoleValue
/// when the value is infinite (x == x2).
double cross_ratio(const ProjectivePoint& x, const ProjectivePoint& x1,
                   const ProjectivePoint& x2, const ProjectivePoint& x3);

/// Same quantity as a projective point, so x == x2 yields infinity.
ProjectivePoint cross_ratio_point(const ProjectivePoint& x, const ProjectivePoint& x1,
                                  const ProjectivePoint& x2, const ProjectivePoint& x3);

/// The superposition-constant convention
/// (x - x2)(x3 - x1) / ((x - x1)(x3 - x2)); equals cross_ratio(x, x2, x1, x3).
/// Vanishes at x2, is 1 at x3 and infinite at x1 (PoleValue).
double superposition_constant(const ProjectivePoint& x, const ProjectivePoint& x1,
                              const ProjectivePoint& x2, const ProjectivePoint& x3);

/// dx/dt = a0(t) + a1(t) x + a2(t) x^2 on a closed time interval.
struct RiccatiSystem {
  CoefficientFn a0 = CoefficientFn::constant(0.0);
  CoefficientFn a1 = CoefficientFn::constant(0.0);
  CoefficientFn a2 = CoefficientFn::constant(0.0);
  Interval domain{0.0, 1.0};

  /// Throws InvalidArgument if a coefficient is not defined on all of `domain`.
  static RiccatiSystem make(CoefficientFn a0, CoefficientFn a1, CoefficientFn a2,
                            Interval domain);

  double rhs(double t, double x) const { return a0(t) + x * (a1(t) + x * a2(t)); }

  /// Right-hand side of the reciprocal chart w = 1/x: dw/dt = -(a0 w^2 + a1 w + a2).
  double rhs_reciprocal(double t, double w) const {
    return -(a2(t) + w * (a1(t) + w * a0(t)));
  }
};

}  // namespace riccati
