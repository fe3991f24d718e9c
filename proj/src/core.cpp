#include "riccati/core.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

ProjectivePoint::ProjectivePoint(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorCode::InvalidArgument, "projective coordinates must be finite");
  }
  if (p == 0.0 && q == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "(0, 0) is not a projective point");
  }
  // Pairs already on the unit circle are kept bit-for-bit so canonicalization
  // is idempotent and printed states read back unchanged.
  if (std::abs(p * p + q * q - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
    const double norm = std::hypot(p, q);
    p /= norm;
    q /= norm;
  }
  if (p < 0.0 || (p == 0.0 && q < 0.0)) {
    p = -p;
    q = -q;
  }
  // -0.0 would break bit-identical output.
  p_ = p + 0.0;
  q_ = q + 0.0;
}

double ProjectivePoint::value() const {
  if (q_ == 0.0) return std::numeric_limits<double>::infinity();
  return p_ / q_;
}

bool ProjectivePoint::approx_equal(const ProjectivePoint& other, double tol) const {
  if (std::abs(p_ - other.p_) <= tol && std::abs(q_ - other.q_) <= tol) return true;
  // Near infinity the canonical sign of q flips between representatives.
  return projective_distance(*this, other) <= tol;
}

std::string ProjectivePoint::to_string() const {
  if (q_ == 0.0) return "inf";
  return fmt::format("{:.17g}", p_ / q_);
}

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  return std::abs(difference(a, b));
}

Sl2Element Sl2Element::renormalized() const {
  const double d = det();
  if (!(d > 0.0)) {
    throw Error(ErrorCode::NonUnitDeterminant,
                fmt::format("cannot renormalize matrix with determinant {}", d));
  }
  const double s = 1.0 / std::sqrt(d);
  return {alpha * s, beta * s, gamma * s, delta * s};
}

double Sl2Element::max_abs_diff(const Sl2Element& other) const {
  return std::max({std::abs(alpha - other.alpha), std::abs(beta - other.beta),
                   std::abs(gamma - other.gamma), std::abs(delta - other.delta)});
}

ProjectivePoint moebius_apply(const Sl2Element& a, const ProjectivePoint& x) {
  return {a.alpha * x.p() + a.beta * x.q(), a.gamma * x.p() + a.delta * x.q()};
}

Sl2Element sl2_exp_generator(Generator which, double s) {
  switch (which) {
    case Generator::L0:
      return {1.0, s, 0.0, 1.0};
    case Generator::L1:
      return {std::exp(0.5 * s), 0.0, 0.0, std::exp(-0.5 * s)};
    case Generator::L2:
      return {1.0, 0.0, -s, 1.0};
  }
  return Sl2Element::identity();
}

namespace {

void require_distinct(const ProjectivePoint& x1, const ProjectivePoint& x2,
                      const ProjectivePoint& x3) {
  if (difference(x1, x2) == 0.0 || difference(x1, x3) == 0.0 || difference(x2, x3) == 0.0) {
    throw Error(ErrorCode::DegenerateTriple, "reference points must be pairwise distinct");
  }
}

}  // namespace

ProjectivePoint cross_ratio_point(const ProjectivePoint& x, const ProjectivePoint& x1,
                                  const ProjectivePoint& x2, const ProjectivePoint& x3) {
  require_distinct(x1, x2, x3);
  return {difference(x, x1) * difference(x2, x3), difference(x, x2) * difference(x1, x3)};
}

double cross_ratio(const ProjectivePoint& x, const ProjectivePoint& x1,
                   const ProjectivePoint& x2, const ProjectivePoint& x3) {
  require_distinct(x1, x2, x3);
  const double den = difference(x, x2) * difference(x1, x3);
  if (den == 0.0) throw Error(ErrorCode::PoleValue, "cross-ratio is infinite (x == x2)");
  return difference(x, x1) * difference(x2, x3) / den;
}

double superposition_constant(const ProjectivePoint& x, const ProjectivePoint& x1,
                              const ProjectivePoint& x2, const ProjectivePoint& x3) {
  return cross_ratio(x, x2, x1, x3);
}

RiccatiSystem RiccatiSystem::make(CoefficientFn a0, CoefficientFn a1, CoefficientFn a2,
                                  Interval domain) {
  if (!(domain.hi > domain.lo)) {
    throw Error(ErrorCode::InvalidArgument, "Riccati domain must have positive length");
  }
  for (const auto* c : {&a0, &a1, &a2}) {
    if (const auto d = c->domain(); d && (d->lo > domain.lo || d->hi < domain.hi)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("coefficient domain [{}, {}] does not cover [{}, {}]", d->lo,
                              d->hi, domain.lo, domain.hi));
    }
  }
  return {std::move(a0), std::move(a1), std::move(a2), domain};
}

}  // namespace riccati
