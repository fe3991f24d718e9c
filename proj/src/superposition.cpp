#include "riccati/superposition.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

FundamentalTriple::FundamentalTriple(Trajectory x1, Trajectory x2, Trajectory x3)
    : x1_(std::move(x1)), x2_(std::move(x2)), x3_(std::move(x3)) {
  if (!(x1_.grid == x2_.grid) || !(x1_.grid == x3_.grid)) {
    throw Error(ErrorCode::DegenerateTriple, "solutions must share one grid");
  }
  if (x1_.size() != x1_.grid.size() || x2_.size() != x1_.size() || x3_.size() != x1_.size()) {
    throw Error(ErrorCode::DegenerateTriple, "solution lengths do not match the grid");
  }
  min_separation_ = 1.0;
  for (std::size_t i = 0; i < x1_.size(); ++i) {
    const double d = std::min({projective_distance(x1_.states[i], x2_.states[i]),
                               projective_distance(x1_.states[i], x3_.states[i]),
                               projective_distance(x2_.states[i], x3_.states[i])});
    if (d <= kDegenerate) {
      throw Error(ErrorCode::DegenerateTriple,
                  fmt::format("solutions coincide (distance {:.3g})", d), i);
    }
    min_separation_ = std::min(min_separation_, d);
  }
}

FundamentalTriple canonical_triple(const RiccatiSystem& sys, const TimeGrid& grid, double tol) {
  return {integrate_riccati_projective(sys, ProjectivePoint::infinity(), grid, tol),
          integrate_riccati_projective(sys, ProjectivePoint::finite(0.0), grid, tol),
          integrate_riccati_projective(sys, ProjectivePoint::finite(1.0), grid, tol)};
}

Trajectory superpose(const FundamentalTriple& triple, const ProjectivePoint& k,
                     Execution exec) {
  Trajectory out{triple.grid(), std::vector<ProjectivePoint>(triple.size())};
  for_each_index(triple.size(), exec, [&](std::size_t i) {
    const auto& p1 = triple.x1().states[i];
    const auto& p2 = triple.x2().states[i];
    const auto& p3 = triple.x3().states[i];
    const double d32 = difference(p3, p2);
    const double d13 = difference(p1, p3);
    out.states[i] = ProjectivePoint(k.p() * p1.p() * d32 + k.q() * p2.p() * d13,
                                    k.p() * p1.q() * d32 + k.q() * p2.q() * d13);
  });
  return out;
}

Trajectory superpose(const FundamentalTriple& triple, double k, Execution exec) {
  return superpose(triple, ProjectivePoint::finite(k), exec);
}

FundamentalTriple to_canonical_initial_data(const FundamentalTriple& triple, Execution exec) {
  const auto& y1 = triple.x1().states.front();
  const auto& y2 = triple.x2().states.front();
  const auto& y3 = triple.x3().states.front();
  auto constant_for = [&](const ProjectivePoint& target) {
    return cross_ratio_point(target, y2, y1, y3);
  };
  return {superpose(triple, constant_for(ProjectivePoint::infinity()), exec),
          superpose(triple, constant_for(ProjectivePoint::finite(0.0)), exec),
          superpose(triple, constant_for(ProjectivePoint::finite(1.0)), exec)};
}

std::vector<double> first_integral(const Trajectory& x, const FundamentalTriple& triple) {
  if (!(x.grid == triple.grid())) {
    throw Error(ErrorCode::DegenerateTriple, "trajectory and triple use different grids");
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    try {
      out[i] = superposition_constant(x.states[i], triple.x1().states[i],
                                      triple.x2().states[i], triple.x3().states[i]);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("first integral undefined: {}", e.message()), i);
    }
  }
  return out;
}

namespace {

constexpr double kInitialDataTol = 1e-8;

struct Homogeneous {
  double p1, q1, p2, q2, p3, q3;
  double d12, d13, d21, d23, d31, d32;

  explicit Homogeneous(const ProjectivePoint& a, const ProjectivePoint& b,
                       const ProjectivePoint& c)
      : p1(a.p()), q1(a.q()), p2(b.p()), q2(b.q()), p3(c.p()), q3(c.q()),
        d12(difference(a, b)), d13(difference(a, c)), d21(-d12), d23(difference(b, c)),
        d31(-d13), d32(-d23) {}
};

double checked_log(double arg, std::size_t node) {
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::LogDomain,
                fmt::format("logarithm argument {:.6g} is not positive", arg), node);
  }
  return std::log(arg);
}

// Inverse relations written with determinants D_ij = p_i q_j - p_j q_i, so
// x1 = infinity needs no special case. Returned keyed by generator.
Coords inverse_relation(Ordering ordering, const Homogeneous& h, std::size_t node) {
  switch (ordering) {
    case Ordering::I:
      return {h.p2 / h.q2, checked_log(h.d32 * h.d21 / (h.d31 * h.q2 * h.q2), node),
              h.q2 * h.q1 / h.d21};
    case Ordering::II:
      return {h.p2 * h.d13 / (h.p1 * h.d32),
              checked_log(h.p1 * h.p1 * h.d32 / (h.d12 * h.d13), node), -h.q1 / h.p1};
    case Ordering::III:
      return {h.p2 / h.q2, checked_log(h.d32 * h.d21 / (h.d31 * h.q2 * h.q2), node),
              h.d23 * h.q1 / (h.d13 * h.q2)};
    case Ordering::IV:
      return {h.p1 * h.p2 / h.d12, checked_log(h.p1 * h.p1 * h.d32 / (h.d12 * h.d13), node),
              -h.q1 / h.p1};
    case Ordering::V:
      return {h.d31 * h.p2 / (h.d23 * h.p1),
              checked_log(h.p1 * h.p1 * h.d23 / (h.d21 * h.d13), node),
              h.d23 * h.p1 * h.q1 / (h.d21 * h.d31)};
    case Ordering::VI:
      return {h.d31 * h.p2 * h.q2 / (h.d21 * h.d32),
              checked_log(h.d21 * h.d32 / (h.d31 * h.q2 * h.q2), node),
              h.d32 * h.q1 / (h.d31 * h.q2)};
  }
  return {0.0, 0.0, 0.0};
}

}  // namespace

WnCoordinates coords_from_solutions(Ordering ordering, const FundamentalTriple& triple) {
  const auto& s1 = triple.x1().states.front();
  const auto& s2 = triple.x2().states.front();
  const auto& s3 = triple.x3().states.front();
  if (projective_distance(s1, ProjectivePoint::infinity()) > kInitialDataTol ||
      projective_distance(s2, ProjectivePoint::finite(0.0)) > kInitialDataTol ||
      projective_distance(s3, ProjectivePoint::finite(1.0)) > kInitialDataTol) {
    throw Error(ErrorCode::WrongInitialData,
                fmt::format("initial data ({}, {}, {}) is not (inf, 0, 1)", s1.to_string(),
                            s2.to_string(), s3.to_string()));
  }
  WnCoordinates out;
  out.ordering = ordering;
  out.grid = triple.grid();
  const std::size_t n = triple.size();
  for (auto& v : out.values) v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Homogeneous h(triple.x1().states[i], triple.x2().states[i], triple.x3().states[i]);
    const Coords c = inverse_relation(ordering, h, i);
    for (std::size_t k = 0; k < 3; ++k) {
      if (!std::isfinite(c[k])) {
        throw Error(ErrorCode::PoleValue, fmt::format("coordinate {} is infinite", k), i);
      }
      out.values[k][i] = c[k];
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    out.rates[k] = differentiate_samples(out.grid, out.values[k]);
  }
  return out;
}

namespace {

// Columns (a P1, b P2) with a P1 + b P2 = P3: sends e1, e2, e1 + e2 to
// the three points.
Sl2Element frame(const std::array<ProjectivePoint, 3>& pts) {
  const auto& P1 = pts[0];
  const auto& P2 = pts[1];
  const auto& P3 = pts[2];
  const double det = P1.p() * P2.q() - P2.p() * P1.q();
  if (det == 0.0 || difference(P1, P3) == 0.0 || difference(P2, P3) == 0.0) {
    throw Error(ErrorCode::DegenerateTriple, "three-point frame needs distinct points");
  }
  const double a = (P3.p() * P2.q() - P2.p() * P3.q()) / det;
  const double b = (P1.p() * P3.q() - P3.p() * P1.q()) / det;
  return {a * P1.p(), b * P2.p(), a * P1.q(), b * P2.q()};
}

Sl2Element inverse_general(const Sl2Element& m) {
  const double d = m.det();
  return {m.delta / d, -m.beta / d, -m.gamma / d, m.alpha / d};
}

}  // namespace

Sl2Element moebius_from_three_points(const std::array<ProjectivePoint, 3>& src,
                                     const std::array<ProjectivePoint, 3>& dst) {
  const Sl2Element m = frame(dst) * inverse_general(frame(src));
  if (!(m.det() > 0.0)) {
    throw Error(ErrorCode::DegenerateTriple,
                "point triples have opposite cyclic orientation; no SL(2,R) element maps them");
  }
  Sl2Element out = m.renormalized();
  if (out.trace() < 0.0) out = -out;
  return out;
}

std::vector<Sl2Element> group_curve_from_solutions(const FundamentalTriple& triple,
                                                   Execution exec) {
  const std::size_t n = triple.size();
  const std::array<ProjectivePoint, 3> src{triple.x1().states[0], triple.x2().states[0],
                                           triple.x3().states[0]};
  std::vector<Sl2Element> out(n);
  for_each_index(n, exec, [&](std::size_t i) {
    try {
      out[i] = moebius_from_three_points(
          src, {triple.x1().states[i], triple.x2().states[i], triple.x3().states[i]});
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("group curve: {}", e.message()), i);
    }
  });
  // Sign continuation from the identity at the first node.
  for (std::size_t i = 1; i < n; ++i) {
    const auto a = out[i - 1].entries();
    const auto b = out[i].entries();
    double dot = 0.0;
    for (std::size_t k = 0; k < 4; ++k) dot += a[k] * b[k];
    if (dot < 0.0) out[i] = -out[i];
  }
  return out;
}

RiccatiSystem riccati_from_group_curve(const TimeGrid& grid, std::span<const Sl2Element> curve) {
  const std::size_t n = grid.size();
  if (curve.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "curve and grid differ in length");
  }
  std::array<std::vector<double>, 4> entries;
  for (auto& e : entries) e.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(curve[i].det() - 1.0) > 1e-6) {
      throw Error(ErrorCode::NonUnitDeterminant,
                  fmt::format("determinant {:.12g}", curve[i].det()), i);
    }
    const auto e = curve[i].entries();
    for (std::size_t k = 0; k < 4; ++k) entries[k][i] = e[k];
  }
  std::array<std::vector<double>, 4> rates;
  for (std::size_t k = 0; k < 4; ++k) rates[k] = differentiate_samples(grid, entries[k]);

  // With x(t) = (alpha x0 + beta) / (gamma x0 + delta), the constant
  // x0 = (a - c x) / (d x - b) has a = beta, b = alpha, c = delta, d = gamma.
  std::vector<double> c0(n), c1(n), c2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = entries[1][i], b = entries[0][i], c = entries[3][i], d = entries[2][i];
    const double da = rates[1][i], db = rates[0][i], dc = rates[3][i], dd = rates[2][i];
    const double den = b * c - a * d;
    c2[i] = (dc * d - c * dd) / den;
    c1[i] = (-da * d + a * dd + db * c - b * dc) / den;
    c0[i] = (da * b - a * db) / den;
  }
  const std::vector<double> times(grid.times().begin(), grid.times().end());
  return RiccatiSystem::make(CoefficientFn::table(times, std::move(c0), Interpolation::Cubic),
                             CoefficientFn::table(times, std::move(c1), Interpolation::Cubic),
                             CoefficientFn::table(times, std::move(c2), Interpolation::Cubic),
                             grid.span());
}

double AnnihilationReport::max() const { return std::max({v0, vminus, vplus}); }

namespace {

double cross_ratio_scalar(const std::array<double, 4>& v) {
  const double x = v[0], x1 = v[1], x2 = v[2], x3 = v[3];
  return (x - x1) * (x2 - x3) / ((x - x2) * (x1 - x3));
}

}  // namespace

AnnihilationReport annihilation_check(std::span<const std::array<double, 4>> points, double h) {
  // Each field is contracted with the gradient through one central difference
  // along its direction: (f(p + h V) - f(p - h V)) / 2h. Along the translation
  // and scaling lines f is exactly constant, so only rounding remains there.
  auto directional = [h](const std::array<double, 4>& p, auto&& field) {
    std::array<double, 4> plus = p, minus = p;
    for (std::size_t s = 0; s < 4; ++s) {
      plus[s] += h * field(p[s]);
      minus[s] -= h * field(p[s]);
    }
    return std::abs(cross_ratio_scalar(plus) - cross_ratio_scalar(minus)) / (2.0 * h);
  };
  AnnihilationReport report;
  for (const auto& pt : points) {
    report.v0 = std::max(report.v0, directional(pt, [](double x) { return x; }));
    report.vminus = std::max(report.vminus, directional(pt, [](double) { return 1.0; }));
    report.vplus = std::max(report.vplus, directional(pt, [](double x) { return x * x; }));
  }
  return report;
}

Trajectory bernoulli_reduce(const RiccatiSystem& sys, const Trajectory& x1,
                            const ProjectivePoint& x0) {
  const std::size_t n = x1.size();
  const auto residual = riccati_residual(sys, x1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(residual[i]) <= 1e-6)) {
      throw Error(ErrorCode::SolutionMismatch,
                  fmt::format("particular solution residual {:.3g}", residual[i]), i);
    }
  }
  std::vector<double> xs(n), drift(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x1.states[i].q() == 0.0) {
      throw Error(ErrorCode::PoleOnPath, "particular solution must stay finite", i);
    }
    xs[i] = x1.states[i].value();
    const double t = x1.grid[i];
    drift[i] = 2.0 * sys.a2(t) * xs[i] + sys.a1(t);
  }
  if (projective_distance(x0, x1.states.front()) == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "initial point equals the particular solution");
  }
  // u0 = 1 / (x0 - x1(t0)) in homogeneous form.
  const double u0 = x0.q() / (x0.p() - xs.front() * x0.q());
  const auto integral = cumulative_quadrature(x1.grid, drift);
  std::vector<double> source(n);
  for (std::size_t i = 0; i < n; ++i) source[i] = sys.a2(x1.grid[i]) * std::exp(integral[i]);
  const auto accumulated = cumulative_quadrature(x1.grid, source);
  Trajectory out{x1.grid, {}};
  out.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::exp(-integral[i]) * (u0 - accumulated[i]);
    out.states.emplace_back(xs[i] * u + 1.0, u);
  }
  return out;
}

}  // namespace riccati
