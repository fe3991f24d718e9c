#include "riccati/wei_norman.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::I: return "I";
    case Ordering::II: return "II";
    case Ordering::III: return "III";
    case Ordering::IV: return "IV";
    case Ordering::V: return "V";
    case Ordering::VI: return "VI";
  }
  return "?";
}

Ordering parse_ordering(std::string_view text) {
  for (const auto o : kAllOrderings) {
    if (to_string(o) == text) return o;
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown ordering '{}'", text));
}

std::array<Generator, 3> factor_sequence(Ordering ordering) {
  using G = Generator;
  switch (ordering) {
    case Ordering::I: return {G::L1, G::L2, G::L0};
    case Ordering::II: return {G::L0, G::L1, G::L2};
    case Ordering::III: return {G::L2, G::L1, G::L0};
    case Ordering::IV: return {G::L1, G::L0, G::L2};
    case Ordering::V: return {G::L0, G::L2, G::L1};
    case Ordering::VI: return {G::L2, G::L0, G::L1};
  }
  return {G::L0, G::L1, G::L2};
}

Coords wn_rates(Ordering ordering, const RiccatiSystem& sys, double t, const Coords& c) {
  const double a0 = sys.a0(t);
  const double a1 = sys.a1(t);
  const double a2 = sys.a2(t);
  const double c0 = c[0], c1 = c[1], c2 = c[2];
  switch (ordering) {
    case Ordering::I:
      return {a0 + a1 * c0 + a2 * c0 * c0, a1 + 2 * a2 * c0, a2 - a1 * c2 - 2 * a2 * c0 * c2};
    case Ordering::II:
      return {a0 * std::exp(-c1), a1 - 2 * a0 * c2, a2 - a1 * c2 + a0 * c2 * c2};
    case Ordering::III:
      return {a0 + a1 * c0 + a2 * c0 * c0, a1 + 2 * a2 * c0, a2 * std::exp(c1)};
    case Ordering::IV:
      return {a0 + a1 * c0 - 2 * a0 * c0 * c2, a1 - 2 * a0 * c2, a2 - a1 * c2 + a0 * c2 * c2};
    case Ordering::V: {
      const double em = std::exp(-c1);
      return {a0 * em, a1 - 2 * a0 * c2 * em, a2 * std::exp(c1) - a0 * c2 * c2 * em};
    }
    case Ordering::VI: {
      const double ep = std::exp(c1);
      return {a0 * std::exp(-c1) - a2 * c0 * c0 * ep, a1 + 2 * a2 * c0 * ep, a2 * ep};
    }
  }
  return {0.0, 0.0, 0.0};
}

VectorField wn_vector_field(Ordering ordering, const RiccatiSystem& sys) {
  return [ordering, sys](double t, std::span<const double> y, std::span<double> dy) {
    const Coords r = wn_rates(ordering, sys, t, {y[0], y[1], y[2]});
    std::copy(r.begin(), r.end(), dy.begin());
  };
}

namespace {

// Adjoint matrices in the basis (L0, L1, L2); column k holds [L_i, L_k].
// Brackets: [L0, L1] = L0, [L0, L2] = 2 L1, [L1, L2] = L2.
Eigen::Matrix3d ad_matrix(Generator g) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  switch (g) {
    case Generator::L0:
      m(0, 1) = 1.0;  // [L0, L1] = L0
      m(1, 2) = 2.0;  // [L0, L2] = 2 L1
      break;
    case Generator::L1:
      m(0, 0) = -1.0;  // [L1, L0] = -L0
      m(2, 2) = 1.0;   // [L1, L2] = L2
      break;
    case Generator::L2:
      m(1, 0) = -2.0;  // [L2, L0] = -2 L1
      m(2, 1) = -1.0;  // [L2, L1] = -L2
      break;
  }
  return m;
}

// exp(s ad L): ad L0 and ad L2 are nilpotent of order 3, ad L1 is diagonal.
Eigen::Matrix3d exp_ad(Generator g, double s) {
  const Eigen::Matrix3d a = ad_matrix(g);
  if (g == Generator::L1) {
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) e(i, i) = std::exp(s * a(i, i));
    return e;
  }
  return Eigen::Matrix3d::Identity() + s * a + 0.5 * s * s * a * a;
}

}  // namespace

double verify_wn_relation(Ordering ordering, const RiccatiSystem& sys, const WnRates& candidate,
                          std::span<const double> times, std::span<const Coords> states) {
  if (times.size() != states.size()) {
    throw Error(ErrorCode::InvalidArgument, "times and states differ in length");
  }
  const auto seq = factor_sequence(ordering);
  double worst = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double t = times[s];
    const Coords& c = states[s];
    const Coords rate = candidate(t, c);
    Eigen::Vector3d total = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < 3; ++i) {
      const auto gi = static_cast<int>(seq[i]);
      Eigen::Vector3d v = Eigen::Vector3d::Unit(gi);
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto gj = seq[j];
        v = exp_ad(gj, -c[static_cast<std::size_t>(gj)]) * v;
      }
      total += rate[static_cast<std::size_t>(gi)] * v;
    }
    const Eigen::Vector3d target(sys.a0(t), sys.a1(t), sys.a2(t));
    worst = std::max(worst, (total - target).cwiseAbs().maxCoeff());
  }
  return worst;
}

double verify_wn_relation(Ordering ordering, const RiccatiSystem& sys,
                          std::span<const double> times, std::span<const Coords> states) {
  const WnRates shipped = [&](double t, const Coords& c) {
    return wn_rates(ordering, sys, t, c);
  };
  return verify_wn_relation(ordering, sys, shipped, times, states);
}

WnCoordinates solve_wn(Ordering ordering, const RiccatiSystem& sys, const TimeGrid& grid,
                       double tol) {
  const VectorField field = wn_vector_field(ordering, sys);
  const std::array<double, 3> zero{0.0, 0.0, 0.0};
  std::vector<std::vector<double>> states;
  try {
    states = integrate_ivp(field, zero, grid, tol);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("ordering {}: {}", to_string(ordering), e.message()),
                e.node());
  }
  WnCoordinates out;
  out.ordering = ordering;
  out.grid = grid;
  for (auto& v : out.values) v.resize(grid.size());
  for (auto& v : out.rates) v.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Coords c{states[i][0], states[i][1], states[i][2]};
    const Coords r = wn_rates(ordering, sys, grid[i], c);
    for (std::size_t k = 0; k < 3; ++k) {
      out.values[k][i] = c[k];
      out.rates[k][i] = r[k];
    }
  }
  // Exact zero initial data regardless of integrator rounding.
  for (auto& v : out.values) v[0] = 0.0;
  return out;
}

std::vector<WnAttempt> solve_wn_many(std::span<const Ordering> orderings,
                                     const RiccatiSystem& sys, const TimeGrid& grid, double tol,
                                     Execution exec) {
  std::vector<WnAttempt> out(orderings.size());
  for_each_index(orderings.size(), exec, [&](std::size_t k) {
    out[k].ordering = orderings[k];
    try {
      out[k].coords = solve_wn(orderings[k], sys, grid, tol);
    } catch (const Error& e) {
      out[k].failure = e.what();
    }
  });
  return out;
}

Sl2Element evolution_operator(Ordering ordering, const Coords& c) {
  Sl2Element m = Sl2Element::identity();
  for (const Generator g : factor_sequence(ordering)) {
    m = sl2_exp_generator(g, c[static_cast<std::size_t>(g)]) * m;
  }
  return m;
}

Sl2Element evolution_operator(const WnCoordinates& coords, double t) {
  const auto times = coords.grid.times();
  if (!(t >= times.front() && t <= times.back())) {
    throw Error(ErrorCode::DomainExceeded,
                fmt::format("t = {} outside coordinate grid [{}, {}]", t, times.front(),
                            times.back()));
  }
  auto it = std::lower_bound(times.begin(), times.end(), t);
  const auto idx = static_cast<std::size_t>(it - times.begin());
  if (idx < times.size() && times[idx] == t) {
    return evolution_operator(coords.ordering, coords.at(idx));
  }
  const std::size_t i = idx - 1;
  Coords c{};
  for (std::size_t k = 0; k < 3; ++k) {
    c[k] = hermite_interpolate(times[i], times[i + 1], coords.values[k][i],
                               coords.values[k][i + 1], coords.rates[k][i],
                               coords.rates[k][i + 1], t);
  }
  return evolution_operator(coords.ordering, c);
}

Trajectory general_solution(const WnCoordinates& coords, const ProjectivePoint& x0,
                            Execution exec) {
  Trajectory out{coords.grid, std::vector<ProjectivePoint>(coords.grid.size())};
  for_each_index(coords.grid.size(), exec, [&](std::size_t i) {
    out.states[i] = moebius_apply(evolution_operator(coords.ordering, coords.at(i)), x0);
  });
  return out;
}

namespace {

void require_nonvanishing(const CoefficientFn& divisor, const Interval& domain,
                          std::string_view name) {
  constexpr std::size_t kProbe = 4001;
  double first = 0.0;
  for (std::size_t i = 0; i < kProbe; ++i) {
    const double t =
        domain.lo + domain.length() * static_cast<double>(i) / static_cast<double>(kProbe - 1);
    const double v = divisor(t);
    if (v == 0.0 || (i > 0 && (v > 0.0) != (first > 0.0))) {
      throw Error(ErrorCode::CoefficientVanishes,
                  fmt::format("{} vanishes near t = {}", name, t));
    }
    if (i == 0) first = v;
  }
}

}  // namespace

RiccatiSystem reduced_riccati(ReducedCase which, const RiccatiSystem& sys) {
  const auto& divisor = which == ReducedCase::V ? sys.a0 : sys.a2;
  require_nonvanishing(divisor, sys.domain, which == ReducedCase::V ? "a0" : "a2");
  const bool all_constant = sys.a0.is_constant() && sys.a1.is_constant() && sys.a2.is_constant();
  const CoefficientFn a0 = sys.a0, a1 = sys.a1, a2 = sys.a2;

  if (which == ReducedCase::V) {
    auto q = [a0](double t) { return a0.derivative(t) / a0(t); };
    auto p = [a0, a1, a2](double t) {
      const double v0 = a0(t), v1 = a1(t), v2 = a2(t);
      return a1.derivative(t) - (v1 / v0) * a0.derivative(t) - 2 * v0 * v2 + 0.5 * v1 * v1;
    };
    if (all_constant) {
      return RiccatiSystem::make(CoefficientFn::constant(p(0.0)), CoefficientFn::constant(0.0),
                                 CoefficientFn::constant(-0.5), sys.domain);
    }
    return RiccatiSystem::make(CoefficientFn::derived(p, sys.domain),
                               CoefficientFn::derived(q, sys.domain),
                               CoefficientFn::constant(-0.5), sys.domain);
  }
  auto r = [a2](double t) { return a2.derivative(t) / a2(t); };
  auto s = [a0, a1, a2](double t) {
    const double v0 = a0(t), v1 = a1(t), v2 = a2(t);
    return a1.derivative(t) - (v1 / v2) * a2.derivative(t) + 2 * v0 * v2 - 0.5 * v1 * v1;
  };
  if (all_constant) {
    return RiccatiSystem::make(CoefficientFn::constant(s(0.0)), CoefficientFn::constant(0.0),
                               CoefficientFn::constant(0.5), sys.domain);
  }
  return RiccatiSystem::make(CoefficientFn::derived(s, sys.domain),
                             CoefficientFn::derived(r, sys.domain),
                             CoefficientFn::constant(0.5), sys.domain);
}

}  // namespace riccati
