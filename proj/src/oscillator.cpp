#include "riccati/oscillator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

HermiteEval hermite(int n, double xi) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "Hermite degree must be non-negative");
  double prev = 0.0;  // H_{k-1}
  double cur = 1.0;   // H_k
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * xi * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return {n, cur, 2.0 * n * prev};
}

__int128 hermite_at_zero(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "Hermite degree must be non-negative");
  __int128 prev = 0;
  __int128 cur = 1;
  for (int k = 0; k < n; ++k) {
    const __int128 next = -2 * static_cast<__int128>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

RiccatiSystem oscillator_riccati(double lambda, Interval domain) {
  return RiccatiSystem::make(CoefficientFn::polynomial({-lambda, 0.0, 1.0}),
                             CoefficientFn::constant(0.0), CoefficientFn::constant(-1.0),
                             domain);
}

unsigned __int128 hermite_k1(int n) {
  if (n < 0 || n > 20) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("k1 is provided for 0 <= n <= 20, got {}", n));
  }
  unsigned __int128 ratio = 1;  // n! / m!
  const int m = n % 2 == 0 ? n / 2 : (n - 1) / 2;
  for (int k = m + 1; k <= n; ++k) ratio *= static_cast<unsigned>(k);
  return n % 2 == 0 ? ratio * ratio : 2 * ratio;
}

std::string to_string_u128(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string digits;
  while (v > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

namespace {

constexpr double kRootProximity = 1e-10;

double log_k1(int n) {
  return std::log(static_cast<double>(hermite_k1(n)));
}

void require_parity(int n, int parity, const char* what) {
  if (n < 0 || n % 2 != parity) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} needs {} n, got {}", what, parity == 0 ? "even" : "odd", n));
  }
}

void require_grid_from_zero(const TimeGrid& grid) {
  if (grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "closed-form coordinates need a grid starting at 0");
  }
}

}  // namespace

double g0_closed_form(int n, double xi) {
  const HermiteEval h = hermite(n, xi);
  if (std::abs(h.value) <= kRootProximity * std::abs(h.derivative)) {
    throw Error(ErrorCode::HermiteZero,
                fmt::format("H_{} vanishes near xi = {:.12g}", n, xi - h.value / h.derivative));
  }
  return h.derivative / h.value - xi;
}

OscillatorCoords g1_g2_closed_form(int n, const TimeGrid& grid) {
  require_parity(n, 0, "g1_g2_closed_form");
  require_grid_from_zero(grid);
  OscillatorCoords out;
  out.n = n;
  out.grid = grid;
  out.k1 = hermite_k1(n);
  const std::size_t m = grid.size();
  out.g0.resize(m);
  out.g1.resize(m);
  std::vector<double> rate(m);
  const double lk1 = log_k1(n);
  double previous_sign = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = grid[i];
    const HermiteEval h = hermite(n, xi);
    const double sign = h.value > 0.0 ? 1.0 : -1.0;
    if (i > 0 && sign != previous_sign) {
      throw Error(ErrorCode::HermiteZero,
                  fmt::format("H_{} changes sign between xi = {:.12g} and {:.12g}", n, grid[i - 1], xi),
                  i);
    }
    previous_sign = sign;
    out.g0[i] = g0_closed_form(n, xi);
    out.g1[i] = lk1 - 2.0 * std::log(std::abs(h.value)) + xi * xi;
    rate[i] = -std::exp(out.g1[i]);
  }
  out.g2 = cumulative_quadrature(grid, rate);
  return out;
}

OscillatorCoords odd_case_coords(int n, const TimeGrid& grid) {
  require_parity(n, 1, "odd_case_coords");
  require_grid_from_zero(grid);
  OscillatorCoords out;
  out.n = n;
  out.grid = grid;
  out.k1 = hermite_k1(n);
  const double lambda = 2.0 * n + 1.0;
  const std::size_t m = grid.size();
  out.g0.resize(m);
  out.g1.resize(m);
  std::vector<double> rate(m);
  const double lk1 = log_k1(n);
  double previous_sign = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = grid[i];
    const HermiteEval h = hermite(n, xi);
    const double den = h.derivative - xi * h.value;
    // d/dxi (H' - xi H) = -(lambda - xi^2) H, so its scale against den is
    // what decides proximity to a zero.
    const double slope = (xi * xi - lambda) * h.value;
    if (std::abs(den) <= kRootProximity * std::abs(slope)) {
      throw Error(ErrorCode::DenominatorZero,
                  fmt::format("H_n' - xi H_n vanishes near xi = {:.12g}", xi - den / slope), i);
    }
    const double sign = den > 0.0 ? 1.0 : -1.0;
    if (i > 0 && sign != previous_sign) {
      throw Error(ErrorCode::DenominatorZero,
                  fmt::format("H_n' - xi H_n changes sign between xi = {:.12g} and {:.12g}",
                              grid[i - 1], xi),
                  i);
    }
    previous_sign = sign;
    out.g0[i] = h.value / den;
    out.g1[i] = xi * xi + 2.0 * (lk1 - std::log(std::abs(den)));
    rate[i] = -(xi * xi - lambda) * std::exp(out.g1[i]);
  }
  out.g2 = cumulative_quadrature(grid, rate);
  return out;
}

LinearSolution eigenfunction(int n, const TimeGrid& grid) {
  LinearSolution out{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi = grid[i];
    const HermiteEval h = hermite(n, xi);
    const double gauss = std::exp(-0.5 * xi * xi);
    out.u[i] = h.value * gauss;
    out.du[i] = (h.derivative - xi * h.value) * gauss;
  }
  return out;
}

int eigenvalue_count(double lambda, int parity, double xi_max, double tol) {
  if (!(xi_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "xi_max must be positive");
  const RiccatiSystem sys = oscillator_riccati(lambda, {0.0, xi_max});
  const ProjectivePoint start =
      parity == 0 ? ProjectivePoint::finite(0.0) : ProjectivePoint::infinity();
  const RiccatiShot shot = shoot_riccati(sys, start, 0.0, xi_max, tol);
  // sign of z + xi_max from the homogeneous pair
  const double s = (shot.end.p() + xi_max * shot.end.q()) * shot.end.q();
  return shot.poles + (s < 0.0 ? 1 : 0);
}

namespace {

constexpr double kShootTol = 1e-12;

void validate_scan(double lo, double hi, double xi_max, double tol) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "lambda range must satisfy lo < hi");
  if (!(xi_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "xi_max must be positive");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
}

SpectralResult finish(std::vector<Eigenvalue> found, double lo, double hi, double xi_max,
                      double width) {
  if (found.empty()) {
    throw Error(ErrorCode::NoSignChange,
                fmt::format("no eigenvalue in ({:.12g}, {:.12g})", lo, hi));
  }
  std::sort(found.begin(), found.end(),
            [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda < b.lambda; });
  return {std::move(found), lo, hi, xi_max, width};
}

}  // namespace

SpectralResult spectrum_scan(double lambda_lo, double lambda_hi, double xi_max, double tol,
                             Execution exec) {
  validate_scan(lambda_lo, lambda_hi, xi_max, tol);
  struct Target {
    int parity;
    int index;
  };
  std::array<std::array<int, 2>, 2> counts{};  // [parity][lo/hi]
  for_each_index(4, exec, [&](std::size_t k) {
    const int parity = static_cast<int>(k / 2);
    const double lambda = k % 2 == 0 ? lambda_lo : lambda_hi;
    counts[parity][k % 2] = eigenvalue_count(lambda, parity, xi_max, kShootTol);
  });
  std::vector<Target> targets;
  for (int parity = 0; parity < 2; ++parity) {
    for (int index = counts[parity][0]; index < counts[parity][1]; ++index) {
      targets.push_back({parity, index});
    }
  }
  std::vector<Eigenvalue> found(targets.size());
  std::vector<double> widths(targets.size());
  for_each_index(targets.size(), exec, [&](std::size_t k) {
    const Target target = targets[k];
    double lo = lambda_lo;
    double hi = lambda_hi;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (eigenvalue_count(mid, target.parity, xi_max, kShootTol) > target.index) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    found[k] = {0.5 * (lo + hi), 2 * target.index + target.parity};
    widths[k] = hi - lo;
  });
  const double width = widths.empty() ? 0.0 : *std::max_element(widths.begin(), widths.end());
  return finish(std::move(found), lambda_lo, lambda_hi, xi_max, width);
}

namespace {

int combined_count(double lambda, double xi_max) {
  return eigenvalue_count(lambda, 0, xi_max, kShootTol) +
         eigenvalue_count(lambda, 1, xi_max, kShootTol);
}

void refine(double lo, double hi, int count_lo, int count_hi, double xi_max, double tol,
            std::vector<Eigenvalue>& found, double& width) {
  if (count_hi <= count_lo) return;
  const double mid = 0.5 * (lo + hi);
  if (hi - lo <= tol || mid <= lo || mid >= hi) {
    for (int n = count_lo; n < count_hi; ++n) found.push_back({mid, n});
    width = std::max(width, hi - lo);
    return;
  }
  const int count_mid = combined_count(mid, xi_max);
  refine(lo, mid, count_lo, count_mid, xi_max, tol, found, width);
  refine(mid, hi, count_mid, count_hi, xi_max, tol, found, width);
}

}  // namespace

SpectralResult spectrum_scan_reference(double lambda_lo, double lambda_hi, double xi_max,
                                       double tol) {
  validate_scan(lambda_lo, lambda_hi, xi_max, tol);
  std::vector<Eigenvalue> found;
  double width = 0.0;
  refine(lambda_lo, lambda_hi, combined_count(lambda_lo, xi_max),
         combined_count(lambda_hi, xi_max), xi_max, tol, found, width);
  return finish(std::move(found), lambda_lo, lambda_hi, xi_max, width);
}

KummerReport kummer_map_check(double lambda, double y_max, std::size_t nodes, double y_start,
                              double tol) {
  if (!(y_start > 0.0)) {
    throw Error(ErrorCode::SeriesStartFailure, "series start must lie at y > 0");
  }
  if (!(y_max > y_start) || nodes < 5) {
    throw Error(ErrorCode::InvalidArgument, "need y_max > y_start and at least 5 nodes");
  }
  const double a = (1.0 - lambda) / 4.0;
  const double b = 0.5;

  // W = sum_k (a)_k / ((b)_k k!) y^k, six terms beyond the constant.
  double term = 1.0;
  double w = 1.0;
  double dw = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double coeff = term * (a + k) / ((b + k) * (k + 1));
    dw += coeff * (k + 1) * std::pow(y_start, k);
    term = coeff;
    w += coeff * std::pow(y_start, k + 1);
  }
  const double next = std::abs(term * (a + 6) / ((b + 6) * 7) * std::pow(y_start, 7));
  if (!std::isfinite(w) || !std::isfinite(dw) || next > 1e-14 * std::max(1.0, std::abs(w))) {
    throw Error(ErrorCode::SeriesStartFailure,
                fmt::format("series start at y = {:.3g} has not converged", y_start));
  }

  // Uniform in xi = sqrt(y), so both residual checks see smooth spacing.
  const double xi0 = std::sqrt(y_start);
  const double xi1 = std::sqrt(y_max);
  std::vector<double> xis(nodes), ys(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    xis[i] = xi0 + (xi1 - xi0) * static_cast<double>(i) / static_cast<double>(nodes - 1);
    ys[i] = xis[i] * xis[i];
  }
  ys.front() = y_start;
  const TimeGrid y_grid(ys);
  const TimeGrid xi_grid(xis);

  const VectorField kummer = [a, b](double y, std::span<const double> s, std::span<double> ds) {
    ds[0] = s[1];
    ds[1] = ((y - b) * s[1] + a * s[0]) / y;
  };
  const double s0[2] = {w, dw};
  const auto states = integrate_ivp(kummer, s0, y_grid, tol);

  KummerReport report;
  report.y_grid = y_grid;
  report.v = Trajectory{y_grid, {}};
  report.z = Trajectory{xi_grid, {}};
  for (std::size_t i = 0; i < nodes; ++i) {
    const double W = states[i][0];
    const double dW = states[i][1];
    if (W == 0.0 && dW == 0.0) throw Error(ErrorCode::BothZero, "W and W' vanish together", i);
    report.v.states.emplace_back(dW, W);
    // z = 2 xi v - xi = (2 xi W' - xi W : W)
    report.z.states.emplace_back(2.0 * xis[i] * dW - xis[i] * W, W);
  }

  const auto v_system = RiccatiSystem::make(
      CoefficientFn::derived([a](double y) { return a / y; }, Interval{y_start, y_max}),
      CoefficientFn::derived([b](double y) { return 1.0 - b / y; }, Interval{y_start, y_max}),
      CoefficientFn::constant(-1.0), Interval{y_grid.front(), y_grid.back()});
  for (const double r : riccati_residual(v_system, report.v)) {
    report.nuevar_residual = std::max(report.nuevar_residual, std::abs(r));
  }
  const auto z_system = oscillator_riccati(lambda, xi_grid.span());
  for (const double r : riccati_residual(z_system, report.z)) {
    report.richar_residual = std::max(report.richar_residual, std::abs(r));
  }
  return report;
}

}  // namespace riccati
