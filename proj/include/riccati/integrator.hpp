#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "riccati/core.hpp"

namespace riccati {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::size_t kDefaultNodes = 1001;

/// Strictly increasing sample times.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);

  static TimeGrid uniform(double t0, double t1, std::size_t nodes = kDefaultNodes);

  std::span<const double> times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double front() const { return times_.front(); }
  double back() const { return times_.back(); }
  Interval span() const { return {front(), back()}; }

  bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

 private:
  std::vector<double> times_;
};

/// Pole-transparent solution samples: one projective state per grid node.
struct Trajectory {
  TimeGrid grid;
  std::vector<ProjectivePoint> states;

  std::size_t size() const { return states.size(); }
};

using VectorField =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand-Prince 5(4) with per-step error control (absolute and relative
/// weight `tol`) and the method's continuous extension sampled at the grid
/// nodes. Throws StepSizeUnderflow when the step falls below 1e-14 of the
/// grid span and DomainExceeded when `f` cannot be evaluated.
std::vector<std::vector<double>> integrate_ivp(const VectorField& f, std::span<const double> y0,
                                               const TimeGrid& grid, double tol = kDefaultTol);

/// Integrates dx/dt = a0 + a1 x + a2 x^2 on RP^1: the x chart while |x| is
/// moderate, the w = 1/x chart otherwise, switching with hysteresis band
/// [0.95, 1.05]. Passing through infinity is an ordinary event.
Trajectory integrate_riccati_projective(const RiccatiSystem& sys, const ProjectivePoint& x0,
                                        const TimeGrid& grid, double tol = kDefaultTol);

struct RiccatiShot {
  ProjectivePoint end;
  /// Number of passages through infinity.
  int poles = 0;
  /// Passages with x decreasing through infinity (-inf -> +inf) minus the
  /// reverse direction.
  int signed_poles = 0;
};

/// Same flow as integrate_riccati_projective, reporting only the end state
/// and the passages through infinity on (t0, t1].
RiccatiShot shoot_riccati(const RiccatiSystem& sys, const ProjectivePoint& x0, double t0,
                          double t1, double tol = kDefaultTol);

/// Cumulative integral from grid.front(): the piecewise cubic through four
/// neighbouring samples is integrated exactly on each panel (two-point Gauss),
/// so constants, quadratics and cubics are reproduced on any grid. Grids with
/// fewer than four nodes fall back to the trapezoid rule.
std::vector<double> cumulative_quadrature(const TimeGrid& grid, std::span<const double> f);

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion) for
/// the `order`-th derivative at `x0`.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order);

/// Derivative samples from a sliding `stencil`-point window (centered where
/// possible, shifted at the ends).
std::vector<double> differentiate_samples(const TimeGrid& grid, std::span<const double> values,
                                          int order = 1, std::size_t stencil = 5);

/// Per-node residual of the Riccati equation along sampled states; each
/// node uses the x chart when |x| <= sqrt|a0/a2| (clamped to [0.1, 10];
/// 1 if a coefficient vanishes) and the 1/x chart otherwise, so poles are
/// regular points.
std::vector<double> riccati_residual(const RiccatiSystem& sys, const Trajectory& traj,
                                     std::size_t stencil = 5);

/// Cubic Hermite interpolant on [t0, t1] from end values and slopes.
double hermite_interpolate(double t0, double t1, double y0, double y1, double d0, double d1,
                           double t);

}  // namespace riccati
