#include "riccati/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "time grid needs at least two nodes");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be strictly increasing", i);
    }
  }
}

TimeGrid TimeGrid::uniform(double t0, double t1, std::size_t nodes) {
  if (nodes < 2 || !(t1 > t0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("bad uniform grid {}:{}:{}", t0, t1, nodes));
  }
  std::vector<double> times(nodes);
  const double h = (t1 - t0) / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) times[i] = t0 + h * static_cast<double>(i);
  times.back() = t1;
  return TimeGrid(std::move(times));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

/// One accepted step and its continuous extension.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  const std::vector<double>* y_old = nullptr;
  const std::vector<double>* y_new = nullptr;
  std::vector<double> r2, r3, r4, r5;

  double t1() const { return t0 + h; }

  void eval(double t, std::vector<double>& out) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    out.resize(r2.size());
    for (std::size_t i = 0; i < r2.size(); ++i) {
      out[i] = (*y_old)[i] +
               theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
    }
  }
};

struct StepHooks {
  std::function<void(const DenseSegment&)> on_accept;
  /// May rewrite the state after an accepted step; returns true if it did.
  std::function<bool(double t, std::vector<double>& y)> after_accept;
};

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Local errors are held to a tenth of the requested tolerance so that the
// global error at the nodes stays within a small multiple of it for mildly
// unstable flows (the tangent case amplifies early errors about 30-fold).
constexpr double kLocalSafety = 0.1;

class DormandPrince {
 public:
  DormandPrince(const VectorField& f, std::size_t dim, double tol)
      : f_(f), tol_(kLocalSafety * tol), k1_(dim), k2_(dim), k3_(dim), k4_(dim), k5_(dim), k6_(dim),
        k7_(dim), tmp_(dim), y_new_(dim) {}

  void run(std::vector<double> y, double t0, double t1, const StepHooks& hooks) {
    const double span = t1 - t0;
    const double h_min = 1e-14 * span;
    const std::size_t n = y.size();
    eval(t0, y, k1_);
    if (!all_finite(k1_)) {
      throw Error(ErrorCode::DomainExceeded,
                  fmt::format("vector field is not finite at t = {}", t0));
    }
    double h = initial_step(t0, y, span);
    double t = t0;
    bool last_rejected = false;
    DenseSegment seg;
    seg.r2.resize(n);
    seg.r3.resize(n);
    seg.r4.resize(n);
    seg.r5.resize(n);

    std::size_t guard = 0;
    while (t < t1) {
      if (++guard > 50'000'000) {
        throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted");
      }
      bool last = false;
      if (t + 1.01 * h >= t1) {
        h = t1 - t;
        last = true;
      }
      const double err = attempt(t, h, y);
      if (err <= 1.0) {
        const double t_new = last ? t1 : t + h;
        for (std::size_t i = 0; i < n; ++i) {
          const double dy = y_new_[i] - y[i];
          const double bspl = h * k1_[i] - dy;
          seg.r2[i] = dy;
          seg.r3[i] = bspl;
          seg.r4[i] = dy - h * k7_[i] - bspl;
          seg.r5[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                           d6 * k6_[i] + d7 * k7_[i]);
        }
        seg.t0 = t;
        seg.h = t_new - t;
        seg.y_old = &y;
        seg.y_new = &y_new_;
        if (hooks.on_accept) hooks.on_accept(seg);
        t = t_new;
        y.swap(y_new_);
        k1_.swap(k7_);
        if (hooks.after_accept && hooks.after_accept(t, y)) eval(t, y, k1_);
        double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        if (last_rejected) fac = std::min(fac, 1.0);
        h *= fac;
        last_rejected = false;
      } else {
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= fac;
        last_rejected = true;
        if (h < h_min) {
          throw Error(ErrorCode::StepSizeUnderflow,
                      fmt::format("step size {:.3g} below {:.3g} at t = {:.17g}", h, h_min, t));
        }
      }
    }
  }

 private:
  void eval(double t, const std::vector<double>& y, std::vector<double>& out) {
    f_(t, y, out);
  }

  double weighted_norm(const std::vector<double>& v, const std::vector<double>& y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double sc = tol_ + tol_ * std::abs(y[i]);
      acc += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
  }

  double initial_step(double t0, const std::vector<double>& y, double span) {
    const double d0 = weighted_norm(y, y);
    const double d1n = weighted_norm(k1_, y);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < y.size(); ++i) tmp_[i] = y[i] + h0 * k1_[i];
    eval(t0 + h0, tmp_, k2_);
    for (std::size_t i = 0; i < y.size(); ++i) k3_[i] = (k2_[i] - k1_[i]) / h0;
    const double d2 = all_finite(k2_) ? weighted_norm(k3_, y) : 1e300;
    const double dmax = std::max(d1n, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, span});
  }

  /// Computes y_new_ and k7_; returns the scaled error norm.
  double attempt(double t, double h, const std::vector<double>& y) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
    eval(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    eval(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    eval(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                            a65 * k5_[i]);
    }
    eval(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i) {
      y_new_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                              a76 * k6_[i]);
    }
    eval(t + h, y_new_, k7_);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                            e6 * k6_[i] + e7 * k7_[i]);
      const double sc = tol_ + tol_ * std::max(std::abs(y[i]), std::abs(y_new_[i]));
      acc += (e / sc) * (e / sc);
    }
    const double err = std::sqrt(acc / static_cast<double>(n));
    if (!std::isfinite(err) || !all_finite(y_new_) || !all_finite(k7_)) {
      return std::numeric_limits<double>::infinity();
    }
    return err;
  }

  const VectorField& f_;
  double tol_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_;
};

void require_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
}

/// Chart bookkeeping shared by the trajectory and shooting drivers.
struct ProjectiveFlow {
  const RiccatiSystem& sys;
  bool reciprocal = false;  // state is w = 1/x

  static constexpr double kSwitchAbove = 1.05;

  VectorField field() {
    return [this](double t, std::span<const double> y, std::span<double> dy) {
      dy[0] = reciprocal ? sys.rhs_reciprocal(t, y[0]) : sys.rhs(t, y[0]);
    };
  }

  ProjectivePoint point(double v) const {
    return reciprocal ? ProjectivePoint(1.0, v) : ProjectivePoint(v, 1.0);
  }

  double start(const ProjectivePoint& x0) {
    reciprocal = std::abs(x0.p()) > std::abs(x0.q());
    return reciprocal ? x0.q() / x0.p() : x0.p() / x0.q();
  }

  bool maybe_switch(std::vector<double>& y) {
    if (std::abs(y[0]) <= kSwitchAbove) return false;
    y[0] = 1.0 / y[0];
    reciprocal = !reciprocal;
    return true;
  }
};

void check_grid_in_domain(const RiccatiSystem& sys, const TimeGrid& grid) {
  const double slack = 1e-12 * (1.0 + sys.domain.length());
  if (!sys.domain.contains(grid.front(), slack) || !sys.domain.contains(grid.back(), slack)) {
    throw Error(ErrorCode::DomainExceeded,
                fmt::format("grid [{}, {}] outside system domain [{}, {}]", grid.front(),
                            grid.back(), sys.domain.lo, sys.domain.hi));
  }
}

}  // namespace

std::vector<std::vector<double>> integrate_ivp(const VectorField& f, std::span<const double> y0,
                                               const TimeGrid& grid, double tol) {
  require_tol(tol);
  std::vector<std::vector<double>> out;
  out.reserve(grid.size());
  out.emplace_back(y0.begin(), y0.end());
  if (y0.empty()) {
    out.resize(grid.size());
    return out;
  }
  std::size_t next = 1;
  std::vector<double> buf;
  StepHooks hooks;
  hooks.on_accept = [&](const DenseSegment& seg) {
    const double t1 = seg.t1();
    while (next < grid.size() && grid[next] <= t1) {
      if (grid[next] == t1) {
        out.push_back(*seg.y_new);
      } else {
        seg.eval(grid[next], buf);
        out.push_back(buf);
      }
      ++next;
    }
  };
  DormandPrince stepper(f, y0.size(), tol);
  stepper.run(std::vector<double>(y0.begin(), y0.end()), grid.front(), grid.back(), hooks);
  return out;
}

Trajectory integrate_riccati_projective(const RiccatiSystem& sys, const ProjectivePoint& x0,
                                        const TimeGrid& grid, double tol) {
  require_tol(tol);
  check_grid_in_domain(sys, grid);
  ProjectiveFlow flow{sys};
  Trajectory traj{grid, {}};
  traj.states.reserve(grid.size());
  traj.states.push_back(x0);
  const std::vector<double> y0{flow.start(x0)};
  std::size_t next = 1;
  std::vector<double> buf;
  StepHooks hooks;
  hooks.on_accept = [&](const DenseSegment& seg) {
    const double t1 = seg.t1();
    while (next < grid.size() && grid[next] <= t1) {
      if (grid[next] == t1) {
        traj.states.push_back(flow.point((*seg.y_new)[0]));
      } else {
        seg.eval(grid[next], buf);
        traj.states.push_back(flow.point(buf[0]));
      }
      ++next;
    }
  };
  hooks.after_accept = [&](double, std::vector<double>& y) { return flow.maybe_switch(y); };
  const VectorField field = flow.field();
  DormandPrince stepper(field, 1, tol);
  stepper.run(y0, grid.front(), grid.back(), hooks);
  return traj;
}

RiccatiShot shoot_riccati(const RiccatiSystem& sys, const ProjectivePoint& x0, double t0,
                          double t1, double tol) {
  require_tol(tol);
  ProjectiveFlow flow{sys};
  RiccatiShot shot;
  shot.end = x0;
  const std::vector<double> y0{flow.start(x0)};
  StepHooks hooks;
  hooks.on_accept = [&](const DenseSegment& seg) {
    if (flow.reciprocal) {
      const double w_old = (*seg.y_old)[0];
      const double w_new = (*seg.y_new)[0];
      if (w_old < 0.0 && w_new >= 0.0) {
        ++shot.poles;
        ++shot.signed_poles;
      } else if (w_old > 0.0 && w_new <= 0.0) {
        ++shot.poles;
        --shot.signed_poles;
      }
    }
    shot.end = flow.point((*seg.y_new)[0]);
  };
  hooks.after_accept = [&](double, std::vector<double>& y) { return flow.maybe_switch(y); };
  const VectorField field = flow.field();
  DormandPrince stepper(field, 1, tol);
  stepper.run(y0, t0, t1, hooks);
  return shot;
}

std::vector<double> cumulative_quadrature(const TimeGrid& grid, std::span<const double> f) {
  const std::size_t n = grid.size();
  if (f.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "samples and grid differ in length");
  }
  std::vector<double> out(n, 0.0);
  const std::size_t width = std::min<std::size_t>(4, n);
  const auto t = grid.times();
  static const double gauss = 0.5 / std::sqrt(3.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Stencil containing the panel [t_i, t_{i+1}].
    std::size_t s0 = i > 0 ? i - 1 : 0;
    s0 = std::min(s0, n - width);
    const double mid = 0.5 * (t[i] + t[i + 1]);
    const double h = t[i + 1] - t[i];
    double panel = 0.0;
    for (const double g : {mid - gauss * h, mid + gauss * h}) {
      double value = 0.0;
      for (std::size_t j = s0; j < s0 + width; ++j) {
        double basis = 1.0;
        for (std::size_t k = s0; k < s0 + width; ++k) {
          if (k != j) basis *= (g - t[k]) / (t[j] - t[k]);
        }
        value += basis * f[j];
      }
      panel += value;
    }
    out[i + 1] = out[i] + 0.5 * h * panel;
  }
  return out;
}

std::vector<double> fd_weights(double x0, std::span<const double> nodes, int order) {
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(order);
  if (n <= m) throw Error(ErrorCode::InvalidArgument, "stencil too small for derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

namespace {

std::size_t window_start(std::size_t i, std::size_t n, std::size_t stencil) {
  const std::size_t half = stencil / 2;
  const std::size_t s0 = i > half ? i - half : 0;
  return std::min(s0, n - stencil);
}

}  // namespace

std::vector<double> differentiate_samples(const TimeGrid& grid, std::span<const double> values,
                                          int order, std::size_t stencil) {
  const std::size_t n = grid.size();
  if (values.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "samples and grid differ in length");
  }
  stencil = std::min(stencil, n);
  const auto t = grid.times();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s0 = window_start(i, n, stencil);
    const auto w = fd_weights(t[i], t.subspan(s0, stencil), order);
    double acc = 0.0;
    for (std::size_t k = 0; k < stencil; ++k) acc += w[k] * values[s0 + k];
    out[i] = acc;
  }
  return out;
}

std::vector<double> riccati_residual(const RiccatiSystem& sys, const Trajectory& traj,
                                     std::size_t stencil) {
  const std::size_t n = traj.size();
  if (traj.grid.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "trajectory states and grid differ in length");
  }
  stencil = std::min(stencil, n);
  const auto t = traj.grid.times();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& center = traj.states[i];
    // Switch charts at the equation's own scale |x| = sqrt|a0/a2| rather than
    // at 1: for fast rotations this keeps both charts away from their poles.
    double scale = 1.0;
    const double a0 = sys.a0(t[i]);
    const double a2 = sys.a2(t[i]);
    if (a0 != 0.0 && a2 != 0.0) scale = std::clamp(std::sqrt(std::abs(a0 / a2)), 0.1, 10.0);
    const bool reciprocal = std::abs(center.p()) > scale * std::abs(center.q());
    const std::size_t s0 = window_start(i, n, stencil);
    const auto w = fd_weights(t[i], t.subspan(s0, stencil), 1);
    double deriv = 0.0;
    for (std::size_t k = 0; k < stencil; ++k) {
      const auto& s = traj.states[s0 + k];
      const double v = reciprocal ? s.q() / s.p() : s.p() / s.q();
      deriv += w[k] * v;
    }
    const double v = reciprocal ? center.q() / center.p() : center.p() / center.q();
    out[i] = deriv - (reciprocal ? sys.rhs_reciprocal(t[i], v) : sys.rhs(t[i], v));
  }
  return out;
}

double hermite_interpolate(double t0, double t1, double y0, double y1, double d0, double d1,
                           double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

}  // namespace riccati
