#pragma once

#include <array>
#include <span>
#include <vector>

#include "riccati/core.hpp"
#include "riccati/integrator.hpp"
#include "riccati/parallel.hpp"
#include "riccati/wei_norman.hpp"

namespace riccati {

/// Three solutions of one Riccati equation on a shared grid, pairwise
/// distinct at every node.
class FundamentalTriple {
 public:
  /// Throws DegenerateTriple if the grids differ or two solutions come within
  /// 1e-10 (projective distance) at some node.
  FundamentalTriple(Trajectory x1, Trajectory x2, Trajectory x3);

  const Trajectory& x1() const { return x1_; }
  const Trajectory& x2() const { return x2_; }
  const Trajectory& x3() const { return x3_; }
  const TimeGrid& grid() const { return x1_.grid; }
  std::size_t size() const { return x1_.size(); }

  /// Smallest pairwise projective distance over all nodes.
  double min_separation() const { return min_separation_; }

  /// Separation below 1e-6 somewhere: results are usable but callers should
  /// widen their tolerances.
  bool near_degenerate() const { return min_separation_ < kNearDegenerate; }

  static constexpr double kDegenerate = 1e-10;
  static constexpr double kNearDegenerate = 1e-6;

 private:
  Trajectory x1_, x2_, x3_;
  double min_separation_ = 0.0;
};

/// Integrates the solutions with initial data infinity, 0 and 1.
FundamentalTriple canonical_triple(const RiccatiSystem& sys, const TimeGrid& grid,
                                   double tol = kDefaultTol);

/// Re-expresses an arbitrary triple as the solutions starting at
/// (infinity, 0, 1), using the superposition formula itself.
FundamentalTriple to_canonical_initial_data(const FundamentalTriple& triple,
                                            Execution exec = Execution::Parallel);

/// x = [k x1 (x3 - x2) + x2 (x1 - x3)] / [k (x3 - x2) + (x1 - x3)] at every
/// node, in homogeneous arithmetic. k = 0, infinity and 1 return x2, x1, x3.
Trajectory superpose(const FundamentalTriple& triple, const ProjectivePoint& k,
                     Execution exec = Execution::Parallel);
Trajectory superpose(const FundamentalTriple& triple, double k,
                     Execution exec = Execution::Parallel);

/// The conserved quantity (x - x2)(x3 - x1) / ((x - x1)(x3 - x2)) per node.
/// PoleValue where x meets x1.
std::vector<double> first_integral(const Trajectory& x, const FundamentalTriple& triple);

/// Closed-form coordinates of `ordering` from a triple with initial data
/// (infinity, 0, 1). Throws WrongInitialData for other initial data and
/// LogDomain (with the node) where a logarithm argument is not positive.
WnCoordinates coords_from_solutions(Ordering ordering, const FundamentalTriple& triple);

/// Unit-determinant matrix whose action sends (src[0], src[1], src[2]) to
/// (dst[0], dst[1], dst[2]); sign chosen so the trace is non-negative.
Sl2Element moebius_from_three_points(const std::array<ProjectivePoint, 3>& src,
                                     const std::array<ProjectivePoint, 3>& dst);

/// At each node, the matrix mapping the initial values of the triple to its
/// current values. The overall sign is continued from node to node starting
/// at the identity, so the curve is continuous.
std::vector<Sl2Element> group_curve_from_solutions(const FundamentalTriple& triple,
                                                   Execution exec = Execution::Parallel);

/// Riccati coefficients generated by a curve of unit-determinant matrices
/// acting on the initial point; entry derivatives come from 5-point finite
/// differences on `grid`. Result coefficients are cubic tables on the grid.
RiccatiSystem riccati_from_group_curve(const TimeGrid& grid, std::span<const Sl2Element> curve);

struct AnnihilationReport {
  double v0 = 0.0;      // scaling field x d/dx summed over the four slots
  double vminus = 0.0;  // translation field
  double vplus = 0.0;   // x^2 d/dx field
  double max() const;
};

/// Central-difference check that the four-point cross-ratio is annihilated
/// by the diagonal extensions of the three generators; each entry is the
/// largest |V f| over the points.
AnnihilationReport annihilation_check(std::span<const std::array<double, 4>> points,
                                      double h = 1e-5);

/// General solution from one known solution x1 by two quadratures: with
/// P = 2 a2 x1 + a1 and u = 1 / (x - x1), u' = -P u - a2. Throws
/// SolutionMismatch if x1 does not solve `sys` to 1e-6.
Trajectory bernoulli_reduce(const RiccatiSystem& sys, const Trajectory& x1,
                            const ProjectivePoint& x0);

}  // namespace riccati
