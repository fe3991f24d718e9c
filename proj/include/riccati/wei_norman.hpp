#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riccati/core.hpp"
#include "riccati/integrator.hpp"
#include "riccati/parallel.hpp"

namespace riccati {

/// Factor order of U(t) as a product of one-parameter subgroups, written
/// left to right:
///   I   exp(u1 L1) exp(u2 L2) exp(u0 L0)
///   II  exp(g0 L0) exp(g1 L1) exp(g2 L2)
///   III exp(h2 L2) exp(h1 L1) exp(h0 L0)
///   IV  exp(f1 L1) exp(f0 L0) exp(f2 L2)
///   V   exp(v0 L0) exp(v2 L2) exp(v1 L1)
///   VI  exp(w2 L2) exp(w0 L0) exp(w1 L1)
enum class Ordering { I, II, III, IV, V, VI };

inline constexpr std::array<Ordering, 6> kAllOrderings{Ordering::I,  Ordering::II,
                                                       Ordering::III, Ordering::IV,
                                                       Ordering::V,  Ordering::VI};

std::string_view to_string(Ordering ordering);
Ordering parse_ordering(std::string_view text);

std::array<Generator, 3> factor_sequence(Ordering ordering);

/// Coordinates keyed by generator: index 0 multiplies L0, 1 multiplies L1,
/// 2 multiplies L2.
using Coords = std::array<double, 3>;

/// Second-class canonical coordinates sampled on a grid, with their time
/// derivatives (used for Hermite interpolation between nodes).
struct WnCoordinates {
  Ordering ordering = Ordering::I;
  TimeGrid grid;
  std::array<std::vector<double>, 3> values;
  std::array<std::vector<double>, 3> rates;

  Coords at(std::size_t node) const {
    return {values[0][node], values[1][node], values[2][node]};
  }
  Coords rate_at(std::size_t node) const {
    return {rates[0][node], rates[1][node], rates[2][node]};
  }
};

/// Time derivatives of the coordinates for the given ordering.
Coords wn_rates(Ordering ordering, const RiccatiSystem& sys, double t, const Coords& c);

VectorField wn_vector_field(Ordering ordering, const RiccatiSystem& sys);

using WnRates = std::function<Coords(double t, const Coords& c)>;

/// Substitutes candidate rates into the adjoint expansion
///   sum_i rate_i [prod_{j>i} exp(-c_j ad L_j)] L_i
/// and returns the largest mismatch against (a0, a1, a2) over the samples.
double verify_wn_relation(Ordering ordering, const RiccatiSystem& sys, const WnRates& candidate,
                          std::span<const double> times, std::span<const Coords> states);

/// Same, with the shipped rates of `ordering` as the candidate.
double verify_wn_relation(Ordering ordering, const RiccatiSystem& sys,
                          std::span<const double> times, std::span<const Coords> states);

/// Integrates the coordinate system from zero. Blow-up surfaces as
/// StepSizeUnderflow (or DomainExceeded) with the ordering named in the message.
WnCoordinates solve_wn(Ordering ordering, const RiccatiSystem& sys, const TimeGrid& grid,
                       double tol = kDefaultTol);

struct WnAttempt {
  Ordering ordering;
  std::optional<WnCoordinates> coords;
  std::string failure;
};

/// Solves the requested orderings independently; failures are reported, not thrown.
std::vector<WnAttempt> solve_wn_many(std::span<const Ordering> orderings,
                                     const RiccatiSystem& sys, const TimeGrid& grid,
                                     double tol = kDefaultTol,
                                     Execution exec = Execution::Parallel);

/// Product of the ordering's one-parameter factors. The written left-to-right
/// order is the order in which the factors act on the initial point, so the
/// matrix product runs right to left: ordering I gives
/// exp(u0 L0) * exp(u2 L2) * exp(u1 L1) as matrices, reproducing
/// x(t) = e^{u1} x0 / (1 - u2 e^{u1} x0) + u0.
Sl2Element evolution_operator(Ordering ordering, const Coords& c);

/// Evolution operator at any t in the grid span; off-node values use cubic
/// Hermite interpolation of the coordinates.
Sl2Element evolution_operator(const WnCoordinates& coords, double t);

Trajectory general_solution(const WnCoordinates& coords, const ProjectivePoint& x0,
                            Execution exec = Execution::Parallel);

enum class ReducedCase { V, VI };

/// Riccati equation satisfied by phi = d/dt of the L1 coordinate.
///   V:  dphi/dt = -phi^2/2 + q phi + p,  q = a0'/a0,
///       p = a1' - (a1/a0) a0' - 2 a0 a2 + a1^2/2
///   VI: dphi/dt = phi^2/2 + r phi + s,   r = a2'/a2,
///       s = a1' - (a1/a2) a2' + 2 a0 a2 - a1^2/2
/// Throws CoefficientVanishes if the divisor (a0 for V, a2 for VI) vanishes
/// or changes sign on the domain.
RiccatiSystem reduced_riccati(ReducedCase which, const RiccatiSystem& sys);

}  // namespace riccati
