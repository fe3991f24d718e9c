#pragma once

#include <string>
#include <vector>

#include "riccati/core.hpp"
#include "riccati/integrator.hpp"
#include "riccati/parallel.hpp"
#include "riccati/reduction.hpp"

namespace riccati {

/// Physicists' Hermite polynomial and its derivative at one point.
struct HermiteEval {
  int n = 0;
  double value = 1.0;
  double derivative = 0.0;
};

/// Upward recurrence H_n = 2 xi H_{n-1} - 2 (n-1) H_{n-2}; H_n' = 2 n H_{n-1}.
HermiteEval hermite(int n, double xi);

/// H_n(0) by the integer recurrence (exact for n <= 40).
__int128 hermite_at_zero(int n);

/// dz/dxi = (xi^2 - lambda) - z^2, the log-derivative form of
/// -psi'' + xi^2 psi = lambda psi.
RiccatiSystem oscillator_riccati(double lambda, Interval domain = {0.0, 8.0});

/// For even n: k1 = H_n(0)^2 = [n! / (n/2)!]^2. For odd n: k1 = |H_n'(0)|
/// = 2 n! / ((n-1)/2)!. Exact for n <= 20.
unsigned __int128 hermite_k1(int n);
std::string to_string_u128(unsigned __int128 v);

/// z = H_n'/H_n - xi for even n (and the same expression for any n).
/// Throws HermiteZero, with the nearby root in the message, when xi is
/// within 1e-10 of a zero of H_n.
double g0_closed_form(int n, double xi);

struct OscillatorCoords {
  int n = 0;
  TimeGrid grid;
  std::vector<double> g0, g1, g2;
  unsigned __int128 k1 = 1;
  /// Integration constant making g2(0) = 0 (zero, since the quadrature
  /// starts at xi = 0).
  double k2 = 0.0;
};

/// Even n, ordering III coordinates of the oscillator equation at lambda = 2n + 1:
///   g0 = H_n'/H_n - xi, g1 = log k1 - 2 log|H_n| + xi^2,
///   g2 = -integral_0^xi e^{g1}.
/// The grid must start at 0 and end before the first positive zero of H_n
/// (HermiteZero otherwise).
OscillatorCoords g1_g2_closed_form(int n, const TimeGrid& grid);

/// Odd n, ordering III coordinates of the reciprocal equation
/// dv/dxi = 1 - (xi^2 - lambda) v^2 (v = 1/z):
///   g0 = H_n / (H_n' - xi H_n), g1 = xi^2 + 2 log(k1 / |H_n' - xi H_n|),
///   g2 = -integral_0^xi (s^2 - lambda) e^{g1}.
/// Grid from 0 to before the first zero of H_n' - xi H_n (DenominatorZero).
OscillatorCoords odd_case_coords(int n, const TimeGrid& grid);

/// psi = H_n e^{-xi^2/2} and psi' = (H_n' - xi H_n) e^{-xi^2/2}, unnormalized.
LinearSolution eigenfunction(int n, const TimeGrid& grid);

struct Eigenvalue {
  double lambda = 0.0;
  int nodes = 0;
};

struct SpectralResult {
  std::vector<Eigenvalue> eigenvalues;  // ascending
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double xi_max = 0.0;
  /// Final bisection bracket width (largest over the eigenvalues found).
  double tolerance = 0.0;
};

inline constexpr double kDefaultXiMax = 8.0;

/// Number of eigenvalues of the given parity below lambda, from one shot of
/// the projective flow on [0, xi_max]: passages of z through infinity plus
/// one if z + xi < 0 at xi_max. Even states start at z = 0, odd states at
/// z = infinity.
int eigenvalue_count(double lambda, int parity, double xi_max, double tol = 1e-12);

/// Brackets every eigenvalue in (lambda_lo, lambda_hi) through the count
/// function and bisects each to width `tol`. Eigenvalues are bisected
/// independently (in parallel unless exec is Serial). Throws NoSignChange
/// if the interval holds none.
SpectralResult spectrum_scan(double lambda_lo, double lambda_hi, double xi_max = kDefaultXiMax,
                             double tol = 1e-8, Execution exec = Execution::Parallel);

/// Serial reference: recursive interval halving over the combined count.
SpectralResult spectrum_scan_reference(double lambda_lo, double lambda_hi,
                                       double xi_max = kDefaultXiMax, double tol = 1e-8);

struct KummerReport {
  double nuevar_residual = 0.0;   // residual of the equation for v(y)
  double richar_residual = 0.0;   // residual of the oscillator equation for z(xi)
  TimeGrid y_grid;
  Trajectory v;                   // v = W'/W over y, projective
  Trajectory z;                   // z = 2 xi v - xi over xi = sqrt(y)
};

/// Integrates y W'' + (1/2 - y) W' - a W = 0 with a = (1 - lambda)/4 from
/// y_start (series start, six terms), forms v = W'/W and checks
///   dv/dy = a/y - (1/(2y) - 1) v - v^2,
/// then checks z = 2 xi v - xi against the oscillator equation.
KummerReport kummer_map_check(double lambda, double y_max, std::size_t nodes = 2001,
                              double y_start = 1e-4, double tol = 1e-12);

}  // namespace riccati
