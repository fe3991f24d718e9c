#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace riccati {

enum class Interpolation { Linear, Cubic };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double t, double slack = 0.0) const {
    return t >= lo - slack && t <= hi + slack;
  }
  double length() const { return hi - lo; }
};

/// A real coefficient a(t) of the Riccati or linear second-order equation.
///
/// Constant and polynomial coefficients are defined for every t. Tables are
/// defined only on [first sample, last sample]; evaluating outside throws
/// ErrorCode::DomainExceeded rather than extrapolating. The `derived` kind
/// wraps a closure over other coefficients (used for reduced equations and
/// has no string form).
class CoefficientFn {
 public:
  enum class Kind { Constant, Polynomial, Table, Derived };

  static CoefficientFn constant(double value);
  static CoefficientFn polynomial(std::vector<double> ascending);
  static CoefficientFn table(std::vector<double> times, std::vector<double> values,
                             Interpolation rule = Interpolation::Linear);
  static CoefficientFn derived(std::function<double(double)> value,
                               std::optional<Interval> domain,
                               std::function<double(double)> derivative = {});

  /// Parses `const:<v>`, `poly:<c0>,<c1>,...` or `table:<path.csv>[,linear|,cubic]`.
  /// Table CSVs carry a `t,value` header.
  static CoefficientFn parse(std::string_view spec);

  double operator()(double t) const;

  /// Exact for constants and polynomials; centered differences on the sample
  /// grid (linearly interpolated) for tables.
  double derivative(double t) const;

  /// Interval on which evaluation is defined; nullopt means all of R.
  std::optional<Interval> domain() const;

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }

  /// Constant value; only valid when is_constant().
  double constant_value() const;

  CoefficientFn scaled(double factor) const;

  /// String form accepted by parse(). Tables render as `table:<path>` only when they were
  /// loaded from a file; otherwise throws InvalidArgument.
  std::string to_spec() const;

 private:
  struct Constant {
    double value;
  };
  struct Polynomial {
    std::vector<double> coeffs;
  };
  struct Table {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> second;  // spline second derivatives (cubic only)
    std::vector<double> slopes;  // centered-difference slopes at samples
    Interpolation rule;
    std::string source;
  };
  struct Derived {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::optional<Interval> domain;
  };

  using Repr = std::variant<Constant, Polynomial, Table, Derived>;
  explicit CoefficientFn(Repr repr);

  std::shared_ptr<const Repr> repr_;
};

/// Reads a `t,value` CSV into sample vectors.
std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path);

}  // namespace riccati
