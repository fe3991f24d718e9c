#include "riccati/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "riccati/error.hpp"
#include "riccati/io.hpp"

namespace riccati {

namespace {

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_second_derivatives(const std::vector<double>& t,
                                              const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
  }
  // Forward elimination; row i has lower entry h_{i-1}.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double lower = (i == 1) ? 0.0 : t[i] - t[i - 1];
    if (i > 1) {
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    if (i == 1) break;
  }
  return m;
}

std::vector<double> centered_slopes(const std::vector<double>& t,
                                    const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> s(n);
  s[0] = (y[1] - y[0]) / (t[1] - t[0]);
  s[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    s[i] = (y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]);
  }
  return s;
}

std::size_t bracket(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) hi = 1;
  if (hi >= times.size()) hi = times.size() - 1;
  return hi - 1;
}

}  // namespace

CoefficientFn::CoefficientFn(Repr repr)
    : repr_(std::make_shared<const Repr>(std::move(repr))) {}

CoefficientFn CoefficientFn::constant(double value) {
  return CoefficientFn(Constant{value});
}

CoefficientFn CoefficientFn::polynomial(std::vector<double> ascending) {
  if (ascending.empty()) ascending.push_back(0.0);
  return CoefficientFn(Polynomial{std::move(ascending)});
}

CoefficientFn CoefficientFn::table(std::vector<double> times,
                                   std::vector<double> values,
                                   Interpolation rule) {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "table times and values differ in length");
  }
  if (times.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "table needs at least two samples");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "table times must be strictly increasing", i);
    }
  }
  Table table{std::move(times), std::move(values), {}, {}, rule, {}};
  if (rule == Interpolation::Cubic) {
    table.second = spline_second_derivatives(table.times, table.values);
  }
  table.slopes = centered_slopes(table.times, table.values);
  return CoefficientFn(std::move(table));
}

CoefficientFn CoefficientFn::derived(std::function<double(double)> value,
                                     std::optional<Interval> domain,
                                     std::function<double(double)> derivative) {
  return CoefficientFn(Derived{std::move(value), std::move(derivative), domain});
}

CoefficientFn CoefficientFn::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError,
                fmt::format("coefficient spec '{}' lacks a kind prefix", spec));
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (kind == "const") {
    return constant(parse_real(body));
  }
  if (kind == "poly") {
    std::vector<double> coeffs;
    for (const auto& item : split(body, ',')) coeffs.push_back(parse_real(item));
    return polynomial(std::move(coeffs));
  }
  if (kind == "table") {
    std::string path(body);
    Interpolation rule = Interpolation::Linear;
    if (const auto comma = path.rfind(','); comma != std::string::npos) {
      const std::string suffix = path.substr(comma + 1);
      if (suffix == "cubic" || suffix == "linear") {
        rule = suffix == "cubic" ? Interpolation::Cubic : Interpolation::Linear;
        path.resize(comma);
      }
    }
    auto [times, values] = read_table_csv(path);
    auto fn = table(std::move(times), std::move(values), rule);
    auto repr = std::get<Table>(*fn.repr_);
    repr.source = std::string(body);
    return CoefficientFn(std::move(repr));
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown coefficient kind '{}'", kind));
}

double CoefficientFn::operator()(double t) const {
  return std::visit(
      [t](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return r.value;
        } else if constexpr (std::is_same_v<R, Polynomial>) {
          double acc = 0.0;
          for (auto it = r.coeffs.rbegin(); it != r.coeffs.rend(); ++it) acc = acc * t + *it;
          return acc;
        } else if constexpr (std::is_same_v<R, Table>) {
          if (!(t >= r.times.front() && t <= r.times.back())) {
            throw Error(ErrorCode::DomainExceeded,
                        fmt::format("t = {} outside table domain [{}, {}]", t,
                                    r.times.front(), r.times.back()));
          }
          const std::size_t i = bracket(r.times, t);
          const double h = r.times[i + 1] - r.times[i];
          const double a = (r.times[i + 1] - t) / h;
          const double b = 1.0 - a;
          double y = a * r.values[i] + b * r.values[i + 1];
          if (r.rule == Interpolation::Cubic) {
            y += ((a * a * a - a) * r.second[i] + (b * b * b - b) * r.second[i + 1]) * h * h / 6.0;
          }
          return y;
        } else {
          if (r.domain && !r.domain->contains(t, 1e-12 * (1.0 + std::abs(t)))) {
            throw Error(ErrorCode::DomainExceeded,
                        fmt::format("t = {} outside coefficient domain", t));
          }
          return r.value(t);
        }
      },
      *repr_);
}

double CoefficientFn::derivative(double t) const {
  return std::visit(
      [this, t](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return 0.0;
        } else if constexpr (std::is_same_v<R, Polynomial>) {
          double acc = 0.0;
          for (std::size_t k = r.coeffs.size(); k-- > 1;) {
            acc = acc * t + static_cast<double>(k) * r.coeffs[k];
          }
          return acc;
        } else if constexpr (std::is_same_v<R, Table>) {
          (void)(*this)(t);  // domain check
          const std::size_t i = bracket(r.times, t);
          const double w = (t - r.times[i]) / (r.times[i + 1] - r.times[i]);
          return (1.0 - w) * r.slopes[i] + w * r.slopes[i + 1];
        } else {
          if (r.derivative) return r.derivative(t);
          const double h = 1e-5 * (1.0 + std::abs(t));
          double lo = t - h;
          double hi = t + h;
          if (r.domain) {
            lo = std::max(lo, r.domain->lo);
            hi = std::min(hi, r.domain->hi);
          }
          return (r.value(hi) - r.value(lo)) / (hi - lo);
        }
      },
      *repr_);
}

std::optional<Interval> CoefficientFn::domain() const {
  if (const auto* table = std::get_if<Table>(repr_.get())) {
    return Interval{table->times.front(), table->times.back()};
  }
  if (const auto* d = std::get_if<Derived>(repr_.get())) return d->domain;
  return std::nullopt;
}

CoefficientFn::Kind CoefficientFn::kind() const {
  return static_cast<Kind>(repr_->index());
}

double CoefficientFn::constant_value() const {
  if (const auto* c = std::get_if<Constant>(repr_.get())) return c->value;
  throw Error(ErrorCode::InvalidArgument, "coefficient is not constant");
}

CoefficientFn CoefficientFn::scaled(double factor) const {
  return std::visit(
      [factor](const auto& r) -> CoefficientFn {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return constant(factor * r.value);
        } else if constexpr (std::is_same_v<R, Polynomial>) {
          auto coeffs = r.coeffs;
          for (auto& c : coeffs) c *= factor;
          return polynomial(std::move(coeffs));
        } else if constexpr (std::is_same_v<R, Table>) {
          auto values = r.values;
          for (auto& v : values) v *= factor;
          return table(r.times, std::move(values), r.rule);
        } else {
          auto value = r.value;
          auto deriv = r.derivative;
          std::function<double(double)> scaled_deriv;
          if (deriv) scaled_deriv = [deriv, factor](double t) { return factor * deriv(t); };
          return derived([value, factor](double t) { return factor * value(t); }, r.domain,
                         scaled_deriv);
        }
      },
      *repr_);
}

std::string CoefficientFn::to_spec() const {
  return std::visit(
      [](const auto& r) -> std::string {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return "const:" + format_real(r.value);
        } else if constexpr (std::is_same_v<R, Polynomial>) {
          std::string out = "poly:";
          for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
            if (i) out += ',';
            out += format_real(r.coeffs[i]);
          }
          return out;
        } else if constexpr (std::is_same_v<R, Table>) {
          if (r.source.empty()) {
            throw Error(ErrorCode::InvalidArgument, "in-memory table has no string form");
          }
          return "table:" + r.source;
        } else {
          throw Error(ErrorCode::InvalidArgument, "derived coefficient has no string form");
        }
      },
      *repr_);
}

std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open table '{}'", path));
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, fmt::format("table '{}' is empty", path));
  }
  const auto header = split(trim(line), ',');
  if (header.size() != 2 || trim(header[0]) != "t" || trim(header[1]) != "value") {
    throw Error(ErrorCode::ParseError,
                fmt::format("table '{}' must start with header 't,value'", path));
  }
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != 2) {
      throw Error(ErrorCode::ParseError, fmt::format("malformed row in '{}': {}", path, line));
    }
    times.push_back(parse_real(cells[0]));
    values.push_back(parse_real(cells[1]));
  }
  return {std::move(times), std::move(values)};
}

}  // namespace riccati
