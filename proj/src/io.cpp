#include "riccati/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "riccati/error.hpp"

namespace riccati {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view text) {
  const std::string s(trim(text));
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "+inf") return std::numeric_limits<double>::infinity();
  if (lower == "-inf") return -std::numeric_limits<double>::infinity();
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, fmt::format("'{}' is not a real number", s));
  }
  return v;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

TimeGrid parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) {
    throw Error(ErrorCode::ParseError,
                fmt::format("grid '{}' must be start:stop:nodes", spec));
  }
  const double t0 = parse_real(parts[0]);
  const double t1 = parse_real(parts[1]);
  const double nodes = parse_real(parts[2]);
  if (nodes < 2 || nodes != std::floor(nodes) || !(t1 > t0)) {
    throw Error(ErrorCode::ParseError,
                fmt::format("grid '{}' needs start < stop and an integer node count >= 2", spec));
  }
  return TimeGrid::uniform(t0, t1, static_cast<std::size_t>(nodes));
}

ProjectivePoint parse_point(std::string_view text) {
  const double v = parse_real(text);
  if (std::isinf(v)) return ProjectivePoint::infinity();
  return ProjectivePoint::finite(v);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,p,q,x_repr\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.states[i];
    out << format_real(traj.grid[i]) << ',' << format_real(s.p()) << ','
        << format_real(s.q()) << ',' << s.to_string() << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot write '{}'", path));
  write_trajectory_csv(out, traj);
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}'", path));
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, fmt::format("'{}' is empty", path));
  }
  const auto header = split(line, ',');
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("'{}' lacks a '{}' column", path, name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ct = column("t"), cp = column("p"), cq = column("q");
  std::vector<double> times;
  std::vector<ProjectivePoint> states;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < header.size()) {
      throw Error(ErrorCode::ParseError, fmt::format("short row in '{}'", path), row);
    }
    times.push_back(parse_real(cells[ct]));
    states.emplace_back(parse_real(cells[cp]), parse_real(cells[cq]));
  }
  return {TimeGrid(std::move(times)), std::move(states)};
}

}  // namespace riccati
