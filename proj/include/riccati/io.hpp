#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "riccati/integrator.hpp"

namespace riccati {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Parses a real number; `inf`, `+inf`, `-inf` in any case map to infinities.
double parse_real(std::string_view text);

/// 17 significant digits (lossless for doubles); infinities print as `inf`.
std::string format_real(double v);

/// `start:stop:nodes`.
TimeGrid parse_grid(std::string_view spec);

/// Point from a number or `inf`.
ProjectivePoint parse_point(std::string_view text);

/// CSV with header `t,p,q,x_repr`; x_repr is `inf` where q == 0.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads any CSV whose header contains `t`, `p` and `q` columns.
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace riccati
