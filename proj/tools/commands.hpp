#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerifyFailed = 3;

/// Raised for bad flags or unreadable inputs; maps to kExitConfig.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  std::string a0 = "const:0", a1 = "const:0", a2 = "const:0";
  std::string x0 = "0";
  std::string grid = "0:1:1001";
  std::string ordering = "all";
  std::optional<double> tol;
  std::string out = ".";
};

struct SuperposeConfig {
  std::string x1, x2, x3;
  std::string k;
  std::string out = "-";
};

struct ReduceConfig {
  std::string b, c;
  // Negated tables are written here, since a table string names a file.
  std::string table_dir = ".";
  // Samples of x = u'/u; written only when a path is given.
  std::string samples;
  std::string grid = "0:1:1001";
  double u0 = 1.0, du0 = 0.0;
  std::optional<double> tol;
};

struct SpectrumConfig {
  std::string lambda_range;
  double xi_max = 8.0;
  std::optional<double> tol;
  bool emit_eigenfunction = false;
  std::size_t xi_nodes = 801;
  std::string out = ".";
};

struct VerifyConfig {
  std::vector<std::string> properties;
  std::string ordering = "all";
  std::string system = "default";
  std::optional<double> tol;
};

/// Tolerance precedence: explicit flag, then LIE_RICCATI_TOL, then `fallback`.
double resolve_tol(const std::optional<double>& flag, double fallback);

int run_solve(const SolveConfig& cfg);
int run_superpose(const SuperposeConfig& cfg);
int run_reduce(const ReduceConfig& cfg);
int run_spectrum(const SpectrumConfig& cfg);
int run_verify(const VerifyConfig& cfg);

}  // namespace cli
