#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <fmt/core.h>
#include <json.hpp>

#include "riccati/error.hpp"
#include "riccati/io.hpp"
#include "riccati/oscillator.hpp"
#include "riccati/reduction.hpp"
#include "riccati/superposition.hpp"
#include "riccati/wei_norman.hpp"

namespace cli {

using json = nlohmann::ordered_json;
using namespace riccati;
namespace fs = std::filesystem;

namespace {

// Runs the input-parsing part of a command; library parse failures become
// ConfigError so they exit with kExitConfig rather than kExitNumerical.
template <typename F>
auto parse_stage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create directory '{}': {}", dir, ec.message()));
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<Ordering> parse_orderings(const std::string& text) {
  if (text == "all") return {kAllOrderings.begin(), kAllOrderings.end()};
  std::vector<Ordering> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_ordering(trim(part)));
  return out;
}

void write_coords_csv(const fs::path& path, const WnCoordinates& c) {
  auto out = open_out(path);
  out << "t,c_L0,c_L1,c_L2\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    out << format_real(c.grid[i]) << ',' << format_real(c.values[0][i]) << ','
        << format_real(c.values[1][i]) << ',' << format_real(c.values[2][i]) << '\n';
  }
}

double max_distance(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, projective_distance(a.states[i], b.states[i]));
  return m;
}

json grid_json(const TimeGrid& g) {
  return {{"start", g.front()}, {"stop", g.back()}, {"nodes", g.size()}};
}

}  // namespace

double resolve_tol(const std::optional<double>& flag, double fallback) {
  double tol = fallback;
  if (flag) {
    tol = *flag;
  } else if (const char* env = std::getenv("LIE_RICCATI_TOL"); env && *env) {
    tol = parse_stage([&] { return parse_real(env); });
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw ConfigError(fmt::format("tolerance must be positive, got {}", tol));
  }
  return tol;
}

// ---------------------------------------------------------------- solve

int run_solve(const SolveConfig& cfg) {
  const double tol = resolve_tol(cfg.tol, kDefaultTol);
  const auto [sys, grid, x0, orderings] = parse_stage([&] {
    const auto g = parse_grid(cfg.grid);
    auto s = RiccatiSystem::make(CoefficientFn::parse(cfg.a0), CoefficientFn::parse(cfg.a1),
                                 CoefficientFn::parse(cfg.a2), g.span());
    return std::tuple{std::move(s), g, parse_point(cfg.x0), parse_orderings(cfg.ordering)};
  });
  ensure_dir(cfg.out);
  const fs::path dir(cfg.out);

  json summary;
  summary["x0"] = x0.to_string();
  summary["grid"] = grid_json(grid);
  summary["tol"] = tol;

  std::optional<Trajectory> direct;
  try {
    direct = integrate_riccati_projective(sys, x0, grid, tol);
    write_trajectory_csv((dir / "trajectory.csv").string(), *direct);
    summary["direct"] = {{"status", "ok"}, {"trajectory_csv", "trajectory.csv"}};
  } catch (const Error& e) {
    summary["direct"] = {{"status", "failed"}, {"failure", e.what()}};
  }

  const auto attempts = solve_wn_many(orderings, sys, grid, tol);
  std::vector<Trajectory> solved;
  json entries = json::array();
  for (const auto& a : attempts) {
    const std::string name(to_string(a.ordering));
    json entry{{"ordering", name}};
    if (!a.coords) {
      entry["status"] = "failed";
      entry["failure"] = a.failure;
      entries.push_back(entry);
      continue;
    }
    const auto coords_csv = fmt::format("coords_{}.csv", name);
    const auto traj_csv = fmt::format("trajectory_{}.csv", name);
    write_coords_csv(dir / coords_csv, *a.coords);
    solved.push_back(general_solution(*a.coords, x0));
    write_trajectory_csv((dir / traj_csv).string(), solved.back());
    entry["status"] = "ok";
    entry["coords_csv"] = coords_csv;
    entry["trajectory_csv"] = traj_csv;
    if (direct) entry["distance_to_direct"] = max_distance(solved.back(), *direct);
    entries.push_back(entry);
  }
  summary["orderings"] = entries;
  summary["succeeded"] = solved.size();

  double disagreement = 0.0;
  for (std::size_t i = 0; i < solved.size(); ++i)
    for (std::size_t j = i + 1; j < solved.size(); ++j)
      disagreement = std::max(disagreement, max_distance(solved[i], solved[j]));
  summary["max_disagreement"] = solved.size() >= 2 ? json(disagreement) : json(nullptr);

  {
    auto out = open_out(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  print_json(summary);
  if (solved.empty()) {
    std::cerr << "solve: no ordering integrated successfully\n";
    return kExitNumerical;
  }
  return kExitOk;
}

// ------------------------------------------------------------ superpose

int run_superpose(const SuperposeConfig& cfg) {
  const auto [a, b, c, k] = parse_stage([&] {
    return std::tuple{read_trajectory_csv(cfg.x1), read_trajectory_csv(cfg.x2),
                      read_trajectory_csv(cfg.x3), parse_point(cfg.k)};
  });
  const FundamentalTriple triple(a, b, c);
  if (triple.near_degenerate()) {
    std::cerr << fmt::format("superpose: warning: solutions come within {:.3e} of each other\n",
                             triple.min_separation());
  }
  const auto x = superpose(triple, k);
  if (cfg.out == "-") {
    write_trajectory_csv(std::cout, x);
  } else {
    write_trajectory_csv(cfg.out, x);
  }
  return kExitOk;
}

// --------------------------------------------------------------- reduce

namespace {

// String form of -f. Tables are negated into a new CSV under `dir`.
std::string negated(const std::string& text, const CoefficientFn& f, const std::string& name,
                    const std::string& dir) {
  if (f.kind() != CoefficientFn::Kind::Table) return f.scaled(-1.0).to_spec();
  std::string body = text.substr(text.find(':') + 1);
  std::string suffix;
  if (const auto comma = body.rfind(','); comma != std::string::npos) {
    suffix = body.substr(comma);
    body = body.substr(0, comma);
  }
  auto [times, values] = read_table_csv(body);
  ensure_dir(dir);
  const auto path = (fs::path(dir) / (name + ".csv")).string();
  auto out = open_out(path);
  out << "t,value\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    out << format_real(times[i]) << ',' << format_real(-values[i]) << '\n';
  return "table:" + path + suffix;
}

}  // namespace

int run_reduce(const ReduceConfig& cfg) {
  const auto [b, c] = parse_stage([&] {
    return std::pair{CoefficientFn::parse(cfg.b), CoefficientFn::parse(cfg.c)};
  });
  json report;
  report["equation"] = "x' = a0 + a1 x + a2 x^2 with x = u'/u";
  report["a0"] = negated(cfg.c, c, "reduced_a0", cfg.table_dir);
  report["a1"] = negated(cfg.b, b, "reduced_a1", cfg.table_dir);
  report["a2"] = "const:-1";

  if (!cfg.samples.empty()) {
    const double tol = resolve_tol(cfg.tol, kDefaultTol);
    const auto grid = parse_stage([&] { return parse_grid(cfg.grid); });
    const LinearSecondOrder lin{b, c, grid.span()};
    parse_stage([&] { return riccati_from_linear(lin); });
    const auto x = log_derivative(solve_linear(lin, cfg.u0, cfg.du0, grid, tol));
    write_trajectory_csv(cfg.samples, x);
    report["samples_csv"] = cfg.samples;
    report["grid"] = grid_json(grid);
    report["u0"] = cfg.u0;
    report["du0"] = cfg.du0;
  }
  print_json(report);
  return kExitOk;
}

// ------------------------------------------------------------- spectrum

int run_spectrum(const SpectrumConfig& cfg) {
  const double tol = resolve_tol(cfg.tol, 1e-8);
  const auto [lo, hi] = parse_stage([&] {
    const auto parts = split(cfg.lambda_range, ',');
    if (parts.size() != 2) {
      throw Error(ErrorCode::ParseError,
                  fmt::format("--lambda-range '{}' must be lo,hi", cfg.lambda_range));
    }
    return std::pair{parse_real(parts[0]), parse_real(parts[1])};
  });
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError(fmt::format("--lambda-range needs finite lo < hi, got {},{}", lo, hi));
  }
  if (!(cfg.xi_max > 0.0)) throw ConfigError("--xi-max must be positive");
  if (cfg.xi_nodes < 2) throw ConfigError("--xi-nodes must be at least 2");

  json report;
  report["lambda_range"] = {lo, hi};
  report["xi_max"] = cfg.xi_max;
  report["tol"] = tol;
  SpectralResult result;
  try {
    result = spectrum_scan(lo, hi, cfg.xi_max, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSignChange) throw;
    report["eigenvalues"] = json::array();
    report["error"] = e.what();
    print_json(report);
    return kExitNumerical;
  }

  if (cfg.emit_eigenfunction) ensure_dir(cfg.out);
  const auto xi = TimeGrid::uniform(-cfg.xi_max, cfg.xi_max, cfg.xi_nodes);
  json list = json::array();
  for (const auto& ev : result.eigenvalues) {
    json entry{{"lambda", ev.lambda}, {"nodes", ev.nodes}};
    if (cfg.emit_eigenfunction) {
      // The node count identifies the state; psi is the unnormalized
      // H_n e^{-xi^2/2}, which the shooting run cannot resolve in the tails.
      const auto psi = eigenfunction(ev.nodes, xi);
      const auto name = fmt::format("eigenfunction_{}.csv", ev.nodes);
      auto out = open_out(fs::path(cfg.out) / name);
      out << "xi,psi,dpsi\n";
      for (std::size_t i = 0; i < xi.size(); ++i)
        out << format_real(xi[i]) << ',' << format_real(psi.u[i]) << ',' << format_real(psi.du[i])
            << '\n';
      entry["eigenfunction_csv"] = (fs::path(cfg.out) / name).string();
    }
    list.push_back(entry);
  }
  report["eigenvalues"] = list;
  report["bracket_width"] = result.tolerance;
  print_json(report);
  return kExitOk;
}

// --------------------------------------------------------------- verify

namespace {

struct Check {
  std::string property;
  double residual;
  double threshold;
  json extra = json::object();
};

RiccatiSystem verify_system(const std::string& name) {
  if (name == "tan") {
    return RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::constant(0.0),
                               CoefficientFn::constant(1.0), {0.0, 3.0});
  }
  if (name == "default") {
    return RiccatiSystem::make(CoefficientFn::constant(1.0), CoefficientFn::polynomial({0.0, 0.3}),
                               CoefficientFn::constant(0.5), {0.0, 1.0});
  }
  throw ConfigError(fmt::format("unknown system '{}' (tan|default)", name));
}

std::vector<Check> check_wnrel(const RiccatiSystem& sys, const std::vector<Ordering>& orderings) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> times;
  std::vector<Coords> states;
  for (int s = 0; s < 100; ++s) {
    times.push_back(sys.domain.lo + u(rng) * sys.domain.length());
    states.push_back({2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1});
  }
  std::vector<Check> out;
  for (const auto o : orderings) {
    out.push_back({"wnrel", verify_wn_relation(o, sys, times, states), 1e-10,
                   {{"ordering", std::string(to_string(o))}}});
  }
  return out;
}

std::vector<Check> check_cross_ratio(const RiccatiSystem& sys, double tol) {
  const auto grid = TimeGrid::uniform(sys.domain.lo, sys.domain.hi, 1001);
  const auto triple = canonical_triple(sys, grid, tol);
  double drift = 0.0;
  for (double k : {-2.0, 0.5, 3.0}) {
    const auto x = integrate_riccati_projective(sys, ProjectivePoint::finite(k), grid, tol);
    for (double c : first_integral(x, triple)) drift = std::max(drift, std::abs(c - k));
  }
  return {{"cross-ratio", drift, 1e-7}};
}

std::vector<Check> check_superposition(const RiccatiSystem& sys, double tol) {
  const auto grid = TimeGrid::uniform(sys.domain.lo, sys.domain.hi, 1001);
  const auto triple = canonical_triple(sys, grid, tol);
  double worst = 0.0;
  for (double k : {-2.0, 0.3, 10.0}) {
    const auto direct = integrate_riccati_projective(sys, ProjectivePoint::finite(k), grid, tol);
    worst = std::max(worst, max_distance(superpose(triple, k), direct));
  }
  return {{"superposition", worst, 1e-7}};
}

std::vector<Check> check_annihilation() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<std::array<double, 4>> pts;
  while (pts.size() < 100) {
    std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
    bool generic = true;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) generic = generic && std::abs(p[a] - p[b]) > 0.3;
    if (generic) pts.push_back(p);
  }
  const auto r = annihilation_check(pts);
  return {{"annihilation", r.max(), 1e-6, {{"v0", r.v0}, {"vminus", r.vminus}, {"vplus", r.vplus}}}};
}

std::vector<Check> check_hermite() {
  double residual = 0.0;
  for (int n = 0; n <= 8; n += 2) {
    const double lambda = 2.0 * n + 1.0;
    for (int k = 0; k <= 800; ++k) {
      const double xi = -4.0 + 0.01 * k + 0.001;
      const auto h = hermite(n, xi);
      const double second = 2.0 * xi * h.derivative - 2.0 * n * h.value;
      const double g0 = g0_closed_form(n, xi);
      const double dg0 = (second * h.value - h.derivative * h.derivative) / (h.value * h.value) - 1.0;
      residual = std::max(residual, std::abs(dg0 - (xi * xi - lambda - g0 * g0)));
    }
  }
  int k1_mismatches = 0;
  for (int n = 0; n <= 20; n += 2) {
    const __int128 h0 = hermite_at_zero(n);
    k1_mismatches += hermite_k1(n) != static_cast<unsigned __int128>(h0 * h0);
  }
  return {{"hermite", residual, 1e-8},
          {"hermite-k1", static_cast<double>(k1_mismatches), 0.0, {{"checked_up_to", 20}}}};
}

std::vector<Check> check_spectrum(double tol) {
  const auto r = spectrum_scan(0.0, 10.0, kDefaultXiMax, std::min(tol, 1e-8));
  double worst = r.eigenvalues.size() == 5 ? 0.0 : 1.0;
  for (std::size_t n = 0; n < r.eigenvalues.size() && n < 5; ++n) {
    worst = std::max(worst, std::abs(r.eigenvalues[n].lambda - (2.0 * n + 1.0)));
    if (r.eigenvalues[n].nodes != static_cast<int>(n)) worst = 1.0;
  }
  return {{"spectrum", worst, 1e-6, {{"found", r.eigenvalues.size()}}}};
}

std::vector<Check> check_kummer() {
  double worst = 0.0;
  for (double lambda : {1.0, 2.3, 5.0}) worst = std::max(worst, kummer_map_check(lambda, 4.0).nuevar_residual);
  return {{"kummer", worst, 1e-6}};
}

const std::vector<std::string>& all_properties() {
  static const std::vector<std::string> names{"wnrel",      "cross-ratio", "superposition",
                                              "annihilation", "hermite",   "spectrum",
                                              "kummer"};
  return names;
}

}  // namespace

int run_verify(const VerifyConfig& cfg) {
  const double tol = resolve_tol(cfg.tol, 1e-11);
  const auto sys = verify_system(cfg.system);
  const auto orderings = parse_stage([&] { return parse_orderings(cfg.ordering); });
  const auto& wanted = cfg.properties.empty() ? all_properties() : cfg.properties;
  for (const auto& p : wanted) {
    if (std::find(all_properties().begin(), all_properties().end(), p) == all_properties().end())
      throw ConfigError(fmt::format("unknown property '{}'", p));
  }

  std::vector<Check> checks;
  auto append = [&](std::vector<Check> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };
  for (const auto& p : wanted) {
    try {
      if (p == "wnrel") append(check_wnrel(sys, orderings));
      if (p == "cross-ratio") append(check_cross_ratio(sys, tol));
      if (p == "superposition") append(check_superposition(sys, tol));
      if (p == "annihilation") append(check_annihilation());
      if (p == "hermite") append(check_hermite());
      if (p == "spectrum") append(check_spectrum(tol));
      if (p == "kummer") append(check_kummer());
    } catch (const Error& e) {
      checks.push_back({p, std::numeric_limits<double>::infinity(), 0.0, {{"error", e.what()}}});
    }
  }

  bool all_pass = true;
  json list = json::array();
  for (const auto& c : checks) {
    const bool pass = c.residual <= c.threshold;
    all_pass = all_pass && pass;
    json entry{{"property", c.property}};
    entry.update(c.extra);
    entry["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    entry["threshold"] = c.threshold;
    entry["pass"] = pass;
    list.push_back(entry);
  }
  print_json({{"system", cfg.system}, {"tol", tol}, {"properties", list}, {"pass", all_pass}});
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace cli
