#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "riccati/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Riccati equations through the SL(2,R) action: solve, superpose, reduce, "
               "oscillator spectrum, invariant checks"};
  app.require_subcommand(1);

  cli::SolveConfig solve;
  auto* s = app.add_subcommand("solve", "Integrate all selected orderings and the direct flow");
  s->add_option("--a0", solve.a0, "Coefficient a0 (const:<v> | poly:<c0>,... | table:<csv>)")
      ->capture_default_str();
  s->add_option("--a1", solve.a1, "Coefficient a1")->capture_default_str();
  s->add_option("--a2", solve.a2, "Coefficient a2")->capture_default_str();
  s->add_option("--x0", solve.x0, "Initial value (number or inf)")->capture_default_str();
  s->add_option("--t", solve.grid, "Grid start:stop:nodes")->capture_default_str();
  s->add_option("--ordering", solve.ordering, "I|II|III|IV|V|VI, a comma list, or all")
      ->capture_default_str();
  s->add_option("--tol", solve.tol, "Integration tolerance");
  s->add_option("--out", solve.out, "Output directory")->capture_default_str();

  cli::SuperposeConfig sup;
  auto* p = app.add_subcommand("superpose", "General solution from three trajectory CSVs");
  p->add_option("x1", sup.x1, "Trajectory CSV (t,p,q)")->required();
  p->add_option("x2", sup.x2, "Trajectory CSV")->required();
  p->add_option("x3", sup.x3, "Trajectory CSV")->required();
  p->add_option("--k", sup.k, "Superposition constant (number or inf)")->required();
  p->add_option("--out", sup.out, "Output CSV, - for stdout")->capture_default_str();

  cli::ReduceConfig red;
  auto* r = app.add_subcommand("reduce", "Riccati form of u'' + b u' + c u = 0");
  r->add_option("--b", red.b, "Coefficient b")->required();
  r->add_option("--c", red.c, "Coefficient c")->required();
  r->add_option("--table-dir", red.table_dir, "Where negated tables are written")
      ->capture_default_str();
  r->add_option("--samples", red.samples, "Write x = u'/u samples to this CSV");
  r->add_option("--t", red.grid, "Sample grid start:stop:nodes")->capture_default_str();
  r->add_option("--u0", red.u0, "u at the grid start")->capture_default_str();
  r->add_option("--du0", red.du0, "u' at the grid start")->capture_default_str();
  r->add_option("--tol", red.tol, "Integration tolerance");

  cli::SpectrumConfig spec;
  auto* e = app.add_subcommand("spectrum", "Oscillator eigenvalues by shooting");
  e->add_option("--lambda-range", spec.lambda_range, "lo,hi")->required();
  e->add_option("--xi-max", spec.xi_max, "Shooting interval end")->capture_default_str();
  e->add_option("--tol", spec.tol, "Bisection width");
  e->add_flag("--emit-eigenfunction", spec.emit_eigenfunction, "Write one CSV per eigenvalue");
  e->add_option("--xi-nodes", spec.xi_nodes, "Eigenfunction samples on [-xi_max, xi_max]")
      ->capture_default_str();
  e->add_option("--out", spec.out, "Eigenfunction output directory")->capture_default_str();

  cli::VerifyConfig ver;
  auto* v = app.add_subcommand("verify", "Run invariant checks and report residuals");
  v->add_option("--property", ver.properties,
                "wnrel|cross-ratio|superposition|annihilation|hermite|spectrum|kummer "
                "(repeatable; default all)");
  v->add_option("--ordering", ver.ordering, "Orderings for wnrel")->capture_default_str();
  v->add_option("--system", ver.system, "tan|default")->capture_default_str();
  v->add_option("--tol", ver.tol, "Integration tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  try {
    if (*s) return cli::run_solve(solve);
    if (*p) return cli::run_superpose(sup);
    if (*r) return cli::run_reduce(red);
    if (*e) return cli::run_spectrum(spec);
    if (*v) return cli::run_verify(ver);
  } catch (const cli::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return cli::kExitConfig;
  } catch (const riccati::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return cli::kExitNumerical;
  }
  return cli::kExitConfig;
}
