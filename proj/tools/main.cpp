#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "ggmc/commands.hpp"
#include "ggmc/io.hpp"
#include "ggmc/parallel.hpp"

// ggmc: edge-proportion (graph complexity) estimation for Gaussian graphical
// models. Subcommands: estimate (CSV in, artifacts out), simulate
// (model-based replication study), ecdf (p-value ECDF export), oracle
// (closed-form self-checks). GGMC_THREADS caps parallelism (0 = auto).

namespace {

std::string method_flag;
std::string pi0_flag;

ggmc::RegMethod parse_method(const std::string& name) {
  if (name == "lasso") return ggmc::RegMethod::Lasso;
  if (name == "scaled-lasso" || name == "scaled_lasso")
    return ggmc::RegMethod::ScaledLasso;
  throw CLI::ValidationError("--method must be lasso or scaled-lasso");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian graphical model complexity estimation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "thread cap (0 = GGMC_THREADS/auto)");

  // estimate
  ggmc::EstimateConfig est;
  std::string est_method = "lasso";
  std::string est_pi0 = "both";
  auto* estimate = app.add_subcommand("estimate", "run the pipeline on a CSV");
  estimate->add_option("--input", est.input, "numeric CSV, rows = observations")
      ->required();
  estimate->add_flag("--header", est.has_header, "input has a header row");
  estimate->add_option("--method", est_method, "lasso | scaled-lasso");
  estimate->add_option("--kappa", est.kappa, "penalty multiplier");
  estimate->add_option("--alpha", est.alpha, "FDR level")
      ->check(CLI::Range(1e-6, 0.999999));
  estimate->add_option("--pi0", est_pi0, "smoother | bootstrap | both");
  estimate->add_option("--grid-lo", est.grid.lo, "lambda grid start");
  estimate->add_option("--grid-hi", est.grid.hi, "lambda grid end");
  estimate->add_option("--grid-step", est.grid.step, "lambda grid step");
  estimate->add_option("--B", est.B, "bootstrap replicates");
  estimate->add_option("--spline-dof", est.spline_dof, "smoother spline dof");
  estimate->add_option("--seed", est.seed, "bootstrap seed");
  estimate->add_option("--out", est.out_dir, "output directory")->required();
  std::string emit = "json,csv";
  estimate->add_option("--emit", emit, "formats: json,csv");

  // simulate
  std::string sim_config_path;
  std::string sim_out = ".";
  int sim_reps = -1;
  std::int64_t sim_seed = -1;
  auto* simulate = app.add_subcommand("simulate", "replication study");
  simulate->add_option("--config", sim_config_path, "SimConfig JSON file")
      ->required();
  simulate->add_option("--reps", sim_reps, "override replication count");
  simulate->add_option("--seed", sim_seed, "override root seed");
  simulate->add_option("--out", sim_out, "output directory");

  // ecdf
  ggmc::EcdfConfig ec;
  auto* ecdf = app.add_subcommand("ecdf", "export a p-value ECDF");
  ecdf->add_option("--input", ec.input, "p-values CSV ('p' column or single)")
      ->required();
  bool no_header = false;
  ecdf->add_flag("--no-header", no_header, "input has no header row");
  ecdf->add_option("--out", ec.out, "output CSV path")->required();
  ecdf->add_flag("--jumps", ec.jumps, "include exact jump points");
  ecdf->add_flag("--uniform-ref", ec.uniform_ref, "add uniform reference");

  // oracle
  ggmc::OracleConfig oc;
  auto* oracle = app.add_subcommand("oracle", "closed-form self checks");
  oracle->add_option("--out", oc.out, "JSON report path");
  oracle->add_option("--mehler-rho", oc.mehler_rho, "Mehler series rho");
  oracle->add_option("--x", oc.mehler_x, "Mehler series x");
  oracle->add_option("--terms", oc.mehler_terms, "Mehler truncation");
  oracle->add_flag("--quick", oc.quick, "smaller Monte Carlo sizes");
  oracle->add_option("--seed", oc.seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) {
      est.method = parse_method(est_method);
      est.pi0 = ggmc::pi0_choice_from_string(est_pi0);
      est.emit_json = emit.find("json") != std::string::npos;
      est.emit_csv = emit.find("csv") != std::string::npos;
      return ggmc::cmd_estimate(est, threads);
    }
    if (*simulate) {
      ggmc::SimConfig cfg =
          ggmc::SimConfig::from_json(ggmc::read_text_file(sim_config_path));
      if (sim_reps > 0) cfg.replications = sim_reps;
      if (sim_seed >= 0) cfg.root_seed = static_cast<std::uint64_t>(sim_seed);
      return ggmc::cmd_simulate(cfg, sim_out, threads);
    }
    if (*ecdf) {
      ec.has_header = !no_header;
      return ggmc::cmd_ecdf(ec);
    }
    if (*oracle) return ggmc::cmd_oracle(oc, threads);
  } catch (const ggmc::ParseError& e) {
    std::cerr << "ggmc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ggmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
