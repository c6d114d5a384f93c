#include "ggmc/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "ggmc/errors.hpp"
#include "ggmc/gfc.hpp"
#include "ggmc/io.hpp"
#include "ggmc/normal.hpp"
#include "ggmc/oracles.hpp"
#include "ggmc/rng.hpp"
#include "ggmc/sampler.hpp"

namespace ggmc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const std::string& config_json) {
  json j;
  j["schema"] = 1;
  j["tool"] = "ggmc";
  j["version"] = "0.1.0";
  j["command"] = command;
  j["config"] = json::parse(config_json);
  j["timestamp"] = timestamp_utc();
  write_text_file((dir / "manifest.json").string(), j.dump(2) + "\n");
}

json fdr_to_json(const FdrResult& fdr, int k) {
  json j;
  j["schema"] = 1;
  j["alpha"] = fdr.alpha;
  j["t_hat"] = fdr.t_hat;
  j["infimum_found"] = fdr.infimum_found;
  j["n_rejected"] = fdr.rejected.size();
  auto edges = json::array();
  for (std::int64_t idx : fdr.rejected) {
    const auto [i, jcol] = pair_from_index(k, idx);
    edges.push_back({i + 1, jcol + 1});  // 1-based in all file formats
  }
  j["edges"] = std::move(edges);
  return j;
}

json pi0_to_json(const Pi0Estimate& est) {
  json j;
  j["method"] = to_string(est.method);
  j["pi0_hat"] = est.pi0_hat;
  j["lambda_grid"] = est.curve.lambda;
  j["tail_counts"] = est.curve.tail_counts;
  j["curve"] = est.curve.pi0;
  j["n_pvalues"] = est.curve.n_pvalues;
  if (est.method == Pi0Method::Smoother) {
    j["spline_dof"] = est.spline_dof;
    j["spline_fit"] = est.spline_fit;
  } else if (est.method == Pi0Method::Bootstrap) {
    j["B"] = est.B;
    j["seed"] = est.seed;
    j["selected_lambda"] = est.selected_lambda;
    j["plug_in"] = est.plug_in;
    j["mse"] = est.mse;
  }
  return j;
}

void write_pvalues_csv(const fs::path& path, const TestResults& tests) {
  std::vector<std::vector<double>> rows;
  rows.reserve(tests.npairs());
  for (std::int64_t idx = 0; idx < tests.npairs(); ++idx) {
    const auto [i, j] = pair_from_index(tests.k, idx);
    rows.push_back({static_cast<double>(i + 1), static_cast<double>(j + 1),
                    tests.t[idx], tests.p[idx]});
  }
  write_csv_rows(path.string(), {"i", "j", "T", "p"}, rows);
}

void write_ecdf_csv(const std::string& path, const Ecdf& ecdf, bool jumps,
                    bool uniform_ref) {
  std::vector<double> xs;
  for (int g = 0; g < 512; ++g) xs.push_back(g / 511.0);
  if (jumps)
    xs.insert(xs.end(), ecdf.sorted().begin(), ecdf.sorted().end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<std::string> header = {"lambda", "F"};
  if (uniform_ref) header.push_back("uniform");
  std::vector<std::vector<double>> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    std::vector<double> row = {x, ecdf(x)};
    if (uniform_ref) row.push_back(std::min(1.0, std::max(0.0, x)));
    rows.push_back(std::move(row));
  }
  write_csv_rows(path, header, rows);
}

std::vector<double> pvalues_of(const TestResults& tests) {
  return {tests.p.data(), tests.p.data() + tests.p.size()};
}

}  // namespace

std::string EstimateConfig::to_json() const {
  json j;
  j["input"] = input;
  j["has_header"] = has_header;
  j["method"] = method == RegMethod::Lasso ? "lasso" : "scaled-lasso";
  j["kappa"] = kappa;
  j["alpha"] = alpha;
  j["pi0"] = ggmc::to_string(pi0);
  j["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
  j["B"] = B;
  j["spline_dof"] = spline_dof;
  j["seed"] = seed;
  j["out"] = out_dir;
  j["emit_json"] = emit_json;
  j["emit_csv"] = emit_csv;
  return j.dump(2);
}

EstimateConfig EstimateConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  EstimateConfig cfg;
  cfg.input = j.at("input").get<std::string>();
  cfg.has_header = j.value("has_header", false);
  if (j.contains("method")) {
    const auto name = j["method"].get<std::string>();
    if (name == "lasso")
      cfg.method = RegMethod::Lasso;
    else if (name == "scaled-lasso" || name == "scaled_lasso")
      cfg.method = RegMethod::ScaledLasso;
    else
      throw InvalidSpec("unknown regression method: " + name);
  }
  cfg.kappa = j.value("kappa", 1.0);
  cfg.alpha = j.value("alpha", 0.1);
  if (j.contains("pi0"))
    cfg.pi0 = pi0_choice_from_string(j["pi0"].get<std::string>());
  if (j.contains("grid")) {
    cfg.grid.lo = j["grid"].value("lo", 0.0);
    cfg.grid.hi = j["grid"].value("hi", 0.95);
    cfg.grid.step = j["grid"].value("step", 0.01);
  }
  cfg.B = j.value("B", 100);
  cfg.spline_dof = j.value("spline_dof", 3);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.out_dir = j.value("out", std::string("."));
  cfg.emit_json = j.value("emit_json", true);
  cfg.emit_csv = j.value("emit_csv", true);
  return cfg;
}

int cmd_estimate(const EstimateConfig& cfg, int threads) {
  Matrix X;
  try {
    X = read_csv_matrix(cfg.input, cfg.has_header).values;
    if (X.rows() < 10 || X.cols() < 3)
      throw InvalidSpec("estimate: need n >= 10 rows and k >= 3 columns, got " +
                        std::to_string(X.rows()) + "x" +
                        std::to_string(X.cols()));
  } catch (const std::exception& e) {
    std::cerr << "ggmc estimate: bad input: " << e.what() << '\n';
    return 2;
  }

  try {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const auto grid = lambda_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.step);

    const GfcResult gfc = run_gfc(X, cfg.method, PenaltyPolicy{cfg.kappa},
                                  cfg.alpha, threads);
    const auto pvals = pvalues_of(gfc.tests);

    if (cfg.emit_csv) write_pvalues_csv(dir / "pvalues.csv", gfc.tests);
    if (cfg.emit_json) {
      json fdr = fdr_to_json(gfc.fdr, gfc.tests.k);
      fdr["n"] = gfc.tests.n;
      fdr["k"] = gfc.tests.k;
      fdr["unconverged_nodes"] = gfc.fits.unconverged_nodes;
      write_text_file((dir / "fdr_edges.json").string(), fdr.dump(2) + "\n");

      json pi0;
      pi0["schema"] = 1;
      if (cfg.pi0 != Pi0Choice::Bootstrap)
        pi0["smoother"] =
            pi0_to_json(smoother_pi0(pvals, grid, cfg.spline_dof));
      if (cfg.pi0 != Pi0Choice::Smoother)
        pi0["bootstrap"] = pi0_to_json(
            bootstrap_pi0(pvals, grid, cfg.B, cfg.seed, threads));
      write_text_file((dir / "pi0.json").string(), pi0.dump(2) + "\n");
    }
    if (cfg.emit_csv)
      write_ecdf_csv((dir / "ecdf.csv").string(), Ecdf(pvals), false, false);
    write_manifest(dir, "estimate", cfg.to_json());
    return 0;
  } catch (const DegenerateResidual& e) {
    std::cerr << "ggmc estimate: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateScale& e) {
    std::cerr << "ggmc estimate: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "ggmc estimate: " << e.what() << '\n';
    return 1;
  }
}

int cmd_simulate(const SimConfig& cfg, const std::string& out_dir,
                 int threads) {
  try {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const SimulationReport report = run_simulation(cfg, threads);
    write_text_file((dir / "report.json").string(),
                    report.to_json(false) + "\n");
    write_text_file((dir / "table.txt").string(), report.table());

    std::vector<std::vector<double>> rows;
    for (const auto& rec : report.records)
      rows.push_back({static_cast<double>(rec.seed), rec.ok ? 1.0 : 0.0,
                      rec.pi0_smoother, rec.pi0_bootstrap, rec.lambda_star,
                      rec.t_hat, static_cast<double>(rec.n_rejected), rec.fdp,
                      static_cast<double>(rec.unconverged_nodes),
                      rec.runtime_sec});
    write_csv_rows((dir / "records.csv").string(),
                   {"seed", "ok", "pi0_smoother", "pi0_bootstrap",
                    "lambda_star", "t_hat", "n_rejected", "fdp",
                    "unconverged_nodes", "runtime_sec"},
                   rows);
    write_manifest(dir, "simulate", cfg.to_json());
    std::cout << report.table();
    if (report.failure_budget_exceeded) {
      std::cerr << "ggmc simulate: " << report.n_failed << "/"
                << cfg.replications
                << " replications failed (over the 10% budget)\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "ggmc simulate: " << e.what() << '\n';
    return 1;
  }
}

int cmd_ecdf(const EcdfConfig& cfg) {
  std::vector<double> pvals;
  try {
    const CsvMatrix csv = read_csv_matrix(cfg.input, cfg.has_header);
    Eigen::Index col = csv.values.cols() - 1;
    for (std::size_t c = 0; c < csv.header.size(); ++c)
      if (csv.header[c] == "p") col = static_cast<Eigen::Index>(c);
    if (csv.values.cols() == 1) col = 0;
    for (Eigen::Index r = 0; r < csv.values.rows(); ++r)
      pvals.push_back(csv.values(r, col));
    for (double p : pvals)
      if (!(p >= 0.0 && p <= 1.0))
        throw InvalidSpec("p-values must lie in [0, 1]");
  } catch (const std::exception& e) {
    std::cerr << "ggmc ecdf: bad input: " << e.what() << '\n';
    return 2;
  }
  try {
    write_ecdf_csv(cfg.out, Ecdf(pvals), cfg.jumps, cfg.uniform_ref);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "ggmc ecdf: " << e.what() << '\n';
    return 1;
  }
}

int cmd_oracle(const OracleConfig& cfg, int threads) {
  (void)threads;
  json checks = json::array();
  bool all_ok = true;
  auto add = [&](const std::string& name, bool ok, json detail) {
    detail["name"] = name;
    detail["pass"] = ok;
    checks.push_back(std::move(detail));
    all_ok = all_ok && ok;
  };

  try {
    // Requested one-off Mehler evaluation.
    {
      const MehlerResult m =
          mehler_indicator_cov(cfg.mehler_rho, cfg.mehler_x, cfg.mehler_terms);
      const bool ok = std::abs(m.value) <= mehler_bound(cfg.mehler_rho);
      add("mehler_point", ok,
          {{"rho", cfg.mehler_rho},
           {"x", cfg.mehler_x},
           {"value", m.value},
           {"tail_bound", m.tail_bound}});
    }
    // Orthant identity at rho = 0.5, x = 0: arcsin(rho) / (2 pi).
    {
      const MehlerResult m = mehler_indicator_cov(0.5, 0.0, cfg.mehler_terms);
      const double expect = std::asin(0.5) / (2.0 * M_PI);
      add("mehler_orthant", std::abs(m.value - expect) < 1e-6,
          {{"value", m.value}, {"expected", expect}});
    }
    // Bound on a (rho, x) grid.
    {
      bool ok = true;
      double worst = 0.0;
      for (int a = 1; a <= 20; ++a)
        for (int b = 0; b < 20; ++b) {
          const double rho = 0.045 * a;  // up to 0.9
          const double x = -3.0 + 6.0 * b / 19.0;
          const double v = mehler_indicator_cov(rho, x, 50).value;
          const double margin = mehler_bound(rho) - std::abs(v);
          worst = std::min(worst, margin);
          ok = ok && margin >= -1e-12;
        }
      add("mehler_bound_grid", ok, {{"worst_margin", worst}});
    }
    // Concavity of the alternative p-value CDF.
    {
      bool ok = true;
      double worst = -1.0;
      for (double a : {0.5, 1.0, 2.0, 4.0}) {
        for (double lam = 2e-3; lam < 0.999; lam += 1e-3) {
          const double d2 = alt_pvalue_cdf(a, lam + 1e-3) -
                            2.0 * alt_pvalue_cdf(a, lam) +
                            alt_pvalue_cdf(a, lam - 1e-3);
          worst = std::max(worst, d2);
          ok = ok && d2 <= 1e-9;
        }
      }
      add("alt_cdf_concavity", ok, {{"max_second_difference", worst}});
    }
    // Null case of the alternative CDF is uniform.
    {
      double worst = 0.0;
      for (double lam = 0.01; lam < 1.0; lam += 0.01)
        worst = std::max(worst, std::abs(alt_pvalue_cdf(0.0, lam) - lam));
      add("alt_cdf_null_uniform", worst < 1e-12, {{"max_error", worst}});
    }
    // Demko decay: tridiagonal Sigma family, sum |omega| * 1/k plateaus.
    {
      std::vector<double> per_k;
      double cmax = 0.0;
      for (int k : {50, 100, 200, 400}) {
        const auto rep = banded_decay_report(tridiagonal_sigma_model(k, 0.4), 1);
        per_k.push_back(rep.per_k);
        cmax = std::max(cmax, rep.c_fit);
      }
      const double lo = *std::min_element(per_k.begin(), per_k.end());
      const double hi = *std::max_element(per_k.begin(), per_k.end());
      add("banded_decay_plateau", (hi - lo) / hi < 0.10,
          {{"per_k", per_k}, {"relative_spread", (hi - lo) / hi}});
    }
    // Isserlis vs Monte Carlo on random small models.
    {
      const int reps = cfg.quick ? 10000 : 100000;
      const int n_models = cfg.quick ? 5 : 20;
      bool ok = true;
      double worst_z = 0.0;
      Rng model_rng(cfg.seed);
      for (int t = 0; t < n_models; ++t) {
        const GraphModel model = erdos_renyi_precision(
            5, 0.4, 0.3, 0.7, derive_seed(cfg.seed, 100 + t));
        const Pair ab{0, 1};
        const Pair cd{t % 2 == 0 ? 1 : 2, 3};
        const DeltaMatrix d = DeltaMatrix::from_model(model);
        const double exact = isserlis_cov(d, ab, cd);
        const McCov mc =
            mc_u_cov(model, ab, cd, 1, reps, derive_seed(cfg.seed, 200 + t));
        const double z = std::abs(mc.estimate - exact) / mc.se;
        worst_z = std::max(worst_z, z);
        ok = ok && z <= 3.0;
      }
      add("isserlis_vs_mc", ok, {{"worst_z", worst_z}, {"reps", reps}});
    }
    // b-correction approaches 1 on the band model.
    {
      const int n = cfg.quick ? 2000 : 10000;
      const GraphModel model = band_precision(cfg.quick ? 20 : 50);
      const SampleMatrix data = sample_mvn(model, n, derive_seed(cfg.seed, 7));
      const Matrix eps = oracle_residuals(model, data.values);
      const Matrix b = b_correction(model, eps);
      const double err = (b.array() - 1.0).abs().maxCoeff();
      add("b_correction_to_one", err <= 0.05, {{"max_abs_error", err}});
    }
  } catch (const std::exception& e) {
    add("exception", false, {{"what", e.what()}});
  }

  json report;
  report["schema"] = 1;
  report["pass"] = all_ok;
  report["checks"] = std::move(checks);
  const std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_text_file(cfg.out, text);
  std::cout << text;
  return all_ok ? 0 : 1;
}

}  // namespace ggmc
