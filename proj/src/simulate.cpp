#include "ggmc/simulate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ggmc/errors.hpp"
#include "ggmc/gfc.hpp"
#include "ggmc/parallel.hpp"
#include "ggmc/rng.hpp"
#include "ggmc/sampler.hpp"

namespace ggmc {

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd =
      xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, sd};
}

std::string method_name(RegMethod m) {
  return m == RegMethod::Lasso ? "lasso" : "scaled-lasso";
}

RegMethod method_from_name(const std::string& name) {
  if (name == "lasso") return RegMethod::Lasso;
  if (name == "scaled-lasso" || name == "scaled_lasso")
    return RegMethod::ScaledLasso;
  throw InvalidSpec("unknown regression method: " + name);
}

}  // namespace

std::string to_string(Pi0Choice c) {
  switch (c) {
    case Pi0Choice::Smoother: return "smoother";
    case Pi0Choice::Bootstrap: return "bootstrap";
    case Pi0Choice::Both: return "both";
  }
  return "unknown";
}

Pi0Choice pi0_choice_from_string(const std::string& name) {
  if (name == "smoother") return Pi0Choice::Smoother;
  if (name == "bootstrap") return Pi0Choice::Bootstrap;
  if (name == "both") return Pi0Choice::Both;
  throw InvalidSpec("unknown pi0 method: " + name);
}

std::string SimConfig::to_json() const {
  nlohmann::json j;
  j["model"] = nlohmann::json::parse(model.to_json());
  j["n"] = n;
  j["replications"] = replications;
  j["seed"] = root_seed;
  j["method"] = method_name(method);
  j["kappa"] = kappa;
  j["alpha"] = alpha;
  j["pi0"] = ggmc::to_string(pi0);
  j["grid"] = {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
  j["B"] = B;
  j["spline_dof"] = spline_dof;
  return j.dump(2);
}

SimConfig SimConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SimConfig cfg;
  cfg.model = ModelSpec::from_json(j.at("model").dump());
  cfg.n = j.at("n").get<int>();
  if (j.contains("replications"))
    cfg.replications = j.at("replications").get<int>();
  if (j.contains("seed")) cfg.root_seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("method"))
    cfg.method = method_from_name(j.at("method").get<std::string>());
  if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<double>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("pi0"))
    cfg.pi0 = pi0_choice_from_string(j.at("pi0").get<std::string>());
  if (j.contains("grid")) {
    cfg.grid.lo = j["grid"].value("lo", 0.0);
    cfg.grid.hi = j["grid"].value("hi", 0.95);
    cfg.grid.step = j["grid"].value("step", 0.01);
  }
  if (j.contains("B")) cfg.B = j.at("B").get<int>();
  if (j.contains("spline_dof")) cfg.spline_dof = j.at("spline_dof").get<int>();

  if (cfg.n < 10) throw InvalidSpec("simulate: n must be >= 10");
  if (cfg.replications < 1)
    throw InvalidSpec("simulate: replications must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InvalidSpec("simulate: alpha must lie in (0, 1)");
  if (!(cfg.kappa > 0.0)) throw InvalidSpec("simulate: kappa must be > 0");
  if (cfg.B < 10) throw InvalidSpec("simulate: B must be >= 10");
  return cfg;
}

SimulationReport run_simulation(const SimConfig& cfg, int threads) {
  const GraphModel model = make_model(cfg.model);
  const std::vector<double> grid =
      lambda_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.step);

  SimulationReport report;
  report.config = cfg;
  report.pi0_true = model.pi0_true;
  report.pi0_nominal = model.pi0_nominal;
  report.records.resize(cfg.replications);

  const bool want_smoother = cfg.pi0 != Pi0Choice::Bootstrap;
  const bool want_bootstrap = cfg.pi0 != Pi0Choice::Smoother;

  parallel_for(
      cfg.replications,
      [&](std::int64_t r) {
        RepRecord rec;
        rec.seed = cfg.root_seed + static_cast<std::uint64_t>(r) + 1;
        const auto start = std::chrono::steady_clock::now();
        try {
          const SampleMatrix data =
              sample_mvn(model, cfg.n, derive_seed(rec.seed, 0));
          const GfcResult gfc = run_gfc(data.values, cfg.method,
                                        PenaltyPolicy{cfg.kappa}, cfg.alpha,
                                        /*threads=*/1);
          rec.unconverged_nodes =
              static_cast<int>(gfc.fits.unconverged_nodes.size());
          rec.t_hat = gfc.fdr.t_hat;
          rec.n_rejected = static_cast<std::int64_t>(gfc.fdr.rejected.size());
          std::int64_t false_rejects = 0;
          for (std::int64_t idx : gfc.fdr.rejected) {
            const auto [i, j] = pair_from_index(model.k, idx);
            if (!model.has_edge(i, j)) ++false_rejects;
          }
          rec.fdp = rec.n_rejected == 0
                        ? 0.0
                        : static_cast<double>(false_rejects) /
                              static_cast<double>(rec.n_rejected);

          const std::vector<double> pvals(gfc.tests.p.data(),
                                          gfc.tests.p.data() +
                                              gfc.tests.p.size());
          if (want_smoother)
            rec.pi0_smoother =
                smoother_pi0(pvals, grid, cfg.spline_dof).pi0_hat;
          if (want_bootstrap) {
            const Pi0Estimate est = bootstrap_pi0(
                pvals, grid, cfg.B, derive_seed(rec.seed, 1), /*threads=*/1);
            rec.pi0_bootstrap = est.pi0_hat;
            rec.lambda_star = est.selected_lambda;
          }
          rec.ok = true;
        } catch (const std::exception& e) {
          rec.ok = false;
          rec.error = e.what();
        }
        rec.runtime_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        report.records[r] = std::move(rec);
      },
      threads);

  std::vector<double> sm, bs, fdps, rejs;
  for (const auto& rec : report.records) {
    if (!rec.ok) {
      ++report.n_failed;
      continue;
    }
    if (rec.pi0_smoother >= 0.0) sm.push_back(rec.pi0_smoother);
    if (rec.pi0_bootstrap >= 0.0) bs.push_back(rec.pi0_bootstrap);
    fdps.push_back(rec.fdp);
    rejs.push_back(static_cast<double>(rec.n_rejected));
  }
  std::tie(report.aggregate.mean_pi0_smoother,
           report.aggregate.sd_pi0_smoother) = mean_sd(sm);
  std::tie(report.aggregate.mean_pi0_bootstrap,
           report.aggregate.sd_pi0_bootstrap) = mean_sd(bs);
  std::tie(report.aggregate.mean_fdp, report.aggregate.sd_fdp) = mean_sd(fdps);
  report.aggregate.mean_rejected = mean_sd(rejs).first;
  report.aggregate.n_ok = static_cast<int>(fdps.size());
  report.failure_budget_exceeded =
      report.n_failed * 10 > cfg.replications;  // > 10% budget
  return report;
}

std::string SimulationReport::to_json(bool deterministic_only) const {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = nlohmann::json::parse(config.to_json());
  j["pi0_true"] = pi0_true;
  j["pi0_nominal"] = pi0_nominal;
  j["n_failed"] = n_failed;
  j["failure_budget_exceeded"] = failure_budget_exceeded;
  auto arr = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json r;
    r["seed"] = rec.seed;
    r["ok"] = rec.ok;
    if (!rec.error.empty()) r["error"] = rec.error;
    r["pi0_smoother"] = rec.pi0_smoother;
    r["pi0_bootstrap"] = rec.pi0_bootstrap;
    r["lambda_star"] = rec.lambda_star;
    r["t_hat"] = rec.t_hat;
    r["n_rejected"] = rec.n_rejected;
    r["fdp"] = rec.fdp;
    r["unconverged_nodes"] = rec.unconverged_nodes;
    r["runtime_sec"] = deterministic_only ? 0.0 : rec.runtime_sec;
    arr.push_back(std::move(r));
  }
  j["records"] = std::move(arr);
  j["aggregate"] = {
      {"mean_pi0_smoother", aggregate.mean_pi0_smoother},
      {"sd_pi0_smoother", aggregate.sd_pi0_smoother},
      {"mean_pi0_bootstrap", aggregate.mean_pi0_bootstrap},
      {"sd_pi0_bootstrap", aggregate.sd_pi0_bootstrap},
      {"mean_fdp", aggregate.mean_fdp},
      {"sd_fdp", aggregate.sd_fdp},
      {"mean_rejected", aggregate.mean_rejected},
      {"n_ok", aggregate.n_ok},
  };
  return j.dump(2);
}

std::string SimulationReport::table() const {
  std::ostringstream os;
  os << "design          k     n   method        nominal_pi0  counted_pi0"
     << "  smoother(mean/sd)   bootstrap(mean/sd)  mean_FDP\n";
  char buf[256];
  std::snprintf(
      buf, sizeof(buf),
      "%-14s %5d %5d  %-12s %11.4f  %11.4f    %6.4f / %6.4f     %6.4f / %6.4f  %8.4f\n",
      ggmc::to_string(config.model.design).c_str(), config.model.k, config.n,
      method_name(config.method).c_str(), pi0_nominal, pi0_true,
      aggregate.mean_pi0_smoother, aggregate.sd_pi0_smoother,
      aggregate.mean_pi0_bootstrap, aggregate.sd_pi0_bootstrap,
      aggregate.mean_fdp);
  os << buf;
  return os.str();
}

}  // namespace ggmc
