#pragma once

#include <cstdint>
#include <string>

#include "ggmc/simulate.hpp"

// Implementations behind the ggmc CLI subcommands. Each writes its artifact
// files under `out_dir` and returns a process exit code: 0 success,
// 1 failure (oracle check failed / failure budget exceeded), 2 malformed
// input, 3 degenerate residual or scale.

namespace ggmc {

struct EstimateConfig {
  std::string input;
  bool has_header = false;
  RegMethod method = RegMethod::Lasso;
  double kappa = 1.0;
  double alpha = 0.1;
  Pi0Choice pi0 = Pi0Choice::Both;
  GridSpec grid;
  int B = 100;
  int spline_dof = 3;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool emit_json = true;
  bool emit_csv = true;

  std::string to_json() const;
  static EstimateConfig from_json(const std::string& text);
};

int cmd_estimate(const EstimateConfig& cfg, int threads = 0);

int cmd_simulate(const SimConfig& cfg, const std::string& out_dir,
                 int threads = 0);

struct EcdfConfig {
  std::string input;          // p-values CSV: single column or a 'p' column
  bool has_header = true;
  std::string out;            // output csv path
  bool jumps = false;         // include exact jump points
  bool uniform_ref = false;   // add the identity reference column
};

int cmd_ecdf(const EcdfConfig& cfg);

struct OracleConfig {
  std::string out;            // report path ("" = stdout only)
  double mehler_rho = 0.5;
  double mehler_x = 0.0;
  int mehler_terms = 50;
  bool quick = false;         // trims the Monte Carlo sizes
  std::uint64_t seed = 20240601;
};

int cmd_oracle(const OracleConfig& cfg, int threads = 0);

}  // namespace ggmc
