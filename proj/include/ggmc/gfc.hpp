#pragma once

#include <cstdint>
#include <vector>

#include "ggmc/regression.hpp"
#include "ggmc/types.hpp"

// Edge-wise test statistics and the FDR-calibrated rejection threshold.
// For a pair (i,j) the bias-corrected statistic is
//   T1_ij = r_ij + r_ii * b_ji + r_jj * b_ij,
// where r is the residual covariance (1/n convention), b_ji is the
// coefficient of X_i in the fit for node j and b_ij the coefficient of X_j
// in the fit for node i, and
//   T_ij = sqrt(n / (r_ii r_jj)) * T1_ij,    p_ij = 2(1 - Phi(|T_ij|)).

namespace ggmc {

struct ResidualSet {
  Matrix eps;  // n x k residuals
  Matrix r;    // k x k residual covariance, 1/n convention
  int n() const { return static_cast<int>(eps.rows()); }
  int k() const { return static_cast<int>(eps.cols()); }
};

struct TestResults {
  int k = 0;
  int n = 0;
  Vector t1;  // upper triangle, pair_index order
  Vector t;
  Vector p;
  std::int64_t npairs() const { return pair_count(k); }
};

struct FdrResult {
  double alpha = 0.0;
  double t_hat = 0.0;
  bool infimum_found = false;  // false => t_hat == 2 sqrt(log k)
  std::vector<std::int64_t> rejected;  // flat pair indices with |T| > t_hat
};

// eps_li = Xc_li - Xc_{l,-i} beta_i on centered data. Throws
// DegenerateResidual when some r_ii <= 1e-12 * var(X_i).
ResidualSet residuals(const Matrix& X, const std::vector<NodewiseFit>& fits);

TestResults t_statistics(const ResidualSet& res,
                         const std::vector<NodewiseFit>& fits,
                         int threads = 0);

// Exact infimum of { t in [0, 2 sqrt(log k)] :
//   G(t) N / max(1, #{|T| > t}) <= alpha } over the piecewise criterion;
// falls back to 2 sqrt(log k) when no t qualifies.
FdrResult fdr_threshold(const TestResults& tr, double alpha);

struct GfcResult {
  FitReport fits;
  ResidualSet residuals;
  TestResults tests;
  FdrResult fdr;
};

GfcResult run_gfc(const Matrix& X, RegMethod method,
                  const PenaltyPolicy& policy, double alpha, int threads = 0);

}  // namespace ggmc
