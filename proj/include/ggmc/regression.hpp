#pragma once

#include <vector>

#include "ggmc/types.hpp"

// Node-wise sparse regression. The Lasso objective is
//   (1/(2n)) ||y - D beta||^2 + lambda ||beta||_1,
// solved by cyclic coordinate descent with exact soft-threshold updates; the
// scaled Lasso alternates that solve with the noise-scale update
// sigma = ||y - D beta|| / sqrt(n).

namespace ggmc {

enum class RegMethod { Lasso, ScaledLasso };

struct NodewiseFit {
  int node = -1;       // response column; -1 for a bare solver result
  Vector beta;         // coefficients over the remaining columns, natural order
  double lambda_used = 0.0;
  RegMethod method = RegMethod::Lasso;
  double sigma_hat = 0.0;  // ScaledLasso only
  int iterations = 0;      // coordinate sweeps
  bool converged = false;
  double kkt = 0.0;        // max KKT violation at the returned beta
};

// Coefficient of variable j in the fit for node fit.node (j != node).
inline double coef_of(const NodewiseFit& fit, int j) {
  return fit.beta[j < fit.node ? j : j - 1];
}

struct LassoOptions {
  double tol = 1e-7;       // max |coefficient change| per sweep
  int max_iter = 10000;    // sweep budget
  double kkt_tol = 1e-6;   // converged additionally requires kkt <= kkt_tol
  const Vector* warm_start = nullptr;             // initial beta, else zero
  std::vector<double>* objective_path = nullptr;  // per-sweep, if non-null
};

// Non-convergence is not an error: the fit comes back with
// converged == false and the caller decides.
NodewiseFit lasso(const Matrix& design, const Vector& y, double lambda,
                  const LassoOptions& opts = {});

struct ScaledLassoOptions {
  LassoOptions inner;
  double scale_tol = 1e-6;  // stop when |sigma_new - sigma| < scale_tol*sigma
  int max_scale_iter = 100;
};

// Throws DegenerateScale when sigma_hat collapses below 1e-12 * sd(y).
NodewiseFit scaled_lasso(const Matrix& design, const Vector& y, double lambda0,
                         const ScaledLassoOptions& opts = {});

// Max violation of the Lasso stationarity conditions at beta:
// |D_j'(y - D beta)/n - lambda sign(beta_j)| over active j and
// (|D_j'(y - D beta)/n| - lambda)_+ over inactive j.
double kkt_violation(const Matrix& design, const Vector& y, double lambda,
                     const Vector& beta);

struct PenaltyPolicy {
  double kappa = 1.0;  // multiplier on the universal level sqrt(2 log(k)/n)
};

struct FitReport {
  std::vector<NodewiseFit> fits;       // one per node, in column order
  std::vector<int> unconverged_nodes;  // flagged, never fatal
};

// Regresses each centered column on the centered remaining columns.
// Lasso penalty: lambda_i = sd(X_i) * kappa * sqrt(2 log(k)/n), with the 1/n
// standard-deviation convention; scaled Lasso uses the scale-free
// lambda0 = kappa * sqrt(2 log(k)/n).
FitReport fit_all_nodes(const Matrix& X, RegMethod method,
                        const PenaltyPolicy& policy = {}, int threads = 0);

}  // namespace ggmc
