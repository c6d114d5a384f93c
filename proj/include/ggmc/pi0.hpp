#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ggmc/types.hpp"

// Schweder-Spjotvoll tail-count estimation of the proportion of true nulls:
// pi0(lambda) = #{p > lambda} / (N (1 - lambda)), with the tuning parameter
// chosen either by a cubic smoothing spline over the curve (estimate taken
// at the right end of the grid) or by bootstrap MSE minimization against the
// plug-in min over the grid.

namespace ggmc {

enum class Pi0Method { FixedLambda, Smoother, Bootstrap };

std::string to_string(Pi0Method m);

// Raw curve value at one lambda; unclamped. Throws InvalidLambda unless
// 0 <= lambda < 1.
double storey_pi0(const std::vector<double>& pvalues, double lambda);

// Default grid {0, 0.01, ..., 0.95}.
std::vector<double> lambda_grid(double lo = 0.0, double hi = 0.95,
                                double step = 0.01);

struct Pi0Curve {
  std::vector<double> lambda;
  std::vector<std::int64_t> tail_counts;  // W(lambda) = #{p > lambda}
  std::vector<double> pi0;                // W / (N (1 - lambda)), unclamped
  std::int64_t n_pvalues = 0;
};

Pi0Curve pi0_curve(const std::vector<double>& pvalues,
                   const std::vector<double>& grid);

struct Pi0Estimate {
  Pi0Method method = Pi0Method::Smoother;
  Pi0Curve curve;
  double pi0_hat = 1.0;           // final estimate, clamped to [0, 1]
  double selected_lambda = -1.0;  // Bootstrap only
  int spline_dof = 3;             // Smoother only
  int B = 0;                      // Bootstrap only
  std::uint64_t seed = 0;         // Bootstrap only
  std::vector<double> spline_fit;  // Smoother: fitted curve on the grid
  std::vector<double> mse;         // Bootstrap: MSE per grid lambda
  double plug_in = 0.0;            // Bootstrap: min_lambda pi0(lambda)
};

// Cubic smoothing spline through (lambda, pi0(lambda)) at the given
// effective degrees of freedom; final estimate is the fit at max(grid),
// clamped into [0, 1].
Pi0Estimate smoother_pi0(const std::vector<double>& pvalues,
                         const std::vector<double>& grid, int spline_dof = 3);

// Storey's bootstrap selection: lambda* minimizes the bootstrap MSE around
// the plug-in min of the curve (ties to the smallest lambda); estimate is
// min{1, pi0(lambda*)}. Deterministic given the seed; replicate b uses the
// derived stream (seed, b).
Pi0Estimate bootstrap_pi0(const std::vector<double>& pvalues,
                          const std::vector<double>& grid, int B,
                          std::uint64_t seed, int threads = 0);

// Diagnostic alias: the raw curve (Corollary-style upward-bias checks).
inline Pi0Curve pi0_bias_curve(const std::vector<double>& pvalues,
                               const std::vector<double>& grid) {
  return pi0_curve(pvalues, grid);
}

// Right-continuous ECDF.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values);
  double operator()(double x) const;
  const std::vector<double>& sorted() const { return sorted_; }
  std::int64_t size() const { return static_cast<std::int64_t>(sorted_.size()); }

 private:
  std::vector<double> sorted_;
};

// sup_x |F_N(x) - F(x)| for a continuous reference CDF, evaluated from both
// sides of every jump.
double ks_distance(const Ecdf& ecdf, const std::function<double(double)>& cdf);

}  // namespace ggmc
