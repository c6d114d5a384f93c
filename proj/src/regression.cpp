#include "ggmc/regression.hpp"

#include <cassert>
#include <cmath>

#include "ggmc/errors.hpp"
#include "ggmc/parallel.hpp"
#include "ggmc/sampler.hpp"

namespace ggmc {

namespace {

double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

double objective(const Matrix& D, const Vector& y, const Vector& beta,
                 double lambda) {
  const double n = static_cast<double>(D.rows());
  return (y - D * beta).squaredNorm() / (2.0 * n) +
         lambda * beta.template lpNorm<1>();
}

}  // namespace

NodewiseFit lasso(const Matrix& design, const Vector& y, double lambda,
                  const LassoOptions& opts) {
  const auto n = design.rows();
  const auto p = design.cols();
  if (lambda < 0.0) throw InvalidSpec("lasso: lambda must be >= 0");

  NodewiseFit fit;
  fit.method = RegMethod::Lasso;
  fit.lambda_used = lambda;
  fit.beta = Vector::Zero(p);

  // Column scales (1/n); zero-variance columns stay at beta_j = 0.
  Vector col_scale(p);
  for (Eigen::Index j = 0; j < p; ++j)
    col_scale[j] = design.col(j).squaredNorm() / static_cast<double>(n);

  Vector residual = y;
#ifndef NDEBUG
  double prev_obj = objective(design, y, fit.beta, lambda);
#endif
  if (opts.objective_path)
    opts.objective_path->assign(1, objective(design, y, fit.beta, lambda));

  int sweep = 0;
  for (; sweep < opts.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_scale[j] <= 0.0) continue;
      const double old = fit.beta[j];
      const double z =
          design.col(j).dot(residual) / static_cast<double>(n) +
          col_scale[j] * old;
      const double updated = soft_threshold(z, lambda) / col_scale[j];
      const double delta = updated - old;
      if (delta != 0.0) {
        residual.noalias() -= design.col(j) * delta;
        fit.beta[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
#ifndef NDEBUG
    {
      const double obj = objective(design, y, fit.beta, lambda);
      assert(obj <= prev_obj + 1e-10 * (1.0 + std::abs(prev_obj)));
      prev_obj = obj;
    }
#endif
    if (opts.objective_path)
      opts.objective_path->push_back(objective(design, y, fit.beta, lambda));
    if (max_change < opts.tol) {
      fit.kkt = kkt_violation(design, y, lambda, fit.beta);
      if (fit.kkt <= opts.kkt_tol) {
        fit.converged = true;
        ++sweep;
        break;
      }
      // Coefficient motion stalled before optimality; keep sweeping.
    }
  }
  fit.iterations = sweep;
  if (!fit.converged) fit.kkt = kkt_violation(design, y, lambda, fit.beta);
  return fit;
}

NodewiseFit scaled_lasso(const Matrix& design, const Vector& y, double lambda0,
                         const ScaledLassoOptions& opts) {
  const auto n = design.rows();
  if (lambda0 < 0.0) throw InvalidSpec("scaled_lasso: lambda0 must be >= 0");

  const double sd_y = std::sqrt(
      (y.array() - y.mean()).matrix().squaredNorm() / static_cast<double>(n));
  double sigma = sd_y;
  if (sigma <= 0.0)
    throw DegenerateScale("scaled_lasso: response has zero variance");

  NodewiseFit fit;
  int total_sweeps = 0;
  bool scale_converged = false;
  for (int it = 0; it < opts.max_scale_iter; ++it) {
    LassoOptions inner = opts.inner;
    inner.objective_path = nullptr;
    NodewiseFit step = lasso(design, y, sigma * lambda0, inner);
    total_sweeps += step.iterations;
    const double rss = (y - design * step.beta).squaredNorm();
    const double sigma_new = std::sqrt(rss / static_cast<double>(n));
    fit = step;
    if (sigma_new < 1e-12 * sd_y)
      throw DegenerateScale("scaled_lasso: noise scale collapsed to zero");
    const bool done = std::abs(sigma_new - sigma) < opts.scale_tol * sigma;
    sigma = sigma_new;
    if (done) {
      scale_converged = true;
      break;
    }
  }
  fit.method = RegMethod::ScaledLasso;
  fit.sigma_hat = sigma;
  fit.lambda_used = sigma * lambda0;
  fit.iterations = total_sweeps;
  fit.converged = fit.converged && scale_converged;
  return fit;
}

double kkt_violation(const Matrix& design, const Vector& y, double lambda,
                     const Vector& beta) {
  const double n = static_cast<double>(design.rows());
  const Vector grad = design.transpose() * (y - design * beta) / n;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) {
      worst = std::max(worst,
                       std::abs(grad[j] - lambda * (beta[j] > 0 ? 1. : -1.)));
    } else {
      worst = std::max(worst, std::abs(grad[j]) - lambda);
    }
  }
  return std::max(worst, 0.0);
}

FitReport fit_all_nodes(const Matrix& X, RegMethod method,
                        const PenaltyPolicy& policy, int threads) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (k < 3) throw InvalidSpec("fit_all_nodes: need k >= 3 columns");

  const Matrix Xc = center(X).values;
  const double universal =
      policy.kappa * std::sqrt(2.0 * std::log(static_cast<double>(k)) /
                               static_cast<double>(n));

  FitReport report;
  report.fits.resize(k);
  parallel_for(
      k,
      [&](std::int64_t i) {
        Matrix D(n, k - 1);
        Eigen::Index at = 0;
        for (Eigen::Index j = 0; j < k; ++j)
          if (j != i) D.col(at++) = Xc.col(j);
        const Vector y = Xc.col(i);

        NodewiseFit fit;
        if (method == RegMethod::Lasso) {
          const double sd_y =
              std::sqrt(y.squaredNorm() / static_cast<double>(n));
          fit = lasso(D, y, sd_y * universal);
        } else {
          fit = scaled_lasso(D, y, universal);
        }
        fit.node = static_cast<int>(i);
        report.fits[i] = std::move(fit);
      },
      threads);

  for (int i = 0; i < k; ++i)
    if (!report.fits[i].converged) report.unconverged_nodes.push_back(i);
  return report;
}

}  // namespace ggmc
