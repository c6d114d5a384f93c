#include "ggmc/gfc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ggmc/errors.hpp"
#include "ggmc/normal.hpp"
#include "ggmc/parallel.hpp"
#include "ggmc/sampler.hpp"

namespace ggmc {

ResidualSet residuals(const Matrix& X, const std::vector<NodewiseFit>& fits) {
  const auto n = X.rows();
  const auto k = X.cols();
  if (static_cast<Eigen::Index>(fits.size()) != k)
    throw InvalidSpec("residuals: fits must cover all k nodes");

  const Matrix Xc = center(X).values;
  ResidualSet res;
  res.eps.resize(n, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const NodewiseFit& fit = fits[i];
    Vector predicted = Vector::Zero(n);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const double b = coef_of(fit, static_cast<int>(j));
      if (b != 0.0) predicted.noalias() += Xc.col(j) * b;
    }
    res.eps.col(i) = Xc.col(i) - predicted;
  }
  res.r = res.eps.transpose() * res.eps / static_cast<double>(n);

  for (Eigen::Index i = 0; i < k; ++i) {
    const double var_x = Xc.col(i).squaredNorm() / static_cast<double>(n);
    if (res.r(i, i) <= 1e-12 * var_x)
      throw DegenerateResidual("residual variance vanished at column " +
                               std::to_string(i));
  }
  return res;
}

TestResults t_statistics(const ResidualSet& res,
                         const std::vector<NodewiseFit>& fits, int threads) {
  const int k = res.k();
  const int n = res.n();
  TestResults out;
  out.k = k;
  out.n = n;
  const std::int64_t npairs = pair_count(k);
  out.t1.resize(npairs);
  out.t.resize(npairs);
  out.p.resize(npairs);

  const Matrix& r = res.r;
  parallel_for(
      npairs,
      [&](std::int64_t idx) {
        const auto [i, j] = pair_from_index(k, idx);
        const double t1 = r(i, j) + r(i, i) * coef_of(fits[j], i) +
                          r(j, j) * coef_of(fits[i], j);
        const double t =
            std::sqrt(static_cast<double>(n) / (r(i, i) * r(j, j))) * t1;
        out.t1[idx] = t1;
        out.t[idx] = t;
        out.p[idx] = two_sided_tail(t);
      },
      threads);
  return out;
}

FdrResult fdr_threshold(const TestResults& tr, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidSpec("fdr_threshold: alpha must lie in (0, 1)");
  const std::int64_t npairs = tr.npairs();
  const double t_max = 2.0 * std::sqrt(std::log(static_cast<double>(tr.k)));

  std::vector<double> abs_t(npairs);
  for (std::int64_t m = 0; m < npairs; ++m) abs_t[m] = std::abs(tr.t[m]);
  std::vector<double> sorted(abs_t);
  std::sort(sorted.begin(), sorted.end());

  // The rejection count is piecewise constant between consecutive distinct
  // |T| values and G is continuous decreasing, so the criterion decreases
  // within each piece and can only jump up at a breakpoint. Walk the pieces
  // in order; within a piece the earliest admissible t is either the piece
  // start or the exact crossing G(t) = alpha * max(1,R) / N.
  FdrResult out;
  out.alpha = alpha;

  double found = -1.0;
  std::size_t m = 0;  // number of sorted values <= current piece start
  double start = 0.0;
  while (start <= t_max) {
    while (m < sorted.size() && sorted[m] <= start) ++m;
    const std::int64_t reject = static_cast<std::int64_t>(sorted.size() - m);
    const double g_target =
        alpha * static_cast<double>(std::max<std::int64_t>(1, reject)) /
        static_cast<double>(npairs);
    const double piece_end =
        (m < sorted.size()) ? sorted[m] : std::numeric_limits<double>::infinity();
    if (two_sided_tail(start) <= g_target) {
      found = start;
      break;
    }
    // G(t) = g_target at t = Phi^{-1}(1 - g_target/2).
    const double cross = (g_target >= 1.0)
                             ? 0.0
                             : norm_quantile(1.0 - 0.5 * g_target);
    if (cross >= start && cross < piece_end && cross <= t_max) {
      found = cross;
      break;
    }
    if (piece_end > t_max || m >= sorted.size()) break;
    start = piece_end;
  }

  if (found >= 0.0) {
    out.t_hat = found;
    out.infimum_found = true;
  } else {
    out.t_hat = t_max;
    out.infimum_found = false;
  }
  for (std::int64_t idx = 0; idx < npairs; ++idx)
    if (abs_t[idx] > out.t_hat) out.rejected.push_back(idx);
  return out;
}

GfcResult run_gfc(const Matrix& X, RegMethod method,
                  const PenaltyPolicy& policy, double alpha, int threads) {
  if (X.rows() < 10 || X.cols() < 3)
    throw InvalidSpec("run_gfc: need n >= 10 and k >= 3");
  GfcResult out;
  out.fits = fit_all_nodes(X, method, policy, threads);
  out.residuals = residuals(X, out.fits.fits);
  out.tests = t_statistics(out.residuals, out.fits.fits, threads);
  out.fdr = fdr_threshold(out.tests, alpha);
  return out;
}

}  // namespace ggmc
