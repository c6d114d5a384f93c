#include "ggmc/pi0.hpp"

#include <algorithm>
#include <cmath>

#include "ggmc/errors.hpp"
#include "ggmc/parallel.hpp"
#include "ggmc/rng.hpp"
#include "ggmc/spline.hpp"

namespace ggmc {

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.size() < 4)
    throw GridTooSmall("lambda grid needs at least 4 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0 || grid[i] > 0.95 + 1e-12)
      throw GridTooSmall("lambda grid must stay inside [0, 0.95]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw GridTooSmall("lambda grid must be strictly increasing");
  }
}

// W(lambda) over a sorted copy of the p-values.
std::vector<std::int64_t> tail_counts(const std::vector<double>& sorted_p,
                                      const std::vector<double>& grid) {
  std::vector<std::int64_t> W(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto it =
        std::upper_bound(sorted_p.begin(), sorted_p.end(), grid[g]);
    W[g] = static_cast<std::int64_t>(sorted_p.end() - it);
  }
  return W;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

std::string to_string(Pi0Method m) {
  switch (m) {
    case Pi0Method::FixedLambda: return "fixed";
    case Pi0Method::Smoother: return "smoother";
    case Pi0Method::Bootstrap: return "bootstrap";
  }
  return "unknown";
}

double storey_pi0(const std::vector<double>& pvalues, double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw InvalidLambda("storey_pi0: lambda must lie in [0, 1)");
  if (pvalues.empty()) throw InvalidSpec("storey_pi0: no p-values");
  std::int64_t W = 0;
  for (double p : pvalues)
    if (p > lambda) ++W;
  return static_cast<double>(W) /
         (static_cast<double>(pvalues.size()) * (1.0 - lambda));
}

std::vector<double> lambda_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo >= 0.0) || !(hi > lo))
    throw GridTooSmall("lambda_grid: need 0 <= lo < hi and step > 0");
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) {
    double v = lo + i * step;
    if (std::abs(v - hi) < step * 1e-9) v = hi;  // snap the float tail
    grid.push_back(v);
  }
  return grid;
}

Pi0Curve pi0_curve(const std::vector<double>& pvalues,
                   const std::vector<double>& grid) {
  validate_grid(grid);
  if (pvalues.empty()) throw InvalidSpec("pi0_curve: no p-values");
  std::vector<double> sorted_p(pvalues);
  std::sort(sorted_p.begin(), sorted_p.end());

  Pi0Curve curve;
  curve.lambda = grid;
  curve.n_pvalues = static_cast<std::int64_t>(pvalues.size());
  curve.tail_counts = tail_counts(sorted_p, grid);
  curve.pi0.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    curve.pi0[g] = static_cast<double>(curve.tail_counts[g]) /
                   (static_cast<double>(curve.n_pvalues) * (1.0 - grid[g]));
  return curve;
}

Pi0Estimate smoother_pi0(const std::vector<double>& pvalues,
                         const std::vector<double>& grid, int spline_dof) {
  Pi0Estimate est;
  est.method = Pi0Method::Smoother;
  est.spline_dof = spline_dof;
  est.curve = pi0_curve(pvalues, grid);
  const auto spline = SmoothingSpline::fit_edf(
      grid, est.curve.pi0, static_cast<double>(spline_dof));
  est.spline_fit = spline.fitted;
  est.pi0_hat = clamp01(spline.fitted.back());
  return est;
}

Pi0Estimate bootstrap_pi0(const std::vector<double>& pvalues,
                          const std::vector<double>& grid, int B,
                          std::uint64_t seed, int threads) {
  if (B < 10) throw InvalidSpec("bootstrap_pi0: B must be >= 10");
  Pi0Estimate est;
  est.method = Pi0Method::Bootstrap;
  est.B = B;
  est.seed = seed;
  est.curve = pi0_curve(pvalues, grid);

  est.plug_in =
      *std::min_element(est.curve.pi0.begin(), est.curve.pi0.end());

  const std::int64_t N = est.curve.n_pvalues;
  const std::size_t G = grid.size();
  // One resample per replicate; replicates are independent streams merged
  // by index, so the result does not depend on the thread schedule.
  std::vector<std::vector<double>> boot_pi0(B);
  parallel_for(
      B,
      [&](std::int64_t b) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
        std::vector<double> resampled(N);
        for (std::int64_t i = 0; i < N; ++i)
          resampled[i] = pvalues[rng.below(static_cast<std::uint64_t>(N))];
        std::sort(resampled.begin(), resampled.end());
        const auto W = tail_counts(resampled, grid);
        auto& row = boot_pi0[b];
        row.resize(G);
        for (std::size_t g = 0; g < G; ++g)
          row[g] = static_cast<double>(W[g]) /
                   (static_cast<double>(N) * (1.0 - grid[g]));
      },
      threads);

  est.mse.assign(G, 0.0);
  for (int b = 0; b < B; ++b)
    for (std::size_t g = 0; g < G; ++g) {
      const double d = boot_pi0[b][g] - est.plug_in;
      est.mse[g] += d * d;
    }
  for (auto& v : est.mse) v /= static_cast<double>(B);

  std::size_t best = 0;
  for (std::size_t g = 1; g < G; ++g)
    if (est.mse[g] < est.mse[best]) best = g;  // ties keep the smaller lambda
  est.selected_lambda = grid[best];
  est.pi0_hat = clamp01(est.curve.pi0[best]);
  return est;
}

Ecdf::Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw InvalidSpec("Ecdf: no values");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double ks_distance(const Ecdf& ecdf,
                   const std::function<double(double)>& cdf) {
  const auto& xs = ecdf.sorted();
  const double n = static_cast<double>(xs.size());
  double dist = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[i]) ++j;
    const double F = cdf(xs[i]);
    dist = std::max(dist, static_cast<double>(j + 1) / n - F);  // above jump
    dist = std::max(dist, F - static_cast<double>(i) / n);      // below jump
    i = j + 1;
  }
  return dist;
}

}  // namespace ggmc
