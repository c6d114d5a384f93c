#include "ggmc/oracles.hpp"

#include <cmath>

#include "ggmc/errors.hpp"
#include "ggmc/linalg.hpp"
#include "ggmc/normal.hpp"
#include "ggmc/rng.hpp"

namespace ggmc {

DeltaMatrix DeltaMatrix::from_model(const GraphModel& model) {
  DeltaMatrix d;
  d.k = model.k;
  d.delta.resize(model.k, model.k);
  for (int i = 0; i < model.k; ++i) {
    d.delta(i, i) = 1.0 / model.omega(i, i);
    for (int j = i + 1; j < model.k; ++j) {
      const double v =
          model.omega(i, j) / (model.omega(i, i) * model.omega(j, j));
      d.delta(i, j) = d.delta(j, i) = v;
    }
  }
  return d;
}

double isserlis_cov(const DeltaMatrix& d, Pair ab, Pair cd) {
  const auto& m = d.delta;
  return m(ab.first, cd.first) * m(ab.second, cd.second) +
         m(ab.first, cd.second) * m(cd.first, ab.second);
}

double isserlis_corr(const DeltaMatrix& d, Pair ab, Pair cd) {
  const double num = isserlis_cov(d, ab, cd);
  return num / std::sqrt(isserlis_cov(d, ab, ab) * isserlis_cov(d, cd, cd));
}

MehlerResult mehler_indicator_cov(double rho, double x, int n_terms) {
  if (!(std::abs(rho) < 1.0))
    throw InvalidRho("mehler_indicator_cov: need |rho| < 1");
  if (n_terms < 1)
    throw InvalidSpec("mehler_indicator_cov: need n_terms >= 1");

  // sum_{m>=1} rho^m/m! * (H_{m-1}(x) phi(x))^2, probabilists' Hermite
  // three-term recurrence H_{m+1} = x H_m - m H_{m-1}.
  const double phix = norm_pdf(x);
  double h_mm1 = 1.0;  // H_{m-1}, starts at H_0
  double h_m = x;      // H_m, starts at H_1
  double coeff = 1.0;  // rho^m / m!
  double sum = 0.0;
  for (int m = 1; m <= n_terms; ++m) {
    coeff *= rho / static_cast<double>(m);
    sum += coeff * h_mm1 * h_mm1 * phix * phix;
    const double h_next = x * h_m - static_cast<double>(m) * h_mm1;
    h_mm1 = h_m;
    h_m = h_next;
  }
  MehlerResult out;
  out.value = sum;
  out.terms = n_terms;
  const double a = std::abs(rho);
  out.tail_bound = std::pow(a, n_terms + 1) / (1.0 - a);
  return out;
}

double mehler_bound(double rho) {
  const double a = std::abs(rho);
  if (!(a < 1.0)) throw InvalidRho("mehler_bound: need |rho| < 1");
  return a / (1.0 - a);
}

double alt_pvalue_cdf(double a, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidLambda("alt_pvalue_cdf: lambda must lie in (0, 1)");
  const double z = norm_quantile(1.0 - 0.5 * lambda);
  return 1.0 - norm_cdf(z - a) + norm_cdf(-z - a);
}

BandedDecayReport banded_decay_report(const Matrix& sigma, int m) {
  const int k = static_cast<int>(sigma.rows());
  if (m < 0) throw InvalidSpec("banded_decay_report: m must be >= 0");
  for (int i = 0; i < k; ++i)
    for (int j = i + m + 1; j < k; ++j)
      if (sigma(i, j) != 0.0)
        throw NotBanded("sigma has support beyond band " + std::to_string(m));

  BandedDecayReport rep;
  rep.k = k;
  rep.m = m;
  rep.cond = condition_number(sigma);
  const double sq = std::sqrt(rep.cond);
  rep.r = std::pow((sq - 1.0) / (sq + 1.0), 2);

  const Matrix omega = invert_spd(sigma);
  rep.sum_abs_omega = omega.cwiseAbs().sum();
  rep.per_k = rep.sum_abs_omega / static_cast<double>(k);
  double c = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const double decay =
          (m == 0) ? (i == j ? 1.0 : 0.0)
                   : std::pow(rep.r, std::abs(i - j) / static_cast<double>(m));
      if (decay > 0.0) c = std::max(c, std::abs(omega(i, j)) / decay);
    }
  rep.c_fit = c;
  return rep;
}

BandedDecayReport banded_decay_report(const GraphModel& model, int m) {
  return banded_decay_report(model.sigma, m);
}

GraphModel tridiagonal_sigma_model(int k, double off) {
  if (k < 2) throw InvalidSpec("tridiagonal_sigma_model: k must be >= 2");
  if (!(std::abs(off) < 0.5))
    throw InvalidSpec("tridiagonal_sigma_model: need |off| < 0.5 for SPD");
  GraphModel m;
  m.k = k;
  m.design = DesignTag::Band;
  m.sigma = Matrix::Identity(k, k);
  for (int i = 0; i + 1 < k; ++i)
    m.sigma(i, i + 1) = m.sigma(i + 1, i) = off;
  m.omega = invert_spd(m.sigma);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(m.omega(i, j)) > 1e-12) m.edges.emplace_back(i, j);
  m.pi0_true = 1.0 - static_cast<double>(m.edges.size()) /
                         static_cast<double>(pair_count(k));
  m.pi0_nominal = m.pi0_true;
  m.c0_bound =
      std::max(m.sigma.diagonal().maxCoeff(), m.omega.diagonal().maxCoeff());
  return m;
}

Matrix oracle_residuals(const GraphModel& model, const Matrix& X) {
  const int k = model.k;
  Matrix beta(k, k);  // beta(j, i): coefficient of X_j in the fit for i
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      beta(j, i) = (i == j) ? 0.0 : -model.omega(i, j) / model.omega(i, i);
  return X - X * beta;
}

Matrix b_correction(const GraphModel& model, const Matrix& eps_true) {
  const int k = model.k;
  const double n = static_cast<double>(eps_true.rows());
  const RowVector mean = eps_true.colwise().mean();
  const Matrix centered = eps_true.rowwise() - mean;
  const Vector shat = (centered.array().square().colwise().sum() / n).matrix();

  Matrix b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      b(i, j) = model.omega(i, i) * shat[i] + model.omega(j, j) * shat[j] - 1.0;
  return b;
}

McCov mc_u_cov(const GraphModel& model, Pair ab, Pair cd, int n, int reps,
               std::uint64_t seed) {
  if (reps < 10000) throw InvalidSpec("mc_u_cov: reps must be >= 10^4");
  const DeltaMatrix d = DeltaMatrix::from_model(model);
  const Matrix L = cholesky(d.delta).L;
  const int k = model.k;

  const double mean_ab = d.delta(ab.first, ab.second);
  const double mean_cd = d.delta(cd.first, cd.second);

  double sum1 = 0.0, sum2 = 0.0, sum12 = 0.0, sum11 = 0.0, sum22 = 0.0;
  Rng rng(seed);
  Vector z(k);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (int repi = 0; repi < reps; ++repi) {
    double u1 = 0.0, u2 = 0.0;
    for (int l = 0; l < n; ++l) {
      for (int c = 0; c < k; ++c) z[c] = rng.normal();
      const Vector eps = L * z;
      u1 += eps[ab.first] * eps[ab.second] - mean_ab;
      u2 += eps[cd.first] * eps[cd.second] - mean_cd;
    }
    u1 /= sqrt_n;
    u2 /= sqrt_n;
    sum1 += u1;
    sum2 += u2;
    sum12 += u1 * u2;
    sum11 += u1 * u1;
    sum22 += u2 * u2;
  }
  const double R = static_cast<double>(reps);
  const double m1 = sum1 / R, m2 = sum2 / R;
  McCov out;
  out.reps = reps;
  out.estimate = sum12 / R - m1 * m2;
  // SE of a sample covariance via the delta method on product moments.
  const double var1 = sum11 / R - m1 * m1;
  const double var2 = sum22 / R - m2 * m2;
  out.se = std::sqrt((var1 * var2 + out.estimate * out.estimate) / R);
  return out;
}

double theorem1_mean_shift(const DeltaMatrix& d, int i, int j, int n) {
  return std::sqrt(static_cast<double>(n)) * std::abs(d.delta(i, j)) /
         std::sqrt(d.delta(i, i) * d.delta(j, j));
}

double average_pvalue_cdf(const GraphModel& model, int n, double lambda) {
  const DeltaMatrix d = DeltaMatrix::from_model(model);
  const double N = static_cast<double>(pair_count(model.k));
  const double n0 = N - static_cast<double>(model.edges.size());
  double alt = 0.0;
  for (const auto& [i, j] : model.edges)
    alt += alt_pvalue_cdf(theorem1_mean_shift(d, i, j, n), lambda);
  return (n0 * lambda + alt) / N;
}

}  // namespace ggmc
