#include "ggmc/spline.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "ggmc/errors.hpp"
#include "ggmc/types.hpp"

namespace ggmc {

namespace {

// Penalty K = Delta' W^{-1} Delta (Green & Silverman 1994, ch. 2) for knots
// x_1 < ... < x_m.
Matrix penalty_matrix(const std::vector<double>& x) {
  const int m = static_cast<int>(x.size());
  Matrix delta = Matrix::Zero(m - 2, m);
  Matrix W = Matrix::Zero(m - 2, m - 2);
  for (int i = 0; i < m - 2; ++i) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    delta(i, i) = 1.0 / h0;
    delta(i, i + 1) = -1.0 / h0 - 1.0 / h1;
    delta(i, i + 2) = 1.0 / h1;
    W(i, i) = (h0 + h1) / 3.0;
    if (i + 1 < m - 2) W(i, i + 1) = W(i + 1, i) = h1 / 6.0;
  }
  return delta.transpose() * W.ldlt().solve(delta);
}

double edf_of(const Matrix& K, double mu, Matrix* smoother = nullptr) {
  const auto m = K.rows();
  Matrix A = Matrix::Identity(m, m) + mu * K;
  Matrix inv = A.ldlt().solve(Matrix::Identity(m, m));
  if (smoother) *smoother = inv;
  return inv.trace();
}

}  // namespace

SmoothingSpline SmoothingSpline::fit_edf(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         double target_edf) {
  const int m = static_cast<int>(x.size());
  if (m < 4 || y.size() != x.size())
    throw GridTooSmall("smoothing spline: need >= 4 knots");
  for (int i = 1; i < m; ++i)
    if (!(x[i] > x[i - 1]))
      throw InvalidSpec("smoothing spline: knots must be strictly increasing");
  if (!(target_edf > 2.0 && target_edf < m))
    throw InvalidSpec("smoothing spline: target edf must lie in (2, m)");

  const Matrix K = penalty_matrix(x);

  // edf is monotone decreasing in mu; bisect on log10(mu).
  double lo = -12.0, hi = 14.0;
  double mu = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    mu = std::pow(10.0, mid);
    const double edf = edf_of(K, mu);
    if (edf > target_edf)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12) break;
  }

  SmoothingSpline out;
  out.x = x;
  out.mu = mu;
  Matrix smoother;
  out.edf = edf_of(K, mu, &smoother);
  Vector yv = Eigen::Map<const Vector>(y.data(), m);
  Vector f = smoother * yv;
  out.fitted.assign(f.data(), f.data() + m);
  return out;
}

}  // namespace ggmc
