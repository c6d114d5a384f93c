#pragma once

#include <vector>

namespace ggmc {

// Natural cubic smoothing spline fitted at its knots (Reinsch form):
// minimize ||y - f||^2 + mu * integral f''^2, giving f = (I + mu K)^{-1} y
// with K the usual second-difference/Gram penalty. The smoothing level is
// chosen so the effective degrees of freedom tr((I + mu K)^{-1}) match a
// target; edf decreases monotonically from m (interpolation) to 2 (the
// least-squares line).
struct SmoothingSpline {
  std::vector<double> x;
  std::vector<double> fitted;
  double edf = 0.0;
  double mu = 0.0;

  static SmoothingSpline fit_edf(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double target_edf);
};

}  // namespace ggmc
