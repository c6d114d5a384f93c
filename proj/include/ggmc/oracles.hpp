#pragma once

#include <cstdint>
#include <utility>

#include "ggmc/models.hpp"
#include "ggmc/types.hpp"

// Closed-form quantities used as independent ground truth in tests and the
// `oracle` CLI report: the residual-covariance matrix delta, the Isserlis
// covariance of the U statistics, the Mehler series for indicator
// covariances, the two-sided p-value CDF under a mean shift, and the Demko
// decay bound for inverses of banded matrices.

namespace ggmc {

// delta_ij = omega_ij / (omega_ii omega_jj) off the diagonal and
// delta_ii = 1 / omega_ii (the residual variance of node i).
struct DeltaMatrix {
  int k = 0;
  Matrix delta;
  static DeltaMatrix from_model(const GraphModel& model);
};

using Pair = std::pair<int, int>;

// Cov(U_ab, U_cd) = delta_ac delta_bd + delta_ad delta_cb.
double isserlis_cov(const DeltaMatrix& d, Pair ab, Pair cd);

// Correlation form of the above.
double isserlis_corr(const DeltaMatrix& d, Pair ab, Pair cd);

struct MehlerResult {
  double value = 0.0;       // truncated series
  double tail_bound = 0.0;  // |rho|^(terms+1) / (1 - |rho|)
  int terms = 0;
};

// Cov(I{X <= x}, I{Y <= x}) for standard bivariate normals with correlation
// rho, via the Hermite series sum_m rho^m/m! (int_{-inf}^x H_m phi)^2 and
// int_{-inf}^x H_m phi = -H_{m-1}(x) phi(x).
MehlerResult mehler_indicator_cov(double rho, double x, int n_terms = 50);

// The series' uniform bound |cov| <= |rho| / (1 - |rho|).
double mehler_bound(double rho);

// CDF of the two-sided p-value P = 2(1 - Phi(|X|)) for X ~ N(a, 1):
// F(lambda) = 1 - Phi(z - a) + Phi(-z - a), z = Phi^{-1}(1 - lambda/2).
double alt_pvalue_cdf(double a, double lambda);

struct BandedDecayReport {
  int k = 0;
  int m = 0;                  // banding parameter of Sigma
  double sum_abs_omega = 0.0; // sum over all |omega_ij|
  double per_k = 0.0;         // sum_abs_omega / k
  double cond = 0.0;          // condition number of Sigma
  double r = 0.0;             // Demko rate ((sqrt(cond)-1)/(sqrt(cond)+1))^2
  double c_fit = 0.0;         // smallest C with |omega_ij| <= C r^(|i-j|/m)
};

// Throws NotBanded when Sigma has support beyond the stated band.
BandedDecayReport banded_decay_report(const Matrix& sigma, int m);
BandedDecayReport banded_decay_report(const GraphModel& model, int m);

// GraphModel with tridiagonal Sigma (unit diagonal, `off` next to it); the
// banded-covariance family used by the decay checks.
GraphModel tridiagonal_sigma_model(int k, double off);

// b_{n,ij} = omega_ii shat_ii + omega_jj shat_jj - 1 from oracle residuals
// (centered covariance, 1/n); approaches 1 as n grows.
Matrix b_correction(const GraphModel& model, const Matrix& eps_true);

// Residuals of each coordinate on the rest using the true coefficients
// -omega_ij/omega_ii; feeds b_correction.
Matrix oracle_residuals(const GraphModel& model, const Matrix& X);

struct McCov {
  double estimate = 0.0;
  double se = 0.0;
  int reps = 0;
};

// Brute-force Monte Carlo for Cov(U_ab, U_cd): simulates residual vectors
// from N(0, delta) and forms U = (1/sqrt(n)) sum (eps_a eps_b - delta_ab).
McCov mc_u_cov(const GraphModel& model, Pair ab, Pair cd, int n, int reps,
               std::uint64_t seed);

// Implied mean shift of T for an edge under the model: sqrt(n) |delta_ij| /
// sqrt(delta_ii delta_jj).
double theorem1_mean_shift(const DeltaMatrix& d, int i, int j, int n);

// Average p-value CDF of Theorem 1: the null part is uniform, the edge part
// uses alt_pvalue_cdf at each edge's implied mean shift.
double average_pvalue_cdf(const GraphModel& model, int n, double lambda);

}  // namespace ggmc
