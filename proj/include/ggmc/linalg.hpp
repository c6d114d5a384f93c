#pragma once

#include "ggmc/errors.hpp"
#include "ggmc/types.hpp"

// Dense symmetric kernels behind the model generators, the sampler and the
// oracles. Everything is O(k^3) Eigen; band/block structure is exploited by
// the generators, not here.

namespace ggmc {

// Jitter escalation for barely-indefinite inputs. `none` demands a strictly
// positive definite matrix; `additive(max_tries)` retries with
// 1e-10 * trace(S)/k added to the diagonal, growing tenfold per attempt.
struct JitterPolicy {
  enum class Kind { None, Additive };
  Kind kind = Kind::None;
  int max_tries = 0;

  static JitterPolicy none() { return {}; }
  static JitterPolicy additive(int max_tries = 8) {
    return {Kind::Additive, max_tries};
  }
};

struct CholeskyResult {
  Matrix L;             // lower triangular, positive diagonal
  double jitter = 0.0;  // total amount added to the diagonal
  int tries = 0;        // escalations used (0 = factored as given)
};

// Lower Cholesky factor of S (+ any reported jitter). Throws
// NotPositiveDefinite when the factorization fails under the policy.
CholeskyResult cholesky(const Matrix& S,
                        const JitterPolicy& policy = JitterPolicy::none());

// Inverse of an SPD matrix via Cholesky solves, symmetrized on return.
Matrix invert_spd(const Matrix& S);

// lambda_max / lambda_min from a symmetric eigendecomposition; throws
// NotPositiveDefinite when lambda_min <= 0.
double condition_number(const Matrix& S);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& S);

inline bool is_symmetric(const Matrix& S, double tol = 0.0) {
  return S.rows() == S.cols() &&
         (S - S.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ggmc
