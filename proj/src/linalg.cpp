#include "ggmc/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace ggmc {

namespace {

void require_square_symmetric(const Matrix& S, const char* op) {
  if (S.rows() != S.cols() || S.rows() < 1)
    throw InvalidSpec(std::string(op) + ": matrix must be square, dim >= 1");
  const double scale = S.cwiseAbs().maxCoeff();
  if ((S - S.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, scale))
    throw InvalidSpec(std::string(op) + ": matrix is not symmetric");
}

}  // namespace

CholeskyResult cholesky(const Matrix& S, const JitterPolicy& policy) {
  require_square_symmetric(S, "cholesky");
  const auto k = S.rows();

  Eigen::LLT<Matrix> llt(S);
  if (llt.info() == Eigen::Success) {
    // LLT can "succeed" on semidefinite input in edge cases; a non-positive
    // diagonal means the factor is unusable.
    Matrix L = llt.matrixL();
    if (L.diagonal().minCoeff() > 0.0) return {std::move(L), 0.0, 0};
  }

  if (policy.kind == JitterPolicy::Kind::None)
    throw NotPositiveDefinite("cholesky: matrix is not positive definite");

  double jitter = 1e-10 * S.trace() / static_cast<double>(k);
  if (jitter <= 0.0) jitter = 1e-14;
  for (int attempt = 1; attempt <= policy.max_tries; ++attempt) {
    Matrix shifted = S;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> retry(shifted);
    if (retry.info() == Eigen::Success) {
      Matrix L = retry.matrixL();
      if (L.diagonal().minCoeff() > 0.0) return {std::move(L), jitter, attempt};
    }
    jitter *= 10.0;
  }
  throw NotPositiveDefinite(
      "cholesky: not positive definite after " +
      std::to_string(policy.max_tries) + " jitter escalations");
}

Matrix invert_spd(const Matrix& S) {
  require_square_symmetric(S, "invert_spd");
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("invert_spd: matrix is not positive definite");
  Matrix inv = llt.solve(Matrix::Identity(S.rows(), S.cols()));
  inv = ((inv + inv.transpose()) / 2.0).eval();
  return inv;
}

double min_eigenvalue(const Matrix& S) {
  require_square_symmetric(S, "min_eigenvalue");
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double condition_number(const Matrix& S) {
  require_square_symmetric(S, "condition_number");
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0)
    throw NotPositiveDefinite("condition_number: lambda_min <= 0");
  return hi / lo;
}

}  // namespace ggmc
