#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

namespace ggmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Number of unordered pairs (i,j), i < j, among k variables.
inline std::int64_t pair_count(int k) {
  return static_cast<std::int64_t>(k) * (k - 1) / 2;
}

// Flat index of the pair (i,j), 0 <= i < j < k, in row-major upper-triangular
// order: (0,1),(0,2),...,(0,k-1),(1,2),...
inline std::int64_t pair_index(int k, int i, int j) {
  return static_cast<std::int64_t>(i) * (2 * k - i - 1) / 2 + (j - i - 1);
}

// Inverse of pair_index.
inline std::pair<int, int> pair_from_index(int k, std::int64_t idx) {
  int i = 0;
  std::int64_t row_len = k - 1;
  while (idx >= row_len) {
    idx -= row_len;
    --row_len;
    ++i;
  }
  return {i, static_cast<int>(i + 1 + idx)};
}

}  // namespace ggmc
