#pragma once

#include <cstdint>
#include <string>

#include "ggmc/models.hpp"
#include "ggmc/types.hpp"

namespace ggmc {

struct SampleMatrix {
  Matrix values;  // n x k, rows are observations
  std::uint64_t seed = 0;
  std::string model_tag;

  int n() const { return static_cast<int>(values.rows()); }
  int k() const { return static_cast<int>(values.cols()); }
};

// n i.i.d. draws from N(0, Sigma), generated as L z with L the Cholesky
// factor of Sigma and z standard normal via the inverse-CDF transform.
// Bit-identical for identical (model, n, seed).
SampleMatrix sample_mvn(const GraphModel& model, int n, std::uint64_t seed);

struct Centered {
  Matrix values;
  RowVector means;
};

Centered center(const Matrix& X);

}  // namespace ggmc
