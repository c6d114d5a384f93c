#include "ggmc/sampler.hpp"

#include "ggmc/errors.hpp"
#include "ggmc/linalg.hpp"
#include "ggmc/rng.hpp"

namespace ggmc {

SampleMatrix sample_mvn(const GraphModel& model, int n, std::uint64_t seed) {
  if (n < 2) throw InvalidSpec("sample_mvn: n must be >= 2");
  const int k = model.k;
  const Matrix L = cholesky(model.sigma).L;

  SampleMatrix out;
  out.seed = seed;
  out.model_tag = to_string(model.design);
  out.values.resize(n, k);

  Rng rng(seed);
  Vector z(k);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < k; ++col) z[col] = rng.normal();
    out.values.row(row) = (L * z).transpose();
  }
  return out;
}

Centered center(const Matrix& X) {
  Centered c;
  c.means = X.colwise().mean();
  c.values = X.rowwise() - c.means;
  return c;
}

}  // namespace ggmc
