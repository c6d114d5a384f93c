#include "ggmc/models.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ggmc/errors.hpp"
#include "ggmc/linalg.hpp"
#include "ggmc/rng.hpp"

namespace ggmc {

namespace {

constexpr double kEdgeTol = 1e-12;

std::vector<int> block_sizes(int k, int s) {
  std::vector<int> sizes(k / s, s);
  if (k % s != 0) sizes.push_back(k % s);
  return sizes;
}

void check_block_args(int k, int s, double rho) {
  if (k < 1) throw InvalidSpec("block design: k must be >= 1");
  if (s < 1 || s > k) throw InvalidSpec("block design: need 1 <= s <= k");
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidSpec("block design: rho must lie in (0, 1)");
}

// Reads the edge set off the final Omega and fills the counted/nominal pi0
// and the C1 bound.
void finalize(GraphModel& m, double pi0_nominal) {
  const int k = m.k;
  m.edges.clear();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(m.omega(i, j)) > kEdgeTol) m.edges.emplace_back(i, j);
  const std::int64_t npairs = pair_count(k);
  m.pi0_true = npairs == 0
                   ? 1.0
                   : 1.0 - static_cast<double>(m.edges.size()) /
                               static_cast<double>(npairs);
  m.pi0_nominal = pi0_nominal;
  m.c0_bound =
      std::max(m.sigma.diagonal().maxCoeff(), m.omega.diagonal().maxCoeff());
}

}  // namespace

std::string to_string(DesignTag tag) {
  switch (tag) {
    case DesignTag::BlockAR1: return "block_ar1";
    case DesignTag::BlockEquicorr: return "block_equicorr";
    case DesignTag::Band: return "band";
    case DesignTag::ErdosRenyi: return "erdos_renyi";
  }
  return "unknown";
}

DesignTag design_from_string(const std::string& name) {
  if (name == "block_ar1") return DesignTag::BlockAR1;
  if (name == "block_equicorr") return DesignTag::BlockEquicorr;
  if (name == "band") return DesignTag::Band;
  if (name == "erdos_renyi") return DesignTag::ErdosRenyi;
  throw InvalidSpec("unknown design tag: " + name);
}

bool GraphModel::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

GraphModel block_equicorr(int k, int s, double rho) {
  check_block_args(k, s, rho);
  GraphModel m;
  m.k = k;
  m.design = DesignTag::BlockEquicorr;
  m.sigma = Matrix::Identity(k, k);
  m.omega = Matrix::Identity(k, k);
  int at = 0;
  for (int size : block_sizes(k, s)) {
    if (size > 1) {
      // Equicorrelated block and its closed-form inverse
      // (1/(1-rho)) * (I - rho/(1+(size-1)rho) * J).
      const double a = 1.0 / (1.0 - rho);
      const double b = rho / (1.0 + (size - 1) * rho);
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
          m.sigma(at + i, at + j) = (i == j) ? 1.0 : rho;
          m.omega(at + i, at + j) = (i == j) ? a * (1.0 - b) : -a * b;
        }
    }
    at += size;
  }
  finalize(m, 1.0 - static_cast<double>(s - 1) / (k - 1 > 0 ? k - 1 : 1));
  return m;
}

GraphModel block_ar1(int k, int s, double rho) {
  check_block_args(k, s, rho);
  GraphModel m;
  m.k = k;
  m.design = DesignTag::BlockAR1;
  m.sigma = Matrix::Identity(k, k);
  m.omega = Matrix::Identity(k, k);
  const double denom = 1.0 - rho * rho;
  int at = 0;
  for (int size : block_sizes(k, s)) {
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        m.sigma(at + i, at + j) = std::pow(rho, std::abs(i - j));
    if (size > 1) {
      // Tridiagonal AR(1) precision in closed form.
      for (int i = 0; i < size; ++i) {
        const bool interior = (i > 0 && i < size - 1);
        m.omega(at + i, at + i) = (interior ? 1.0 + rho * rho : 1.0) / denom;
        if (i + 1 < size) {
          m.omega(at + i, at + i + 1) = -rho / denom;
          m.omega(at + i + 1, at + i) = -rho / denom;
        }
      }
    }
    at += size;
  }
  finalize(m, 1.0 - static_cast<double>(s - 1) / (k - 1 > 0 ? k - 1 : 1));
  return m;
}

GraphModel band_precision(int k) {
  if (k < 3) throw InvalidSpec("band_precision: k must be >= 3");
  GraphModel m;
  m.k = k;
  m.design = DesignTag::Band;
  m.omega = Matrix::Identity(k, k);
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k) m.omega(i, i + 1) = m.omega(i + 1, i) = 0.6;
    if (i + 2 < k) m.omega(i, i + 2) = m.omega(i + 2, i) = 0.3;
  }
  m.sigma = invert_spd(m.omega);
  finalize(m, 1.0 - 2.0 / k);
  return m;
}

GraphModel erdos_renyi_precision(int k, double q, double u_lo, double u_hi,
                                 std::uint64_t seed) {
  if (k < 2) throw InvalidSpec("erdos_renyi_precision: k must be >= 2");
  if (!(q > 0.0 && q < 1.0))
    throw InvalidSpec("erdos_renyi_precision: q must lie in (0, 1)");
  if (!(u_lo < u_hi))
    throw InvalidSpec("erdos_renyi_precision: need u_lo < u_hi");

  GraphModel m;
  m.k = k;
  m.design = DesignTag::ErdosRenyi;
  Matrix B = Matrix::Identity(k, k);
  Rng rng(seed);
  // Both draws happen for every pair so the edge pattern for a given seed
  // does not depend on u_range.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const bool present = rng.bernoulli(q);
      const double u = rng.uniform(u_lo, u_hi);
      if (present) B(i, j) = B(j, i) = u;
    }

  // Positive definiteness repair: shift the diagonal past lambda_min, then
  // rescale back to a unit diagonal. Rescaling divides the shift out again,
  // so iterate until lambda_min clears 0.05; the support never changes.
  Matrix omega = B;
  for (int round = 0; round < 64; ++round) {
    const double lam = min_eigenvalue(omega);
    if (lam > 0.05) break;
    omega.diagonal().array() += std::abs(lam) + 0.05;
    const Vector d = omega.diagonal().cwiseSqrt().cwiseInverse();
    omega = (d.asDiagonal() * omega * d.asDiagonal()).eval();
    omega = ((omega + omega.transpose()) / 2.0).eval();
  }
  m.omega = omega;
  m.sigma = invert_spd(m.omega);
  finalize(m, 1.0 - q);
  return m;
}

GraphModel make_model(const ModelSpec& spec) {
  switch (spec.design) {
    case DesignTag::BlockAR1:
      return block_ar1(spec.k, spec.block_size, spec.rho);
    case DesignTag::BlockEquicorr:
      return block_equicorr(spec.k, spec.block_size, spec.rho);
    case DesignTag::Band:
      return band_precision(spec.k);
    case DesignTag::ErdosRenyi:
      return erdos_renyi_precision(spec.k, spec.q, spec.u_lo, spec.u_hi,
                                   spec.seed);
  }
  throw InvalidSpec("make_model: bad design tag");
}

std::string ModelSpec::to_json() const {
  nlohmann::json j;
  j["design"] = ggmc::to_string(design);
  j["k"] = k;
  switch (design) {
    case DesignTag::BlockAR1:
    case DesignTag::BlockEquicorr:
      j["block_size"] = block_size;
      j["rho"] = rho;
      break;
    case DesignTag::Band:
      break;
    case DesignTag::ErdosRenyi:
      j["q"] = q;
      j["u_range"] = {u_lo, u_hi};
      j["seed"] = seed;
      break;
  }
  return j.dump();
}

ModelSpec ModelSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelSpec spec;
  spec.design = design_from_string(j.at("design").get<std::string>());
  spec.k = j.at("k").get<int>();
  switch (spec.design) {
    case DesignTag::BlockAR1:
    case DesignTag::BlockEquicorr:
      spec.block_size = j.at("block_size").get<int>();
      spec.rho = j.at("rho").get<double>();
      break;
    case DesignTag::Band:
      break;
    case DesignTag::ErdosRenyi:
      spec.q = j.at("q").get<double>();
      spec.u_lo = j.at("u_range").at(0).get<double>();
      spec.u_hi = j.at("u_range").at(1).get<double>();
      spec.seed = j.at("seed").get<std::uint64_t>();
      break;
  }
  return spec;
}

C1Report validate_c1(const GraphModel& model, double c0, int n) {
  C1Report r;
  r.max_sigma_diag = model.sigma.diagonal().maxCoeff();
  r.max_omega_diag = model.omega.diagonal().maxCoeff();
  r.c0 = c0;
  r.sigma_ok = r.max_sigma_diag <= c0;
  r.omega_ok = r.max_omega_diag <= c0;
  r.k = model.k;
  r.n = n;
  const double logk = std::log(static_cast<double>(model.k));
  r.log_k_over_n = logk / n;
  r.log_k_over_sqrt_n = logk / std::sqrt(static_cast<double>(n));
  return r;
}

std::string C1Report::to_json() const {
  nlohmann::json j;
  j["max_sigma_diag"] = max_sigma_diag;
  j["max_omega_diag"] = max_omega_diag;
  j["c0"] = c0;
  j["sigma_ok"] = sigma_ok;
  j["omega_ok"] = omega_ok;
  j["log_k_over_n"] = log_k_over_n;
  j["log_k_over_sqrt_n"] = log_k_over_sqrt_n;
  j["k"] = k;
  j["n"] = n;
  return j.dump();
}

}  // namespace ggmc
