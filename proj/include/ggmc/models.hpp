#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ggmc/types.hpp"

// The four covariance/precision designs used in the simulation studies,
// with exact ground-truth edge sets. The true pi0 is always counted from the
// support of Omega; the nominal value from the usual block formula is kept
// alongside for table labelling (for AR(1) blocks and the band graph the two
// differ: the AR(1) precision is tridiagonal inside each block, and the band
// graph has nonzeros out to |i-j| = 2).

namespace ggmc {

enum class DesignTag { BlockAR1, BlockEquicorr, Band, ErdosRenyi };

std::string to_string(DesignTag tag);
DesignTag design_from_string(const std::string& name);

struct GraphModel {
  int k = 0;
  Matrix sigma;
  Matrix omega;
  std::vector<std::pair<int, int>> edges;  // 0-based, i < j
  double pi0_true = 1.0;                   // counted from omega's support
  double pi0_nominal = 1.0;                // the design's nominal formula
  DesignTag design = DesignTag::Band;
  double c0_bound = 0.0;  // max(max_i sigma_ii, max_i omega_ii)

  bool has_edge(int i, int j) const;
};

struct ModelSpec {
  DesignTag design = DesignTag::Band;
  int k = 0;
  int block_size = 0;           // block designs
  double rho = 0.5;             // block designs
  double q = 0.05;              // Erdos-Renyi
  double u_lo = 0.4;            // Erdos-Renyi
  double u_hi = 0.8;            // Erdos-Renyi
  std::uint64_t seed = 1;       // Erdos-Renyi only

  std::string to_json() const;
  static ModelSpec from_json(const std::string& text);
};

// Block-diagonal Sigma with equicorrelated blocks: sigma_ij = rho inside a
// block, 1 on the diagonal. Blocks have size s; when s does not divide k the
// final block is smaller. Every within-block pair is an edge.
GraphModel block_equicorr(int k, int s, double rho);

// Block-diagonal Sigma with AR(1) blocks: sigma_ij = rho^|i-j| inside a
// block. The within-block precision is tridiagonal (closed form), so only
// adjacent pairs are edges.
GraphModel block_ar1(int k, int s, double rho);

// Band precision: omega_ii = 1, 0.6 at |i-j| = 1, 0.3 at |i-j| = 2, zero
// beyond. Sigma = inverse.
GraphModel band_precision(int k);

// Random precision: b_ij = u_ij * delta_ij with delta_ij ~ Ber(q) and
// u_ij ~ Unif[u_lo, u_hi], unit diagonal. If lambda_min <= 0.05 the matrix is
// shifted by |lambda_min| + 0.05 and rescaled back to a unit diagonal,
// repeating until lambda_min > 0.05; the zero pattern (the edge set) is
// untouched. Deterministic given the seed.
GraphModel erdos_renyi_precision(int k, double q, double u_lo, double u_hi,
                                 std::uint64_t seed);

GraphModel make_model(const ModelSpec& spec);

// Advisory report on condition (C1): bounded diagonals of Sigma and Omega
// and log k small against n.
struct C1Report {
  double max_sigma_diag = 0.0;
  double max_omega_diag = 0.0;
  double c0 = 0.0;
  bool sigma_ok = false;
  bool omega_ok = false;
  double log_k_over_n = 0.0;
  double log_k_over_sqrt_n = 0.0;
  int k = 0;
  int n = 0;
  std::string to_json() const;
};

C1Report validate_c1(const GraphModel& model, double c0, int n);

}  // namespace ggmc
