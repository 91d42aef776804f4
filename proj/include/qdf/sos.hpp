// Symmetrized eigenvalue relaxations for polynomial optimization over unit
// spheres: best product-vector value (independent spheres per party) or best
// i.i.d. mixed-state value (single sphere), sandwiched between a heuristic
// product ascent and a symmetric-extension style eigenvalue relaxation with an
// explicit level-dependent gap bound.
#pragma once

#include <cstdint>

#include "qdf/state.hpp"

namespace qdf {

enum class SphereVariant {
  IndependentSpheres,  // max over unit alpha_1..alpha_k of <alpha_1..alpha_k|M|alpha_1..alpha_k>
  SingleSphere         // max over density sigma of tr(M sigma^{(x) k})
};

struct SphereProblem {
  Mat objective;  // acts on (C^d)^{(x) k}, Hermitian with 0 <= M <= 1
  int local_dim = 0;
  int fold = 0;  // k
  SphereVariant variant = SphereVariant::SingleSphere;
  bool locc_flag = false;  // objective stems from a restricted-measurement norm
  void validate() const;
};

struct RelaxResult {
  double value = 0.0;
  DensityOperator optimizer;  // symmetrized top-eigenvector state
  int level = 0;
};

// Eigenvalue relaxation at the given symmetrization level.
RelaxResult relax(const SphereProblem& p, int level, long max_dim = defaults::kMaxTotalDim);

// Same value via power iteration on the twirled objective (slow, low-memory path).
double relax_power_value(const SphereProblem& p, int level, long iters = 20000,
                         double tol = 1e-12, long max_dim = defaults::kMaxTotalDim);

struct OracleResult {
  double value = 0.0;
  std::vector<Vec> unit_vectors;  // IndependentSpheres: one unit vector per party
  Mat sphere_state;               // SingleSphere: the optimizing d x d density
};

struct ProductOracleOptions {
  int restarts = defaults::kOracleRestarts;
  int iters = 300;
  std::uint64_t seed = 0;
};

// Heuristic inner bound: alternating exact updates over the party vectors, or
// projected gradient ascent over the purification of the single-sphere state.
OracleResult product_oracle(const SphereProblem& p, const ProductOracleOptions& opts = {});

// Worst-case relaxation-vs-truth gap at this level: sqrt((k-1)^2 ln d / (2(level-k))).
double gap_bound(int k, int d, int level);

struct SandwichReport {
  int level = 0;
  double relax_value = 0.0;
  double oracle_value = 0.0;
  double gap_bound_value = 0.0;
  bool lower_ok = false;            // oracle <= relax + 1e-8
  bool gap_ok = false;              // relax - oracle <= gap bound + 1e-6
  bool guarantee_conditional = false;  // true when the objective carries the locc flag
};

SandwichReport sandwich_check(const SphereProblem& p, int level,
                              const ProductOracleOptions& opts = {},
                              long max_dim = defaults::kMaxTotalDim);

}  // namespace qdf
