// POVMs, measurement channels, adaptive (fully one-way) measurement trees,
// and the exact chain identity for measured relative entropy.
#pragma once

#include <cstdint>
#include <vector>

#include "qdf/entropy.hpp"
#include "qdf/rng.hpp"
#include "qdf/state.hpp"

namespace qdf {

struct Povm {
  std::vector<int> dims;     // subsystem dimensions the effects act on
  std::vector<Mat> effects;

  int outcomes() const { return static_cast<int>(effects.size()); }
  long dim() const { return product_dim(dims); }
  // PSD effects, completeness, outcome cap.
  void validate(int outcome_cap = defaults::kOutcomeCap) const;

  static Povm computational(int d);
  static Povm from_basis(const Mat& unitary);  // rank-1 projectors onto columns
  static Povm binary(const Mat& effect);       // {E, I-E}
  static Povm trivial(int d);                  // {I}
};

struct MeasurementChannel {
  Povm povm;
};

// Fully one-way adaptive measurement: party t's POVM may depend on all
// outcomes of parties 0..t-1.  Children are indexed by outcome.  Branching is
// uniform per level so the classical output lives on a product outcome space.
struct TreeNode {
  Povm povm;
  std::vector<TreeNode> children;  // empty at the last party
};

struct AdaptiveMeasurementTree {
  std::vector<int> party_dims;
  TreeNode root;

  int parties() const { return static_cast<int>(party_dims.size()); }
  std::vector<int> level_outcomes() const;
  void validate(int outcome_cap = defaults::kOutcomeCap) const;
};

enum class MeasurementClass { LO, OneWayParallel, OneWayFull, All };
// Containment order LO < OneWayParallel < OneWayFull < All.
bool class_contains(MeasurementClass outer, MeasurementClass inner);

// ---- application -------------------------------------------------------------

RVec outcome_probabilities(const Povm& povm, const Mat& rho);
DensityOperator apply_channel(const MeasurementChannel& channel, const DensityOperator& rho);
DensityOperator apply_channel(const AdaptiveMeasurementTree& tree, const DensityOperator& rho);

// Joint outcome distribution of the tree, row-major over levels.
RVec tree_probabilities(const AdaptiveMeasurementTree& tree, const DensityOperator& rho);

// Conditional data after the first `depth` parties measured: probability and
// normalized conditional state on the remaining parties, indexed row-major by
// the outcome history.  Zero-probability branches carry a zero matrix.
struct Branch {
  double prob = 0.0;
  Mat cond;
};
std::vector<Branch> tree_branches(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                                  int depth);

// Truncation to the first l parties.
AdaptiveMeasurementTree reduced_measurement(const AdaptiveMeasurementTree& tree, int l);

// ---- chain identity ----------------------------------------------------------

// Exact decomposition of the measured relative entropy against the product of
// marginals into per-step terms, plus the two one-step sub-identities backing
// it.  When any branch hits infinite relative entropy the comparison is
// skipped: finite=false and the residuals are NaN.
struct ChainIdentityReport {
  bool finite = true;
  double lhs_bits = 0.0;
  std::vector<double> step_bits;  // terms l = 2..k
  double residual = 0.0;          // |lhs - sum(step_bits)|
  double eq_onestep_full_residual = 0.0;  // full-chain vs (k-1)-chain + last-step terms
  double eq_laststep_residual = 0.0;      // last hybrid relent vs conditional terms
};
ChainIdentityReport chain_identity(const AdaptiveMeasurementTree& tree, const DensityOperator& rho);
double chain_identity_residual(const AdaptiveMeasurementTree& tree, const DensityOperator& rho);

// Measurement update on a subsystem subset: probability of the effect and the
// unnormalized post-measurement operator on the remaining subsystems.
std::pair<double, Mat> measure_update(const Mat& m, const std::vector<int>& dims,
                                      const std::vector<int>& positions, const Mat& effect);

// ---- random instances --------------------------------------------------------

Mat random_unitary(int d, Rng& rng);
Povm random_binary_povm(int d, Rng& rng);      // {E, I-E} with random eigenbasis and spectrum
Povm random_projective_povm(int d, Rng& rng);  // rank-1 basis measurement

enum class TreeKind { BinaryGeneral, Projective };
AdaptiveMeasurementTree random_tree(const std::vector<int>& party_dims, TreeKind kind, Rng& rng);

}  // namespace qdf
