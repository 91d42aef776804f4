// Constructive de Finetti approximation for permutation-invariant states:
// grouping of subsystems, greedy chain-rule measurement selection, ensemble
// decomposition, candidate assembly, and end-to-end bound verification.
#pragma once

#include <cstdint>

#include "qdf/seesaw.hpp"

namespace qdf {

struct GroupingLayout {
  int n = 0;
  int k = 0;
  int m = 0;                            // floor((n-1)/(k-1)); n-1 when k == 1
  std::vector<std::vector<int>> groups;  // m blocks of k-1 subsystem indices
  int isolated = 0;                      // the singled-out subsystem
  std::vector<int> discarded;            // tail indices, traced out up front
  SubsystemLayout to_subsystem_layout() const;
};

GroupingLayout make_grouping(int n, int k);

// Greedy chain-rule measurement selection across the blocks.
struct QStarResult {
  std::vector<Povm> block_povms;     // one per block, aligned with layout.groups
  std::vector<double> chain_terms;   // I(A;Z_l | Z_<l) for l = 1..m, in bits
  double chain_sum = 0.0;            // = I(A;Z_1...Z_m), telescoping
  int argmin_block = 0;              // relabeled as the kept block B_1
  double score = 0.0;                // minimal chain term
};

struct QStarOptions {
  int restarts = 4;        // ascent restarts per block
  int iters = 60;          // ascent iterations per restart
  std::uint64_t seed = 0;
  bool ic_fallback = false;  // fixed informationally-complete product POVM
};

QStarResult find_qstar(const DensityOperator& rho, const GroupingLayout& layout,
                       const QStarOptions& opts);

// Chain decomposition for a fixed choice of block measurements: the per-block
// conditional terms, their sum, and the joint accessible information computed
// independently from the final measured ensemble (the two agree identically).
struct ChainEvaluation {
  std::vector<double> terms;  // I(A;Z_l | Z_<l) per block, in bits
  double sum = 0.0;
  double joint_mi = 0.0;  // I(A;Z_1...Z_m) from the final ensemble
};
ChainEvaluation evaluate_chain(const DensityOperator& rho, const GroupingLayout& layout,
                               const std::vector<Povm>& block_povms);

struct DeFinettiCandidate {
  RVec weights;
  std::vector<DensityOperator> components;        // single-subsystem states
  int fold = 0;                                   // k
  // Diagnostics: the post-measurement joint states on the kept k subsystems,
  // aligned with weights.
  std::vector<DensityOperator> joint_components;
  double marginal_deviation = 0.0;  // max Frobenius gap between single-system marginals
  double mixture_residual = 0.0;    // Frobenius gap of sum_x p_x rho^x vs the reduced state
};

DeFinettiCandidate build_candidate(const DensityOperator& rho, int k,
                                   const GroupingLayout& layout, const QStarResult& qstar);

// sum_x p_x sigma_x^{(x) k}
DensityOperator assemble_candidate(const DeFinettiCandidate& cand);

struct TheoremBounds {
  double relent_bits = 0.0;  // (k-1)^2 log2(dA) / (n-k)
  double norm = 0.0;         // sqrt(2 (k-1)^2 ln(dA) / (n-k))
};
TheoremBounds theorem_bounds(int n, int k, int dA);

struct VerifyOptions {
  std::uint64_t seed = 0;
  int seesaw_restarts = defaults::kSeesawRestarts;
  int seesaw_iters = defaults::kSeesawIters;
  QStarOptions qstar;
};

struct TheoremReport {
  int n = 0, k = 0, dA = 0, m = 0;
  double qstar_score = 0.0;
  double score_ceiling = 0.0;  // log2(dA)/m, the pigeonhole guarantee
  TheoremBounds bounds;
  double distance_estimate = 0.0;    // seesaw lower bound, one-way-full class
  double relent_estimate_bits = 0.0;
  bool relent_infinite = false;
  bool norm_converged = false;
  bool relent_converged = false;
  int components = 0;
  double invariance_residual = 0.0;
  bool pass = false;
};

TheoremReport verify_theorem(const DensityOperator& rho, int k, const VerifyOptions& opts);

// Residual of permutation invariance of rho under exchanging equal-size
// subsystem groups (relative Frobenius, maximized over generators).
double group_invariance_residual(const DensityOperator& rho,
                                 const std::vector<std::vector<int>>& groups);

}  // namespace qdf
