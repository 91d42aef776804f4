// Symmetric-extension feasibility: block extensions of a k-party state with
// permutation symmetry across blocks (jointly or per party), solved by
// alternating projections with a Dykstra-style correction, plus the level
// formulas tying extendibility to separable-distance guarantees.
#pragma once

#include <cstdint>
#include <optional>

#include "qdf/kernels.hpp"
#include "qdf/state.hpp"

namespace qdf {

enum class ExtensionMode {
  FullMarginal,  // whole blocks exchanged jointly; block-0 and diagonal marginals pinned
  PerParty       // each party's block row exchanged independently; all tuples pinned
};

enum class Feasibility { Feasible, Infeasible, Undecided };

struct MarginalConstraint {
  std::vector<int> keep;  // strictly increasing subsystem positions
  Mat target;             // expected marginal, parties ordered as in `keep`
};

struct ExtensionProblem {
  std::vector<int> party_dims;
  int k = 0;
  int level = 0;
  ExtensionMode mode = ExtensionMode::FullMarginal;
  std::vector<int> full_dims;  // level * k subsystems; index = block * k + party
  long total_dim = 0;
  std::vector<Perm> generators;
  kernels::OrbitTable orbits;
  std::vector<MarginalConstraint> marginals;
  Mat block_target;  // the k-party state itself, used to seed the solver
};

ExtensionProblem build_extension_problem(const DensityOperator& rho, int k, int level,
                                         ExtensionMode mode,
                                         long max_dim = defaults::kMaxTotalDim,
                                         long group_cap = defaults::kGroupCap);

// Hyperplane separating the affine constraint set from the PSD cone, produced
// when the projection gap stabilizes away from zero.
struct SeparationCertificate {
  Mat normal;                      // Hermitian, unit Frobenius norm
  double value_affine = 0.0;       // <N, X> shared by every affine point
  double psd_max = 0.0;            // largest <N, X> over sampled PSD points
  double margin = 0.0;             // value_affine - psd_max
  double direction_residual = 0.0; // component of N along affine directions
  double lambda_max = 0.0;         // top eigenvalue of N (near or below zero)
  bool valid = false;
};

struct SolverOptions {
  double tol = defaults::kExtensionTol;
  long max_iter = defaults::kExtensionMaxIter;
  std::uint64_t seed = 0;
  int stall_window = 200;  // consecutive stalled iterations before infeasibility
};

struct FeasibilityResult {
  Feasibility verdict = Feasibility::Undecided;
  long iterations = 0;
  double gap = 0.0;              // Frobenius distance between the two iterates at exit
  double cone_residual = 0.0;    // max(0, -lambda_min) of the returned extension
  double affine_residual = 0.0;  // worst marginal/invariance/trace residual
  std::optional<DensityOperator> extension;          // feasible case
  std::optional<SeparationCertificate> certificate;  // infeasible case
};

FeasibilityResult solve_feasibility(const ExtensionProblem& problem,
                                    const SolverOptions& opts = {});

struct ExtensionResiduals {
  double invariance = 0.0;
  double marginal = 0.0;
  double psd = 0.0;
  double trace = 0.0;
};
ExtensionResiduals check_extension(const ExtensionProblem& problem, const Mat& ext);

enum class Metric { TraceNorm, RelativeEntropy };

// Smallest extension level whose distance guarantee reaches eps (floored at k).
int required_level(int k, const std::vector<int>& party_dims, double eps, Metric metric);

struct DistanceBounds {
  double relent_bits = 0.0;
  double norm = 0.0;
};
// Guarantees carried by level-l extendibility; requires l > k.
DistanceBounds extendible_distance_bounds(int k, int level, const std::vector<int>& party_dims);

enum class Verdict { SeparableWithinEps, Entangled, Undecided };

struct DetectOptions {
  int level_override = 0;  // 0 = derive from eps via required_level
  SolverOptions solver;
  long max_dim = defaults::kMaxTotalDim;
  long group_cap = defaults::kGroupCap;
};

struct DetectionReport {
  Verdict verdict = Verdict::Undecided;
  int level = 0;
  double epsilon = 0.0;
  Metric metric = Metric::TraceNorm;
  DistanceBounds effective;  // bounds at the level actually used (inf if level == k)
  FeasibilityResult feasibility;
};

DetectionReport detect_entanglement(const DensityOperator& rho, double eps, Metric metric,
                                    const DetectOptions& opts = {});

}  // namespace qdf
