// Seesaw maximization of measurement-restricted distinguishability: the
// restricted norm  max_M || M(rho) - M(sigma) ||_1  and the restricted
// relative entropy  max_M D(M(rho) || M(sigma))  over the classes
// LO / one-way-parallel / one-way-full / unrestricted.
//
// Values are certified lower bounds: the returned witness is re-evaluated
// independently and that re-evaluation is the reported value.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "qdf/measurement.hpp"

namespace qdf {

// Local-operations witness: one POVM per party, no adaptivity.
struct ProductWitness {
  std::vector<int> party_dims;
  std::vector<Povm> povms;
};

// Parallel one-way witness: history-independent POVMs for the first k-1
// parties, one POVM per joint upstream outcome for the last party.
struct ParallelWitness {
  std::vector<int> party_dims;
  std::vector<Povm> upstream;  // size k-1
  std::vector<Povm> last;      // size = product of upstream outcome counts
};

AdaptiveMeasurementTree product_to_tree(const ProductWitness& w);
AdaptiveMeasurementTree parallel_to_full_embedding(const ParallelWitness& w);

struct SeesawOptions {
  int restarts = defaults::kSeesawRestarts;
  int iters = defaults::kSeesawIters;
  std::uint64_t seed = 0;
  // Optional warm start: evaluated as a baseline candidate and, when its
  // structure allows, used to initialize the first restart.
  const AdaptiveMeasurementTree* init = nullptr;
};

struct SeesawResult {
  double value = 0.0;
  bool value_infinite = false;  // relative-entropy objective only
  bool converged = false;       // some restart stagnated before the iteration cap
  MeasurementClass cls = MeasurementClass::OneWayFull;
  AdaptiveMeasurementTree witness;
  std::optional<ProductWitness> product;    // set for LO
  std::optional<ParallelWitness> parallel;  // set for OneWayParallel
};

SeesawResult restricted_norm(const DensityOperator& rho, const DensityOperator& sigma,
                             MeasurementClass cls, const SeesawOptions& opts = {});

// For cls == All this maximizes over one global measurement (a data-processing
// lower bound on the quantum relative entropy).
SeesawResult restricted_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                                         MeasurementClass cls, const SeesawOptions& opts = {});

// Independent witness evaluators.
double evaluate_norm_witness(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                             const DensityOperator& sigma);
RelEntropy evaluate_relent_witness(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                                   const DensityOperator& sigma);

// Derivative-free ascent of f over the unitary group U(d), starting at u:
// Cayley moves along a skew-Hermitian coordinate basis with an adaptive step.
// Only improvements are accepted; returns the best unitary found.
Mat ascend_unitary(const std::function<double(const Mat&)>& f, Mat u, int iters);

}  // namespace qdf
