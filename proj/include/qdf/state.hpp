// Density operators on tensor-product spaces and the structural operations on
// them: tensor products, partial traces, subsystem permutations, twirls and
// random-state sampling.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdf/common.hpp"
#include "qdf/kernels.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {

// What to do with an operator that fails validation.
enum class OnInvalid { Reject, Repair };

struct ValidationReport {
  double herm_residual = 0.0;   // ||M - M^dag||_F / max(1, ||M||_F)
  double min_eigenvalue = 0.0;  // most negative eigenvalue
  double trace_error = 0.0;     // |tr M - 1|
  bool ok(double herm_tol = defaults::kHermTol, double psd_tol = defaults::kPsdTol,
          double trace_tol = defaults::kTraceTol) const {
    return herm_residual <= herm_tol && min_eigenvalue >= -psd_tol && trace_error <= trace_tol;
  }
};

ValidationReport validate_density(const Mat& m);

class DensityOperator {
 public:
  // Validates (or repairs) the matrix.  Repair hermitizes, clips negative
  // eigenvalues to zero and renormalizes the trace.
  DensityOperator(std::vector<int> dims, Mat m, OnInvalid policy = OnInvalid::Reject);

  // Skips validation; for internal construction where validity is structural.
  static DensityOperator trusted(std::vector<int> dims, Mat m);

  const std::vector<int>& dims() const { return dims_; }
  const Mat& matrix() const { return m_; }
  long dim() const { return m_.rows(); }
  int subsystems() const { return static_cast<int>(dims_.size()); }

 private:
  DensityOperator() = default;
  std::vector<int> dims_;
  Mat m_;
};

// Named grouping of subsystem indices into parties, with an explicit list of
// indices that are ignored.
struct SubsystemLayout {
  std::vector<std::pair<std::string, std::vector<int>>> parties;
  std::vector<int> discarded;
  void validate(int n_subsystems) const;  // disjointness + full cover
};

// ---- structural operations ------------------------------------------------

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b,
                       long max_dim = defaults::kMaxTotalDim);

// Trace out everything except the (strictly increasing) subsystems in `keep`.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// Conjugate by the permutation unitary sending subsystem s to position perm[s].
DensityOperator permute_subsystems(const DensityOperator& rho, const Perm& perm);

// Average of rho over the group generated by `generators` (conjugation
// action).  The closure is enumerated only to enforce the cap; the average
// itself runs over entry orbits.
DensityOperator twirl(const DensityOperator& rho, const std::vector<Perm>& generators,
                      long group_cap = defaults::kGroupCap);

// ---- sampling and named states ---------------------------------------------

enum class Ensemble {
  HaarPure,          // |v><v| with Gaussian v
  HilbertSchmidt,    // GG^dag / tr, square Ginibre G
  BoseSymmetric,     // mixture of symmetrized pure products (see mix_count)
};

struct RandomStateOptions {
  int mix_count = defaults::kBoseMixCount;  // components in a BoseSymmetric mixture
};

// Deterministic in (dims, ensemble, seed, options).  For BoseSymmetric all
// entries of dims must agree.
DensityOperator random_state(const std::vector<int>& dims, Ensemble ensemble,
                             std::uint64_t seed, const RandomStateOptions& opts = {});

// Maximally entangled state on C^d (x) C^d.
DensityOperator max_entangled(int d);

// n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2).
DensityOperator ghz_state(int n);

// Isotropic state on C^d (x) C^d: p * max_entangled + (1-p) * I/d^2.
DensityOperator isotropic_state(int d, double p);

// ---- distances --------------------------------------------------------------

double trace_norm(const Mat& hermitian);                 // sum of |eigenvalues|
double trace_distance(const DensityOperator& a, const DensityOperator& b);  // ||a-b||_1

// Convenience: embed `a` (given at `positions`, strictly increasing) into the
// full space with identity elsewhere.
Mat embed_at(const Mat& a, const std::vector<int>& dims, const std::vector<int>& positions);

// Reinterpret consecutive subsystems as coarser ones: group_sizes partitions
// the dims list in order and each group is fused into one subsystem.  Pure
// metadata; the matrix is untouched.
DensityOperator regroup_dims(const DensityOperator& rho, const std::vector<int>& group_sizes);

}  // namespace qdf
