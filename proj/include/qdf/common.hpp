// Shared aliases, error types and default tolerances used across the library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdf {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Invalid caller input (bad dimensions, malformed operators, out-of-range
// parameters).  Maps to exit code 3 at the CLI boundary.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// A request that is well-formed but exceeds configured resource limits
// (dimension caps, group-size caps).  Maps to exit code 4 at the CLI boundary.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

namespace defaults {
inline constexpr double kHermTol = 1e-10;       // relative Frobenius deviation from M = M^dag
inline constexpr double kPsdTol = 1e-10;        // allowed negative eigenvalue magnitude
inline constexpr double kTraceTol = 1e-10;      // |tr - 1|
inline constexpr double kEigCutoff = 1e-12;     // eigenvalues below this are treated as 0 in entropies
inline constexpr double kSupportTol = 1e-9;     // weight outside support that still counts as contained
inline constexpr double kPovmSumTol = 1e-9;     // || sum_x E_x - I ||
inline constexpr long kMaxTotalDim = 4096;      // cap on total Hilbert-space dimension
inline constexpr long kGroupCap = 3628800;      // cap on enumerated permutation-group size (10!)
inline constexpr int kOutcomeCap = 6;           // per-measurement outcome cardinality cap
inline constexpr int kSeesawRestarts = 20;
inline constexpr int kSeesawIters = 200;
inline constexpr int kOracleRestarts = 100;
inline constexpr int kExtensionMaxIter = 20000;
inline constexpr double kExtensionTol = 1e-7;
inline constexpr int kBoseMixCount = 3;         // pure components mixed into a bose-symmetric sample
inline constexpr double kInfiniteSurrogateBits = 1e3;  // stand-in for +inf inside iterative maximizers
}  // namespace defaults

inline long product_dim(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  return d;
}

}  // namespace qdf
