// Entropic functionals (all reported in bits): von Neumann entropy, relative
// entropy with explicit infinity tagging, mutual informations, and the
// Pinsker bridge between relative entropy and trace distance.
#pragma once

#include <vector>

#include "qdf/state.hpp"

namespace qdf {

// Relative entropy in bits; `infinite` is set when the support condition
// fails, in which case `bits` holds +inf.
struct RelEntropy {
  double bits = 0.0;
  bool infinite = false;
  static RelEntropy inf() {
    return {std::numeric_limits<double>::infinity(), true};
  }
};

// S(rho) = -sum lambda_i log2 lambda_i over eigenvalues above the cutoff.
double von_neumann(const DensityOperator& rho, double cutoff = defaults::kEigCutoff);

// D(rho || sigma), computed in sigma's eigenbasis with support projection.
// Weight of rho outside supp(sigma) beyond `support_tol` makes it infinite.
RelEntropy relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                            double cutoff = defaults::kEigCutoff,
                            double support_tol = defaults::kSupportTol);

// Classical counterparts on probability vectors (weights may be unnormalized
// consistently; the caller is responsible for that).
double shannon(const RVec& p, double cutoff = defaults::kEigCutoff);
RelEntropy classical_relative_entropy(const RVec& p, const RVec& q,
                                      double cutoff = defaults::kEigCutoff,
                                      double support_tol = defaults::kSupportTol);

// I(A;B) = S(A) + S(B) - S(AB) with A the subsystems in `part_a`.
double mutual_information(const DensityOperator& rho, const std::vector<int>& part_a);

// I(A;B|C) = I(A;BC) - I(A;C); the three parts must tile all subsystems.
double conditional_mutual_information(const DensityOperator& rho, const std::vector<int>& part_a,
                                      const std::vector<int>& part_b,
                                      const std::vector<int>& part_c);

// I(A_1;...;A_r) = sum_i S(A_i) - S(A_1...A_r); parts must tile all subsystems.
double multipartite_mutual_information(const DensityOperator& rho,
                                       const std::vector<std::vector<int>>& parts);

struct PinskerReport {
  double lhs_bits = 0.0;   // D(rho||sigma)
  double rhs_bits = 0.0;   // ||rho-sigma||_1^2 / (2 ln 2)
  bool lhs_infinite = false;
  bool holds = false;      // lhs >= rhs - 1e-9
};
PinskerReport pinsker_check(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace qdf
