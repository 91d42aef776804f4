#include "qdf/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace qdf {

namespace {
constexpr double kLog2e = 1.4426950408889634074;  // 1/ln 2

std::vector<int> complement_sorted(int n, const std::vector<int>& part) {
  std::vector<char> in(n, 0);
  for (int s : part) {
    if (s < 0 || s >= n) throw ArgumentError("subsystem index out of range");
    if (in[s]) throw ArgumentError("subsystem index repeated");
    in[s] = 1;
  }
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (!in[s]) rest.push_back(s);
  return rest;
}

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double entropy_of_marginal(const DensityOperator& rho, const std::vector<int>& part) {
  return von_neumann(partial_trace(rho, sorted_copy(part)));
}
}  // namespace

double von_neumann(const DensityOperator& rho, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > cutoff) s -= l * std::log2(l);
  }
  return s;
}

double shannon(const RVec& p, double cutoff) {
  double s = 0.0;
  for (long i = 0; i < p.size(); ++i)
    if (p(i) > cutoff) s -= p(i) * std::log2(p(i));
  return s;
}

RelEntropy classical_relative_entropy(const RVec& p, const RVec& q, double cutoff,
                                      double support_tol) {
  if (p.size() != q.size())
    throw ArgumentError("classical_relative_entropy: length mismatch");
  double outside = 0.0;
  for (long i = 0; i < p.size(); ++i)
    if (q(i) <= cutoff) outside += std::max(0.0, p(i));
  if (outside > support_tol) return RelEntropy::inf();
  double d = 0.0;
  for (long i = 0; i < p.size(); ++i)
    if (p(i) > cutoff && q(i) > cutoff) d += p(i) * (std::log2(p(i)) - std::log2(q(i)));
  return {d, false};
}

RelEntropy relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                            double cutoff, double support_tol) {
  if (rho.dims() != sigma.dims()) throw ArgumentError("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> er(rho.matrix());
  Eigen::SelfAdjointEigenSolver<Mat> es(sigma.matrix());
  const RVec& p = er.eigenvalues();
  const RVec& q = es.eigenvalues();

  // rho-weight outside supp(sigma): tr(rho (I - Pi_sigma)).
  double outside = 0.0;
  for (long j = 0; j < q.size(); ++j)
    if (q(j) <= cutoff) {
      const Vec col = es.eigenvectors().col(j);
      outside += (col.adjoint() * rho.matrix() * col)(0, 0).real();
    }
  if (outside > support_tol) return RelEntropy::inf();

  double d = 0.0;
  for (long i = 0; i < p.size(); ++i)
    if (p(i) > cutoff) d += p(i) * std::log2(p(i));
  // -tr(rho log2 sigma) in sigma's eigenbasis, skipping the null space (its
  // rho-weight is below support_tol by the check above).
  for (long j = 0; j < q.size(); ++j) {
    if (q(j) <= cutoff) continue;
    const Vec col = es.eigenvectors().col(j);
    const double w = (col.adjoint() * rho.matrix() * col)(0, 0).real();
    d -= w * std::log2(q(j));
  }
  return {d, false};
}

double mutual_information(const DensityOperator& rho, const std::vector<int>& part_a) {
  const auto part_b = complement_sorted(rho.subsystems(), part_a);
  if (part_a.empty() || part_b.empty())
    throw ArgumentError("mutual_information: bipartition must be proper");
  return entropy_of_marginal(rho, part_a) + entropy_of_marginal(rho, part_b) - von_neumann(rho);
}

double conditional_mutual_information(const DensityOperator& rho, const std::vector<int>& part_a,
                                      const std::vector<int>& part_b,
                                      const std::vector<int>& part_c) {
  std::vector<int> ac = part_a, bc = part_b, abc = part_a;
  ac.insert(ac.end(), part_c.begin(), part_c.end());
  bc.insert(bc.end(), part_c.begin(), part_c.end());
  abc.insert(abc.end(), part_b.begin(), part_b.end());
  abc.insert(abc.end(), part_c.begin(), part_c.end());
  if (sorted_copy(abc) != complement_sorted(rho.subsystems(), {}))
    throw ArgumentError("conditional_mutual_information: parts must tile all subsystems");
  // I(A;BC) - I(A;C) = S(AC) + S(BC) - S(C) - S(ABC).
  double s_c = part_c.empty() ? 0.0 : entropy_of_marginal(rho, part_c);
  return entropy_of_marginal(rho, ac) + entropy_of_marginal(rho, bc) - s_c - von_neumann(rho);
}

double multipartite_mutual_information(const DensityOperator& rho,
                                       const std::vector<std::vector<int>>& parts) {
  std::vector<int> all;
  double s = 0.0;
  for (const auto& part : parts) {
    if (part.empty()) throw ArgumentError("multipartite_mutual_information: empty part");
    all.insert(all.end(), part.begin(), part.end());
    s += entropy_of_marginal(rho, part);
  }
  if (sorted_copy(all) != complement_sorted(rho.subsystems(), {}))
    throw ArgumentError("multipartite_mutual_information: parts must tile all subsystems");
  return s - von_neumann(rho);
}

PinskerReport pinsker_check(const DensityOperator& rho, const DensityOperator& sigma) {
  PinskerReport r;
  const RelEntropy d = relative_entropy(rho, sigma);
  r.lhs_bits = d.bits;
  r.lhs_infinite = d.infinite;
  const double t = trace_distance(rho, sigma);
  r.rhs_bits = t * t * 0.5 * kLog2e;
  r.holds = d.infinite || r.lhs_bits >= r.rhs_bits - 1e-9;
  return r;
}

}  // namespace qdf
