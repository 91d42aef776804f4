#include "qdf/state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <map>
#include <utility>

#include "qdf/rng.hpp"

namespace qdf {

ValidationReport validate_density(const Mat& m) {
  ValidationReport r;
  const double scale = std::max(1.0, m.norm());
  r.herm_residual = (m - m.adjoint()).norm() / scale;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.trace_error = std::abs(m.trace() - Cplx(1.0, 0.0));
  return r;
}

DensityOperator::DensityOperator(std::vector<int> dims, Mat m, OnInvalid policy) {
  for (int d : dims)
    if (d <= 0) throw ArgumentError("DensityOperator: dimensions must be positive");
  const long total = product_dim(dims);
  if (m.rows() != total || m.cols() != total)
    throw ArgumentError("DensityOperator: matrix side " + std::to_string(m.rows()) +
                        " does not match dimension product " + std::to_string(total));
  ValidationReport r = validate_density(m);
  if (!r.ok()) {
    if (policy == OnInvalid::Reject)
      throw ArgumentError("DensityOperator: validation failed (herm residual " +
                          std::to_string(r.herm_residual) + ", min eigenvalue " +
                          std::to_string(r.min_eigenvalue) + ", trace error " +
                          std::to_string(r.trace_error) + ")");
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    RVec clipped = es.eigenvalues().cwiseMax(0.0);
    const double tr = clipped.sum();
    if (tr <= 0.0) throw ArgumentError("DensityOperator: repair impossible, no positive weight");
    m = es.eigenvectors() * (clipped / tr).asDiagonal() * es.eigenvectors().adjoint();
  }
  dims_ = std::move(dims);
  m_ = std::move(m);
}

DensityOperator DensityOperator::trusted(std::vector<int> dims, Mat m) {
  DensityOperator out;
  out.dims_ = std::move(dims);
  out.m_ = std::move(m);
  return out;
}

void SubsystemLayout::validate(int n_subsystems) const {
  std::vector<char> seen(n_subsystems, 0);
  auto mark = [&](int idx) {
    if (idx < 0 || idx >= n_subsystems) throw ArgumentError("SubsystemLayout: index out of range");
    if (seen[idx]) throw ArgumentError("SubsystemLayout: index assigned twice");
    seen[idx] = 1;
  };
  for (const auto& [label, idxs] : parties)
    for (int idx : idxs) mark(idx);
  for (int idx : discarded) mark(idx);
  for (char c : seen)
    if (!c) throw ArgumentError("SubsystemLayout: index not covered");
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b, long max_dim) {
  if (a.dim() * b.dim() > max_dim)
    throw ResourceError("tensor: total dimension " + std::to_string(a.dim() * b.dim()) +
                        " exceeds cap " + std::to_string(max_dim));
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityOperator::trusted(std::move(dims), kernels::kron(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  Mat out = kernels::partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> dims;
  dims.reserve(keep.size());
  for (int s : keep) dims.push_back(rho.dims()[s]);
  return DensityOperator::trusted(std::move(dims), std::move(out));
}

DensityOperator permute_subsystems(const DensityOperator& rho, const Perm& perm) {
  const auto map = basis_index_map(perm, rho.dims());  // enforces equal dims on moved slots
  std::vector<int> new_dims(rho.dims().size());
  for (size_t s = 0; s < perm.size(); ++s) new_dims[perm[s]] = rho.dims()[s];
  return DensityOperator::trusted(std::move(new_dims), kernels::permute_basis(rho.matrix(), map));
}

DensityOperator twirl(const DensityOperator& rho, const std::vector<Perm>& generators,
                      long group_cap) {
  group_closure(generators, group_cap);  // cap enforcement only
  const auto table = build_orbit_table(generators, rho.dims());
  return DensityOperator::trusted(rho.dims(), kernels::orbit_average(rho.matrix(), table));
}

namespace {

Vec random_unit_vector(long dim, Rng& rng) {
  Vec v(dim);
  for (long i = 0; i < dim; ++i) v(i) = rng.cnormal();
  double n = v.norm();
  while (n == 0.0) {  // astronomically unlikely; retry keeps the map total
    for (long i = 0; i < dim; ++i) v(i) = rng.cnormal();
    n = v.norm();
  }
  return v / n;
}

// Orthonormal basis of the symmetric subspace of (C^d)^{(x) n}: one uniform
// superposition per multiset of single-system labels.
std::vector<Vec> symmetric_subspace_basis(int n, int d) {
  const long total = [&] {
    long t = 1;
    for (int i = 0; i < n; ++i) t *= d;
    return t;
  }();
  std::map<std::vector<int>, std::vector<long>> buckets;
  std::vector<int> tuple(n, 0);
  for (long i = 0; i < total; ++i) {
    std::vector<int> key = tuple;
    std::sort(key.begin(), key.end());
    buckets[key].push_back(i);
    for (int s = n - 1; s >= 0; --s) {
      if (++tuple[s] < d) break;
      tuple[s] = 0;
    }
  }
  std::vector<Vec> basis;
  basis.reserve(buckets.size());
  for (const auto& [key, idxs] : buckets) {
    Vec v = Vec::Zero(total);
    const double amp = 1.0 / std::sqrt(static_cast<double>(idxs.size()));
    for (long i : idxs) v(i) = amp;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

DensityOperator random_state(const std::vector<int>& dims, Ensemble ensemble, std::uint64_t seed,
                             const RandomStateOptions& opts) {
  for (int d : dims)
    if (d <= 0) throw ArgumentError("random_state: dimensions must be positive");
  const long total = product_dim(dims);
  if (total > defaults::kMaxTotalDim)
    throw ResourceError("random_state: dimension exceeds cap");
  Rng rng(seed);
  switch (ensemble) {
    case Ensemble::HaarPure: {
      Vec v = random_unit_vector(total, rng);
      return DensityOperator::trusted(dims, v * v.adjoint());
    }
    case Ensemble::HilbertSchmidt: {
      Mat g(total, total);
      for (long c = 0; c < total; ++c)
        for (long r = 0; r < total; ++r) g(r, c) = rng.cnormal();
      Mat m = g * g.adjoint();
      m /= m.trace().real();
      return DensityOperator::trusted(dims, 0.5 * (m + m.adjoint()));
    }
    case Ensemble::BoseSymmetric: {
      if (dims.empty()) throw ArgumentError("random_state: bose-symmetric needs subsystems");
      for (int d : dims)
        if (d != dims[0])
          throw ArgumentError("random_state: bose-symmetric requires equal dimensions");
      if (opts.mix_count < 1) throw ArgumentError("random_state: mix_count must be positive");
      const auto basis = symmetric_subspace_basis(static_cast<int>(dims.size()), dims[0]);
      Mat m = Mat::Zero(total, total);
      for (int c = 0; c < opts.mix_count; ++c) {
        Vec coeff = random_unit_vector(static_cast<long>(basis.size()), rng);
        Vec psi = Vec::Zero(total);
        for (size_t b = 0; b < basis.size(); ++b) psi += coeff(static_cast<long>(b)) * basis[b];
        m += (psi * psi.adjoint()) / static_cast<double>(opts.mix_count);
      }
      return DensityOperator::trusted(dims, std::move(m));
    }
  }
  throw ArgumentError("random_state: unknown ensemble");
}

DensityOperator max_entangled(int d) {
  if (d < 2) throw ArgumentError("max_entangled: d must be at least 2");
  Vec phi = Vec::Zero(static_cast<long>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) phi(static_cast<long>(i) * d + i) = amp;
  return DensityOperator::trusted({d, d}, phi * phi.adjoint());
}

DensityOperator ghz_state(int n) {
  if (n < 1) throw ArgumentError("ghz_state: n must be positive");
  const long total = 1L << n;
  Vec psi = Vec::Zero(total);
  psi(0) = psi(total - 1) = 1.0 / std::sqrt(2.0);
  return DensityOperator::trusted(std::vector<int>(n, 2), psi * psi.adjoint());
}

DensityOperator isotropic_state(int d, double p) {
  DensityOperator phi = max_entangled(d);
  const long total = static_cast<long>(d) * d;
  Mat m = p * phi.matrix() + (1.0 - p) / static_cast<double>(total) * Mat::Identity(total, total);
  return DensityOperator({d, d}, std::move(m));  // validates PSD, rejects out-of-range p
}

double trace_norm(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dims() != b.dims()) throw ArgumentError("trace_distance: dimension mismatch");
  return trace_norm(a.matrix() - b.matrix());
}

Mat embed_at(const Mat& a, const std::vector<int>& dims, const std::vector<int>& positions) {
  const long total = product_dim(dims);
  Mat x = Mat::Zero(total, total);
  kernels::add_embedded_identity(x, a, dims, positions, Cplx(1.0, 0.0));
  return x;
}

DensityOperator regroup_dims(const DensityOperator& rho, const std::vector<int>& group_sizes) {
  std::vector<int> fused;
  size_t cursor = 0;
  for (int g : group_sizes) {
    if (g <= 0) throw ArgumentError("regroup_dims: group sizes must be positive");
    long d = 1;
    for (int i = 0; i < g; ++i) {
      if (cursor >= rho.dims().size()) throw ArgumentError("regroup_dims: groups exceed subsystems");
      d *= rho.dims()[cursor++];
    }
    fused.push_back(static_cast<int>(d));
  }
  if (cursor != rho.dims().size())
    throw ArgumentError("regroup_dims: groups must cover all subsystems");
  return DensityOperator::trusted(std::move(fused), rho.matrix());
}

}  // namespace qdf
