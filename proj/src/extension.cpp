#include "qdf/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdf/rng.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {
namespace {

constexpr int kInnerCap = 500;
constexpr double kInnerTol = 1e-13;
constexpr double kCertTol = 1e-6;

double factorial_double(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Rearrange tensor factors: the factor at rank r of the output is factor
// order[r] of the input.  Unlike a subsystem permutation this allows unequal
// dimensions; the output dimension list is dims[order[0]], dims[order[1]], ...
Mat reorder_factors(const Mat& m, const std::vector<int>& dims, const std::vector<int>& order) {
  const int nf = static_cast<int>(dims.size());
  std::vector<long> old_stride(nf, 1), new_stride(nf, 1);
  for (int f = nf - 2; f >= 0; --f) old_stride[f] = old_stride[f + 1] * dims[f + 1];
  for (int r = nf - 2; r >= 0; --r) new_stride[r] = new_stride[r + 1] * dims[order[r + 1]];
  const long total = product_dim(dims);
  std::vector<int> map(total);
  for (long i = 0; i < total; ++i) {
    long out = 0;
    for (int r = 0; r < nf; ++r) {
      const int f = order[r];
      const long digit = (i / old_stride[f]) % dims[f];
      out += digit * new_stride[r];
    }
    map[i] = static_cast<int>(out);
  }
  return kernels::permute_basis(m, map);
}

long rest_dim(const ExtensionProblem& pb, const MarginalConstraint& c) {
  return pb.total_dim / c.target.rows();
}

// Orthogonal projection onto the affine constraint set (invariant operators
// with pinned marginals and unit trace) by cyclic projections; each factor is
// itself an orthogonal projection onto an affine subspace.
void project_affine(const ExtensionProblem& pb, Mat& x) {
  const double scale = std::max(1.0, x.norm());
  for (int inner = 0; inner < kInnerCap; ++inner) {
    double change = 0.0;
    Mat averaged = kernels::orbit_average(x, pb.orbits);
    change = std::max(change, (averaged - x).norm());
    x.swap(averaged);
    for (const auto& c : pb.marginals) {
      const Mat diff = c.target - kernels::partial_trace(x, pb.full_dims, c.keep);
      change = std::max(change, diff.norm());
      kernels::add_embedded_identity(x, diff, pb.full_dims, c.keep,
                                     Cplx(1.0 / static_cast<double>(rest_dim(pb, c)), 0.0));
    }
    const Cplx tr = x.trace();
    change = std::max(change, std::abs(tr - Cplx(1.0, 0.0)));
    x.diagonal().array() += (Cplx(1.0, 0.0) - tr) / static_cast<double>(pb.total_dim);
    if (change <= kInnerTol * scale) break;
  }
  x = 0.5 * (x + x.adjoint()).eval();
}

SeparationCertificate make_certificate(const ExtensionProblem& pb, const Mat& a, const Mat& y,
                                       std::uint64_t seed) {
  SeparationCertificate cert;
  Mat n = a - y;
  const double nn = n.norm();
  if (nn < 1e-300) return cert;
  n /= nn;
  cert.normal = n;
  cert.value_affine = (n.adjoint() * a).trace().real();

  Eigen::SelfAdjointEigenSolver<Mat> es(n);
  cert.lambda_max = es.eigenvalues().maxCoeff();

  Mat probe = a + n;
  project_affine(pb, probe);
  cert.direction_residual = (probe - a).norm();

  const long d = pb.total_dim;
  Rng rng = Rng::derive(seed, 77);
  double psd_max = (n.adjoint() * y).trace().real();
  psd_max = std::max(psd_max, n.trace().real() / static_cast<double>(d));
  for (int s = 0; s < 10; ++s) {
    Mat g(d, d);
    for (long j = 0; j < d * d; ++j) g(j / d, j % d) = rng.cnormal();
    Mat sample = g * g.adjoint();
    sample /= sample.trace().real();
    psd_max = std::max(psd_max, (n.adjoint() * sample).trace().real());
  }
  cert.psd_max = psd_max;
  cert.margin = cert.value_affine - psd_max;

  double affine_dev = 0.0;
  for (int s = 0; s < 5; ++s) {
    Mat g(d, d);
    for (long j = 0; j < d * d; ++j) g(j / d, j % d) = rng.cnormal();
    Mat h = 0.5 * (g + g.adjoint());
    h /= std::max(1.0, h.norm());
    Mat point = a + h;
    project_affine(pb, point);
    affine_dev = std::max(affine_dev, std::abs((n.adjoint() * point).trace().real() -
                                               cert.value_affine));
  }
  const double psd_side_ok = std::abs((n.adjoint() * y).trace().real());
  cert.valid = cert.lambda_max <= kCertTol && psd_side_ok <= kCertTol &&
               cert.direction_residual <= kCertTol && affine_dev <= kCertTol &&
               cert.margin > 0.0;
  return cert;
}

}  // namespace

ExtensionProblem build_extension_problem(const DensityOperator& rho, int k, int level,
                                         ExtensionMode mode, long max_dim, long group_cap) {
  if (k != rho.subsystems())
    throw ArgumentError("party count k must match the state's subsystem count");
  if (k < 2) throw ArgumentError("extension problems need at least two parties");
  if (level < k)
    throw ArgumentError("extension level " + std::to_string(level) +
                        " is below the party count " + std::to_string(k));
  ExtensionProblem pb;
  pb.party_dims = rho.dims();
  pb.k = k;
  pb.level = level;
  pb.mode = mode;
  pb.block_target = rho.matrix();

  const double block_dim = static_cast<double>(rho.dim());
  if (std::pow(block_dim, level) > static_cast<double>(max_dim))
    throw ResourceError(
        "extension level unreachable at desk scale: level " + std::to_string(level) +
        " needs dimension " + std::to_string(block_dim) + "^" + std::to_string(level) +
        ", above the cap " + std::to_string(max_dim));
  const double group_size = (mode == ExtensionMode::FullMarginal)
                                ? factorial_double(level)
                                : std::pow(factorial_double(level), k);
  if (group_size > static_cast<double>(group_cap))
    throw ResourceError("symmetrization group too large: " + std::to_string(group_size) +
                        " elements exceed the cap " + std::to_string(group_cap));

  pb.full_dims.resize(static_cast<std::size_t>(level) * k);
  for (int b = 0; b < level; ++b)
    for (int j = 0; j < k; ++j) pb.full_dims[static_cast<std::size_t>(b) * k + j] = pb.party_dims[j];
  pb.total_dim = product_dim(pb.full_dims);

  const int n_sub = level * k;
  if (mode == ExtensionMode::FullMarginal) {
    Perm swap01 = identity_perm(n_sub);
    for (int j = 0; j < k; ++j) {
      swap01[j] = k + j;
      swap01[k + j] = j;
    }
    pb.generators.push_back(std::move(swap01));
    if (level > 2) {
      Perm cycle = identity_perm(n_sub);
      for (int b = 0; b < level; ++b)
        for (int j = 0; j < k; ++j) cycle[b * k + j] = ((b + 1) % level) * k + j;
      pb.generators.push_back(std::move(cycle));
    }
    // Two marginals are pinned: the first whole block, and the cross-block
    // diagonal that takes party j from block j.  The diagonal is what makes a
    // feasible extension certify closeness to separability; the block pin
    // excludes cross-paired constructions that would otherwise make even pure
    // entangled states trivially extendible.
    MarginalConstraint block0;
    for (int j = 0; j < k; ++j) block0.keep.push_back(j);
    block0.target = rho.matrix();
    pb.marginals.push_back(std::move(block0));
    MarginalConstraint diag;
    for (int j = 0; j < k; ++j) diag.keep.push_back(j * k + j);
    diag.target = rho.matrix();
    pb.marginals.push_back(std::move(diag));
  } else {
    for (int j = 0; j < k; ++j) {
      Perm swap01 = identity_perm(n_sub);
      swap01[j] = k + j;
      swap01[k + j] = j;
      pb.generators.push_back(std::move(swap01));
      if (level > 2) {
        Perm cycle = identity_perm(n_sub);
        for (int b = 0; b < level; ++b) cycle[b * k + j] = ((b + 1) % level) * k + j;
        pb.generators.push_back(std::move(cycle));
      }
    }
    std::vector<int> tuple(k, 0);
    while (true) {
      std::vector<std::pair<int, int>> pos;  // (subsystem position, party)
      pos.reserve(k);
      for (int j = 0; j < k; ++j) pos.emplace_back(tuple[j] * k + j, j);
      std::sort(pos.begin(), pos.end());
      MarginalConstraint c;
      std::vector<int> order;
      for (const auto& [p, j] : pos) {
        c.keep.push_back(p);
        order.push_back(j);
      }
      c.target = reorder_factors(rho.matrix(), pb.party_dims, order);
      pb.marginals.push_back(std::move(c));
      int j = k - 1;
      for (; j >= 0; --j) {
        if (++tuple[j] < level) break;
        tuple[j] = 0;
      }
      if (j < 0) break;
    }
  }
  pb.orbits = build_orbit_table(pb.generators, pb.full_dims);
  return pb;
}

ExtensionResiduals check_extension(const ExtensionProblem& pb, const Mat& ext) {
  ExtensionResiduals r;
  r.invariance = (ext - kernels::orbit_average(ext, pb.orbits)).norm();
  for (const auto& c : pb.marginals)
    r.marginal = std::max(r.marginal,
                          (c.target - kernels::partial_trace(ext, pb.full_dims, c.keep)).norm());
  Eigen::SelfAdjointEigenSolver<Mat> es(ext, Eigen::EigenvaluesOnly);
  r.psd = std::max(0.0, -es.eigenvalues().minCoeff());
  r.trace = std::abs(ext.trace() - Cplx(1.0, 0.0));
  return r;
}

FeasibilityResult solve_feasibility(const ExtensionProblem& pb, const SolverOptions& opts) {
  if (opts.tol <= 0.0) throw ArgumentError("solver tolerance must be positive");
  if (opts.max_iter < 1) throw ArgumentError("solver iteration cap must be positive");

  FeasibilityResult result;
  Mat a = pb.block_target;
  for (int b = 1; b < pb.level; ++b) a = kernels::kron(a, pb.block_target);
  project_affine(pb, a);
  Mat p = Mat::Zero(pb.total_dim, pb.total_dim);

  Eigen::SelfAdjointEigenSolver<Mat> es;
  double prev_gap = -1.0;
  int stall = 0;
  for (long it = 1; it <= opts.max_iter; ++it) {
    result.iterations = it;
    const Mat z = a + p;
    es.compute(z);
    const RVec clipped = es.eigenvalues().cwiseMax(0.0);
    const Mat y = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    p = z - y;
    a = y;
    project_affine(pb, a);
    const double gap = (y - a).norm();
    result.gap = gap;

    if (gap < opts.tol) {
      result.verdict = Feasibility::Feasible;
      const ExtensionResiduals res = check_extension(pb, a);
      result.cone_residual = res.psd;
      result.affine_residual = std::max({res.invariance, res.marginal, res.trace});
      result.extension = DensityOperator::trusted(pb.full_dims, a);
      return result;
    }

    const bool stalled =
        gap > 10.0 * opts.tol &&
        prev_gap >= 0.0 && std::abs(gap - prev_gap) <= std::max(1e-12, 1e-6 * gap);
    stall = stalled ? stall + 1 : 0;
    prev_gap = gap;
    if (stall >= opts.stall_window) {
      SeparationCertificate cert = make_certificate(pb, a, y, opts.seed);
      if (cert.valid) {
        result.verdict = Feasibility::Infeasible;
        result.certificate = std::move(cert);
        return result;
      }
      stall = 0;  // inconclusive certificate: keep iterating
    }
  }
  result.verdict = Feasibility::Undecided;
  return result;
}

int required_level(int k, const std::vector<int>& party_dims, double eps, Metric metric) {
  if (eps <= 0.0) throw ArgumentError("target accuracy must be positive");
  if (k < 1 || static_cast<int>(party_dims.size()) != k)
    throw ArgumentError("party dimension list must have k entries");
  double sum_ln = 0.0, sum_log2 = 0.0;
  for (int d : party_dims) {
    if (d < 1) throw ArgumentError("party dimensions must be positive");
    sum_ln += std::log(static_cast<double>(d));
    sum_log2 += std::log2(static_cast<double>(d));
  }
  const double kk = static_cast<double>(k - 1) * static_cast<double>(k - 1);
  const double raw = (metric == Metric::TraceNorm)
                         ? 2.0 * kk * sum_ln / (eps * eps) + k
                         : kk * sum_log2 / eps + k;
  if (raw > 1e9)
    throw ResourceError("required extension level exceeds any representable size");
  const long lvl = static_cast<long>(std::ceil(raw - 1e-9));
  return static_cast<int>(std::max<long>(lvl, k));
}

DistanceBounds extendible_distance_bounds(int k, int level, const std::vector<int>& party_dims) {
  if (static_cast<int>(party_dims.size()) != k)
    throw ArgumentError("party dimension list must have k entries");
  if (level <= k)
    throw ArgumentError("distance bounds need level > k (got level " + std::to_string(level) +
                        ", k " + std::to_string(k) + ")");
  double sum_ln = 0.0, sum_log2 = 0.0;
  for (int d : party_dims) {
    sum_ln += std::log(static_cast<double>(d));
    sum_log2 += std::log2(static_cast<double>(d));
  }
  const double kk = static_cast<double>(k - 1) * static_cast<double>(k - 1);
  DistanceBounds b;
  b.relent_bits = kk * sum_log2 / static_cast<double>(level - k);
  b.norm = std::sqrt(2.0 * kk * sum_ln / static_cast<double>(level - k));
  return b;
}

DetectionReport detect_entanglement(const DensityOperator& rho, double eps, Metric metric,
                                    const DetectOptions& opts) {
  if (eps <= 0.0) throw ArgumentError("target accuracy must be positive");
  const int k = rho.subsystems();
  if (k < 2) throw ArgumentError("entanglement detection needs at least two parties");

  DetectionReport report;
  report.epsilon = eps;
  report.metric = metric;
  int level = 0;
  if (opts.level_override > 0) {
    if (opts.level_override < k)
      throw ArgumentError("level override is below the party count");
    level = opts.level_override;
  } else {
    level = required_level(k, rho.dims(), eps, metric);
  }
  const double block_dim = static_cast<double>(rho.dim());
  if (std::pow(block_dim, level) > static_cast<double>(opts.max_dim)) {
    const int max_level =
        static_cast<int>(std::floor(std::log(static_cast<double>(opts.max_dim)) /
                                    std::log(block_dim) + 1e-12));
    throw ResourceError("detection level unreachable at desk scale: need level " +
                        std::to_string(level) + ", but dimension cap " +
                        std::to_string(opts.max_dim) + " admits at most level " +
                        std::to_string(max_level));
  }
  report.level = level;
  if (level > k) {
    report.effective = extendible_distance_bounds(k, level, rho.dims());
  } else {
    report.effective.relent_bits = std::numeric_limits<double>::infinity();
    report.effective.norm = std::numeric_limits<double>::infinity();
  }

  const ExtensionProblem pb = build_extension_problem(rho, k, level, ExtensionMode::FullMarginal,
                                                      opts.max_dim, opts.group_cap);
  report.feasibility = solve_feasibility(pb, opts.solver);
  switch (report.feasibility.verdict) {
    case Feasibility::Feasible:
      report.verdict = Verdict::SeparableWithinEps;
      break;
    case Feasibility::Infeasible:
      report.verdict = Verdict::Entangled;
      break;
    case Feasibility::Undecided:
      report.verdict = Verdict::Undecided;
      break;
  }
  return report;
}

}  // namespace qdf
