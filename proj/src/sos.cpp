#include "qdf/sos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdf/measurement.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {
namespace {

// Contract one tensor slot of m (all slots of dimension d) with the rank-one
// operator |v><v|: out(r, c) = sum_{a,b} conj(v_a) v_b m(r^a, c^b), where r^a
// reinserts digit a at `slot`.
Mat contract_vector_slot(const Mat& m, int d, int slots, int slot, const Vec& v) {
  const long side = m.rows();
  const long out_side = side / d;
  long lo_stride = 1;
  for (int s = slot + 1; s < slots; ++s) lo_stride *= d;
  const long hi = out_side / lo_stride;
  Mat out = Mat::Zero(out_side, out_side);
  for (long rh = 0; rh < hi; ++rh)
    for (long rl = 0; rl < lo_stride; ++rl) {
      const long r = rh * lo_stride + rl;
      for (long ch = 0; ch < hi; ++ch)
        for (long cl = 0; cl < lo_stride; ++cl) {
          const long c = ch * lo_stride + cl;
          Cplx acc(0.0, 0.0);
          for (int a = 0; a < d; ++a) {
            const long row = (rh * d + a) * lo_stride + rl;
            for (int b = 0; b < d; ++b) {
              const long col = (ch * d + b) * lo_stride + cl;
              acc += std::conj(v(a)) * v(b) * m(row, col);
            }
          }
          out(r, c) = acc;
        }
    }
  return out;
}

// Contract one slot with a density matrix: out(r, c) = sum_{a,b} sigma(b, a) m(r^a, c^b).
Mat contract_density_slot(const Mat& m, int d, int slots, int slot, const Mat& sigma) {
  const long side = m.rows();
  const long out_side = side / d;
  long lo_stride = 1;
  for (int s = slot + 1; s < slots; ++s) lo_stride *= d;
  const long hi = out_side / lo_stride;
  Mat out = Mat::Zero(out_side, out_side);
  for (long rh = 0; rh < hi; ++rh)
    for (long rl = 0; rl < lo_stride; ++rl) {
      const long r = rh * lo_stride + rl;
      for (long ch = 0; ch < hi; ++ch)
        for (long cl = 0; cl < lo_stride; ++cl) {
          const long c = ch * lo_stride + cl;
          Cplx acc(0.0, 0.0);
          for (int a = 0; a < d; ++a) {
            const long row = (rh * d + a) * lo_stride + rl;
            for (int b = 0; b < d; ++b) {
              const long col = (ch * d + b) * lo_stride + cl;
              acc += sigma(b, a) * m(row, col);
            }
          }
          out(r, c) = acc;
        }
    }
  return out;
}

// Objective value tr(M sigma^{(x) k}).
double iid_value(const Mat& m, int d, int k, const Mat& sigma) {
  Mat cur = m;
  for (int slot = k - 1; slot >= 1; --slot) cur = contract_density_slot(cur, d, slot + 1, slot, sigma);
  // One slot left: value = tr(cur sigma).
  return (cur * sigma).trace().real();
}

// Hermitian part of the gradient of tr(M sigma^{(x) k}) with respect to sigma.
Mat iid_gradient(const Mat& m, int d, int k, const Mat& sigma) {
  Mat grad = Mat::Zero(d, d);
  for (int j = 0; j < k; ++j) {
    Mat cur = m;
    int slots = k;
    for (int slot = k - 1; slot >= 0; --slot) {
      if (slot == j) continue;
      cur = contract_density_slot(cur, d, slots, slot, sigma);
      --slots;
    }
    grad += cur;
  }
  return 0.5 * (grad + grad.adjoint()).eval();
}

struct EmbeddedObjective {
  std::vector<int> full_dims;
  std::vector<Perm> generators;
  Mat twirled;
};

EmbeddedObjective embed_and_twirl(const SphereProblem& p, int level, long max_dim) {
  const int d = p.local_dim;
  const int k = p.fold;
  EmbeddedObjective out;
  std::vector<int> positions;
  if (p.variant == SphereVariant::SingleSphere) {
    if (level < k)
      throw ArgumentError("single-sphere relaxation needs level >= the objective's fold");
    out.full_dims.assign(level, d);
    for (int j = 0; j < k; ++j) positions.push_back(j);
    out.generators = symmetric_group_generators(level);
  } else {
    if (level < 1) throw ArgumentError("relaxation level must be positive");
    out.full_dims.assign(static_cast<std::size_t>(k) * level, d);
    for (int i = 0; i < k; ++i) positions.push_back(i * level);
    const int n_sub = k * level;
    for (int i = 0; i < k; ++i) {
      if (level == 1) break;
      Perm swap01 = identity_perm(n_sub);
      swap01[i * level] = i * level + 1;
      swap01[i * level + 1] = i * level;
      out.generators.push_back(std::move(swap01));
      if (level > 2) {
        Perm cycle = identity_perm(n_sub);
        for (int b = 0; b < level; ++b) cycle[i * level + b] = i * level + (b + 1) % level;
        out.generators.push_back(std::move(cycle));
      }
    }
  }
  const double total = std::pow(static_cast<double>(d), static_cast<double>(out.full_dims.size()));
  if (total > static_cast<double>(max_dim))
    throw ResourceError("relaxation level unreachable at desk scale: dimension " +
                        std::to_string(static_cast<long long>(total)) + " exceeds the cap " +
                        std::to_string(max_dim));
  const long dim = product_dim(out.full_dims);
  Mat embedded = Mat::Zero(dim, dim);
  kernels::add_embedded_identity(embedded, p.objective, out.full_dims, positions, Cplx(1.0, 0.0));
  if (out.generators.empty()) {
    out.twirled = std::move(embedded);
  } else {
    const kernels::OrbitTable table = build_orbit_table(out.generators, out.full_dims);
    out.twirled = kernels::orbit_average(embedded, table);
  }
  return out;
}

}  // namespace

void SphereProblem::validate() const {
  if (local_dim < 2) throw ArgumentError("sphere problems need local dimension >= 2");
  if (fold < 1) throw ArgumentError("sphere problems need fold >= 1");
  const long side = product_dim(std::vector<int>(fold, local_dim));
  if (objective.rows() != side || objective.cols() != side)
    throw ArgumentError("objective must act on (C^d)^k, expected side " + std::to_string(side));
  const double herm = (objective - objective.adjoint()).norm();
  if (herm > defaults::kHermTol * std::max(1.0, objective.norm()))
    throw ArgumentError("objective must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(objective, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -defaults::kPsdTol)
    throw ArgumentError("objective must be positive semidefinite");
  if (es.eigenvalues().maxCoeff() > 1.0 + defaults::kPsdTol)
    throw ArgumentError("objective must be bounded by the identity");
}

RelaxResult relax(const SphereProblem& p, int level, long max_dim) {
  p.validate();
  EmbeddedObjective eo = embed_and_twirl(p, level, max_dim);
  Eigen::SelfAdjointEigenSolver<Mat> es(eo.twirled);
  const long dim = eo.twirled.rows();
  const double value = es.eigenvalues()(dim - 1);
  const Vec top = es.eigenvectors().col(dim - 1);
  Mat proj = top * top.adjoint();
  if (!eo.generators.empty()) {
    const kernels::OrbitTable table = build_orbit_table(eo.generators, eo.full_dims);
    proj = kernels::orbit_average(proj, table);
  }
  return RelaxResult{value, DensityOperator::trusted(eo.full_dims, std::move(proj)), level};
}

double relax_power_value(const SphereProblem& p, int level, long iters, double tol, long max_dim) {
  p.validate();
  if (iters < 1) throw ArgumentError("power iteration needs a positive iteration budget");
  EmbeddedObjective eo = embed_and_twirl(p, level, max_dim);
  const long dim = eo.twirled.rows();
  Vec v(dim);
  for (long i = 0; i < dim; ++i) v(i) = Cplx(1.0 + 1e-3 * static_cast<double>(i % 7), 0.0);
  v.normalize();
  double lambda = 0.0;
  for (long it = 0; it < iters; ++it) {
    Vec w = eo.twirled * v;
    const double next = w.norm();
    if (next < 1e-300) return 0.0;  // objective annihilates the start vector
    w /= next;
    const double rayleigh = std::real((w.adjoint() * eo.twirled * w)(0, 0));
    if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::max(1.0, std::abs(rayleigh))) {
      return rayleigh;
    }
    lambda = rayleigh;
    v = std::move(w);
  }
  return lambda;
}

OracleResult product_oracle(const SphereProblem& p, const ProductOracleOptions& opts) {
  p.validate();
  if (opts.restarts < 1 || opts.iters < 1)
    throw ArgumentError("product oracle needs positive restart and iteration budgets");
  const int d = p.local_dim;
  const int k = p.fold;
  OracleResult best;
  best.value = -std::numeric_limits<double>::infinity();

  if (p.variant == SphereVariant::IndependentSpheres) {
    for (int r = 0; r < opts.restarts; ++r) {
      std::vector<Vec> alpha(k);
      Rng rng = Rng::derive(opts.seed, 101 + r);
      for (int i = 0; i < k; ++i) {
        if (r == 0) {
          alpha[i] = Vec::Zero(d);
          alpha[i](0) = 1.0;
        } else {
          alpha[i] = Vec(d);
          for (int a = 0; a < d; ++a) alpha[i](a) = rng.cnormal();
          alpha[i].normalize();
        }
      }
      double value = 0.0;
      for (int sweep = 0; sweep < opts.iters; ++sweep) {
        double prev = value;
        for (int j = 0; j < k; ++j) {
          Mat cur = p.objective;
          int slots = k;
          for (int slot = k - 1; slot >= 0; --slot) {
            if (slot == j) continue;
            cur = contract_vector_slot(cur, d, slots, slot, alpha[slot]);
            --slots;
          }
          Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (cur + cur.adjoint()).eval());
          value = es.eigenvalues()(d - 1);
          alpha[j] = es.eigenvectors().col(d - 1);
        }
        if (sweep > 0 && value - prev <= 1e-13 * std::max(1.0, std::abs(value))) break;
      }
      if (value > best.value) {
        best.value = value;
        best.unit_vectors = alpha;
      }
    }
    return best;
  }

  // Single sphere: ascend over the purification B with sigma = B B^dagger.
  for (int r = 0; r < opts.restarts; ++r) {
    Mat b(d, d);
    if (r == 0) {
      b = Mat::Identity(d, d) / std::sqrt(static_cast<double>(d));
    } else if (r == 1) {
      b = Mat::Zero(d, d);
      b(0, 0) = 1.0;
    } else {
      Rng rng = Rng::derive(opts.seed, 202 + r);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = rng.cnormal();
      b /= b.norm();
    }
    Mat sigma = b * b.adjoint();
    double value = iid_value(p.objective, d, k, sigma);
    double step = 1.0;
    for (int it = 0; it < opts.iters; ++it) {
      const Mat grad = iid_gradient(p.objective, d, k, sigma);
      bool improved = false;
      double eta = step;
      for (int half = 0; half < 25; ++half) {
        Mat cand = b + eta * grad * b;
        cand /= cand.norm();
        const Mat cand_sigma = cand * cand.adjoint();
        const double cand_value = iid_value(p.objective, d, k, cand_sigma);
        if (cand_value > value + 1e-15) {
          b = std::move(cand);
          sigma = cand_sigma;
          value = cand_value;
          step = eta * 2.0;
          improved = true;
          break;
        }
        eta *= 0.5;
      }
      if (!improved) break;
    }
    if (value > best.value) {
      best.value = value;
      best.sphere_state = sigma;
    }
  }
  return best;
}

double gap_bound(int k, int d, int level) {
  if (d < 2) throw ArgumentError("gap bound needs local dimension >= 2");
  if (level <= k)
    throw ArgumentError("gap bound needs level > fold (got level " + std::to_string(level) +
                        ", fold " + std::to_string(k) + ")");
  const double kk = static_cast<double>(k - 1) * static_cast<double>(k - 1);
  return std::sqrt(kk * std::log(static_cast<double>(d)) /
                   (2.0 * static_cast<double>(level - k)));
}

SandwichReport sandwich_check(const SphereProblem& p, int level,
                              const ProductOracleOptions& opts, long max_dim) {
  SandwichReport rep;
  rep.level = level;
  rep.relax_value = relax(p, level, max_dim).value;
  rep.oracle_value = product_oracle(p, opts).value;
  rep.gap_bound_value = (level > p.fold)
                            ? gap_bound(p.fold, p.local_dim, level)
                            : std::numeric_limits<double>::infinity();
  rep.lower_ok = rep.oracle_value <= rep.relax_value + 1e-8;
  rep.gap_ok = rep.relax_value - rep.oracle_value <= rep.gap_bound_value + 1e-6;
  rep.guarantee_conditional = p.locc_flag;
  return rep;
}

}  // namespace qdf
