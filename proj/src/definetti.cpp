#include "qdf/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qdf/entropy.hpp"

namespace qdf {
namespace {

constexpr double kInvarianceTol = 1e-8;
constexpr double kMarginalTol = 1e-8;
constexpr double kMixtureTol = 1e-9;
constexpr double kWeightFloor = 1e-12;

std::vector<int> sorted_keep(const GroupingLayout& layout) {
  std::vector<int> keep{layout.isolated};
  for (const auto& g : layout.groups) keep.insert(keep.end(), g.begin(), g.end());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw ArgumentError("grouping layout reuses a subsystem index");
  return keep;
}

int index_of(const std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw ArgumentError("grouping layout index out of range");
  return static_cast<int>(it - v.begin());
}

// A weighted branch of the measured ensemble; `state` is normalized.
struct EnsembleBranch {
  double p = 0.0;
  Mat state;
};

// Mutable view of the partially measured state: dims shrink as blocks are
// measured, and the tracked positions are remapped after each removal.
struct Working {
  std::vector<EnsembleBranch> branches;
  std::vector<int> dims;
  int iso = 0;
  std::vector<std::vector<int>> blocks;  // positions per block; emptied once measured
};

Working make_working(const DensityOperator& rho, const GroupingLayout& layout) {
  const std::vector<int> keep = sorted_keep(layout);
  DensityOperator reduced = partial_trace(rho, keep);
  Working w;
  w.branches.push_back(EnsembleBranch{1.0, reduced.matrix()});
  w.dims = reduced.dims();
  w.iso = index_of(keep, layout.isolated);
  w.blocks.reserve(layout.groups.size());
  for (const auto& g : layout.groups) {
    std::vector<int> pos;
    pos.reserve(g.size());
    for (int idx : g) pos.push_back(index_of(keep, idx));
    w.blocks.push_back(std::move(pos));
  }
  return w;
}

// Remap a subsystem position after the (sorted) positions `removed` are gone.
int remap_after_removal(int pos, const std::vector<int>& removed) {
  int shift = 0;
  for (int r : removed) {
    if (r == pos) throw ArgumentError("grouping blocks overlap");
    if (r < pos) ++shift;
  }
  return pos - shift;
}

double entropy_of_normalized(const Mat& m, const std::vector<int>& dims) {
  return von_neumann(DensityOperator::trusted(dims, m));
}

// I(A;Z|previous outcomes) in bits for measuring `povm` on block `bpos`.
double conditional_term(const Working& w, const std::vector<int>& bpos, const Povm& povm) {
  std::vector<int> post_dims;
  for (int s = 0; s < static_cast<int>(w.dims.size()); ++s)
    if (std::find(bpos.begin(), bpos.end(), s) == bpos.end()) post_dims.push_back(w.dims[s]);
  const int iso_after = remap_after_removal(w.iso, bpos);
  const std::vector<int> dA{w.dims[w.iso]};
  double term = 0.0;
  for (const EnsembleBranch& br : w.branches) {
    if (br.p <= kWeightFloor) continue;
    const Mat a_marginal = kernels::partial_trace(br.state, w.dims, {w.iso});
    term += br.p * entropy_of_normalized(a_marginal, dA);
    for (const Mat& effect : povm.effects) {
      auto [prob, post] = measure_update(br.state, w.dims, bpos, effect);
      if (prob <= kWeightFloor) continue;
      const Mat a_cond = kernels::partial_trace(post, post_dims, {iso_after}) / prob;
      term -= br.p * prob * entropy_of_normalized(a_cond, dA);
    }
  }
  return term;
}

// Apply `povm` on block `block`, expanding every branch (row-major in the
// outcome index) and dropping the measured block from the tracked layout.
void apply_block_measurement(Working& w, int block, const Povm& povm) {
  const std::vector<int> bpos = w.blocks[block];
  std::vector<int> post_dims;
  for (int s = 0; s < static_cast<int>(w.dims.size()); ++s)
    if (std::find(bpos.begin(), bpos.end(), s) == bpos.end()) post_dims.push_back(w.dims[s]);
  std::vector<EnsembleBranch> next;
  next.reserve(w.branches.size() * povm.outcomes());
  for (const EnsembleBranch& br : w.branches) {
    for (const Mat& effect : povm.effects) {
      auto [prob, post] = measure_update(br.state, w.dims, bpos, effect);
      EnsembleBranch nb;
      nb.p = br.p * prob;
      nb.state = (prob > kWeightFloor) ? Mat(post / prob) : Mat(Mat::Zero(post.rows(), post.cols()));
      next.push_back(std::move(nb));
    }
  }
  w.branches = std::move(next);
  const int old_n = static_cast<int>(w.dims.size());
  w.iso = remap_after_removal(w.iso, bpos);
  for (int b = 0; b < static_cast<int>(w.blocks.size()); ++b) {
    if (b == block || w.blocks[b].empty()) continue;
    for (int& p : w.blocks[b]) p = remap_after_removal(p, bpos);
  }
  w.blocks[block].clear();
  std::vector<int> new_dims;
  for (int s = 0; s < old_n; ++s)
    if (std::find(bpos.begin(), bpos.end(), s) == bpos.end()) new_dims.push_back(w.dims[s]);
  w.dims = std::move(new_dims);
}

Mat kron_all(const std::vector<Mat>& factors) {
  Mat out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kernels::kron(out, factors[i]);
  return out;
}

// Single-site informationally complete POVM: qubit tetrahedron, otherwise a
// Weyl-Heisenberg covariant POVM with a fixed generic fiducial vector.
std::vector<Mat> ic_site_effects(int d) {
  std::vector<Mat> effects;
  if (d == 2) {
    const double s = 1.0 / std::sqrt(3.0);
    const double dirs[4][3] = {
        {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    Mat sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, Cplx(0, -1), Cplx(0, 1), 0;
    sz << 1, 0, 0, -1;
    for (const auto& nvec : dirs)
      effects.push_back(0.25 * (Mat::Identity(2, 2) + nvec[0] * sx + nvec[1] * sy + nvec[2] * sz));
    return effects;
  }
  Rng rng(0x5eedf00dULL ^ static_cast<std::uint64_t>(d));
  Vec fid(d);
  for (int i = 0; i < d; ++i) fid(i) = rng.cnormal();
  fid.normalize();
  const Cplx omega = std::exp(Cplx(0.0, 2.0 * M_PI / d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Vec shifted(d);
      for (int j = 0; j < d; ++j) shifted((j + a) % d) = std::pow(omega, j * b) * fid(j);
      effects.push_back((shifted * shifted.adjoint()) / static_cast<double>(d));
    }
  }
  return effects;
}

Povm ic_block_povm(const std::vector<int>& block_dims) {
  std::vector<std::vector<Mat>> site;
  site.reserve(block_dims.size());
  for (int d : block_dims) site.push_back(ic_site_effects(d));
  std::vector<int> counts;
  for (const auto& s : site) counts.push_back(static_cast<int>(s.size()));
  long total = 1;
  for (int c : counts) total *= c;
  Povm povm;
  povm.dims = block_dims;
  povm.effects.reserve(total);
  std::vector<int> tuple(site.size(), 0);
  for (long idx = 0; idx < total; ++idx) {
    std::vector<Mat> factors;
    factors.reserve(site.size());
    for (std::size_t j = 0; j < site.size(); ++j) factors.push_back(site[j][tuple[j]]);
    povm.effects.push_back(kron_all(factors));
    for (int j = static_cast<int>(site.size()) - 1; j >= 0; --j) {
      if (++tuple[j] < counts[j]) break;
      tuple[j] = 0;
    }
  }
  povm.validate(static_cast<int>(total));
  return povm;
}

Povm basis_povm_on_block(const Mat& u, const std::vector<int>& block_dims) {
  Povm povm = Povm::from_basis(u);
  povm.dims = block_dims;
  return povm;
}

}  // namespace

GroupingLayout make_grouping(int n, int k) {
  if (n < 1) throw ArgumentError("make_grouping: need at least one subsystem");
  if (k < 1) throw ArgumentError("make_grouping: fold must be positive");
  if (k > n) throw ArgumentError("make_grouping: fold " + std::to_string(k) +
                                 " exceeds subsystem count " + std::to_string(n));
  GroupingLayout layout;
  layout.n = n;
  layout.k = k;
  layout.isolated = 0;
  if (k == 1) {
    layout.m = n - 1;
    layout.groups.assign(layout.m, {});
    for (int s = 1; s < n; ++s) layout.discarded.push_back(s);
    return layout;
  }
  layout.m = (n - 1) / (k - 1);
  int next = 1;
  for (int b = 0; b < layout.m; ++b) {
    std::vector<int> g(k - 1);
    for (int j = 0; j < k - 1; ++j) g[j] = next++;
    layout.groups.push_back(std::move(g));
  }
  for (; next < n; ++next) layout.discarded.push_back(next);
  return layout;
}

SubsystemLayout GroupingLayout::to_subsystem_layout() const {
  SubsystemLayout out;
  out.parties.emplace_back("A", std::vector<int>{isolated});
  for (int b = 0; b < m; ++b)
    out.parties.emplace_back("B" + std::to_string(b + 1), groups[b]);
  out.discarded = discarded;
  return out;
}

double group_invariance_residual(const DensityOperator& rho,
                                 const std::vector<std::vector<int>>& groups) {
  if (groups.size() < 2) return 0.0;
  const int n = rho.subsystems();
  const std::size_t g = groups.front().size();
  for (const auto& grp : groups)
    if (grp.size() != g) throw ArgumentError("invariance check needs equal-size groups");
  std::vector<Perm> perms;
  Perm swap01 = identity_perm(n);
  for (std::size_t j = 0; j < g; ++j) {
    swap01[groups[0][j]] = groups[1][j];
    swap01[groups[1][j]] = groups[0][j];
  }
  perms.push_back(std::move(swap01));
  if (groups.size() > 2) {
    Perm cycle = identity_perm(n);
    for (std::size_t b = 0; b < groups.size(); ++b) {
      const auto& src = groups[b];
      const auto& dst = groups[(b + 1) % groups.size()];
      for (std::size_t j = 0; j < g; ++j) cycle[src[j]] = dst[j];
    }
    perms.push_back(std::move(cycle));
  }
  const double scale = std::max(1.0, rho.matrix().norm());
  double res = 0.0;
  for (const Perm& perm : perms) {
    const DensityOperator permuted = permute_subsystems(rho, perm);
    res = std::max(res, (rho.matrix() - permuted.matrix()).norm() / scale);
  }
  return res;
}

QStarResult find_qstar(const DensityOperator& rho, const GroupingLayout& layout,
                       const QStarOptions& opts) {
  if (layout.n != rho.subsystems())
    throw ArgumentError("grouping layout does not match the state's subsystem count");
  const double inv = group_invariance_residual(rho, layout.groups);
  if (inv > kInvarianceTol)
    throw ArgumentError("state is not invariant under block permutations (residual " +
                        std::to_string(inv) + ")");
  QStarResult result;
  if (layout.k == 1) {
    result.block_povms.assign(layout.m, Povm::trivial(1));
    result.chain_terms.assign(layout.m, 0.0);
    return result;
  }
  Working w = make_working(rho, layout);
  for (int b = 0; b < layout.m; ++b) {
    const std::vector<int> bpos = w.blocks[b];
    std::vector<int> block_dims;
    for (int p : bpos) block_dims.push_back(w.dims[p]);
    Povm best;
    double best_term = -std::numeric_limits<double>::infinity();
    if (opts.ic_fallback) {
      best = ic_block_povm(block_dims);
      best_term = conditional_term(w, bpos, best);
    } else {
      const int dblk = static_cast<int>(product_dim(block_dims));
      const auto objective = [&](const Mat& u) {
        return conditional_term(w, bpos, basis_povm_on_block(u, block_dims));
      };
      const int restarts = std::max(1, opts.restarts);
      for (int r = 0; r < restarts; ++r) {
        Mat u0;
        if (r == 0) {
          u0 = Mat::Identity(dblk, dblk);
        } else {
          Rng rng = Rng::derive(opts.seed, 1000ULL * (b + 1) + r);
          u0 = random_unitary(dblk, rng);
        }
        const Mat u = ascend_unitary(objective, std::move(u0), std::max(1, opts.iters));
        const double val = objective(u);
        if (val > best_term) {
          best_term = val;
          best = basis_povm_on_block(u, block_dims);
        }
      }
    }
    result.block_povms.push_back(best);
    result.chain_terms.push_back(best_term);
    apply_block_measurement(w, b, best);
  }
  result.chain_sum = 0.0;
  for (double t : result.chain_terms) result.chain_sum += t;
  result.argmin_block = 0;
  for (int b = 1; b < layout.m; ++b)
    if (result.chain_terms[b] < result.chain_terms[result.argmin_block]) result.argmin_block = b;
  result.score = result.chain_terms[result.argmin_block];
  return result;
}

ChainEvaluation evaluate_chain(const DensityOperator& rho, const GroupingLayout& layout,
                               const std::vector<Povm>& block_povms) {
  if (static_cast<int>(block_povms.size()) != layout.m)
    throw ArgumentError("need exactly one measurement per block");
  ChainEvaluation ev;
  if (layout.k == 1) {
    ev.terms.assign(layout.m, 0.0);
    return ev;
  }
  Working w = make_working(rho, layout);
  const std::vector<int> dA{w.dims[w.iso]};
  const double s_a_initial =
      entropy_of_normalized(kernels::partial_trace(w.branches.front().state, w.dims, {w.iso}), dA);
  for (int b = 0; b < layout.m; ++b) {
    ev.terms.push_back(conditional_term(w, w.blocks[b], block_povms[b]));
    apply_block_measurement(w, b, block_povms[b]);
  }
  for (double t : ev.terms) ev.sum += t;
  double conditional = 0.0;
  for (const EnsembleBranch& br : w.branches) {
    if (br.p <= kWeightFloor) continue;
    conditional += br.p * entropy_of_normalized(br.state, dA);
  }
  ev.joint_mi = s_a_initial - conditional;
  return ev;
}

DeFinettiCandidate build_candidate(const DensityOperator& rho, int k,
                                   const GroupingLayout& layout, const QStarResult& qstar) {
  if (layout.k != k) throw ArgumentError("grouping layout fold does not match k");
  if (static_cast<int>(qstar.block_povms.size()) != layout.m)
    throw ArgumentError("measurement selection does not match the grouping layout");
  DeFinettiCandidate cand;
  cand.fold = k;
  if (k == 1) {
    DensityOperator a = partial_trace(rho, {layout.isolated});
    cand.weights = RVec::Ones(1);
    cand.components.push_back(a);
    cand.joint_components.push_back(a);
    return cand;
  }
  Working w = make_working(rho, layout);
  const std::vector<int> target_dims = w.dims;  // before any measurement
  std::vector<int> target_keep{w.iso};
  for (int p : w.blocks[qstar.argmin_block]) target_keep.push_back(p);
  std::sort(target_keep.begin(), target_keep.end());
  const Mat reduced_target = kernels::partial_trace(w.branches.front().state, target_dims, target_keep);

  for (int b = 0; b < layout.m; ++b) {
    if (b == qstar.argmin_block) continue;
    apply_block_measurement(w, b, qstar.block_povms[b]);
  }
  // Branches now live on the isolated subsystem plus the kept block.
  const std::vector<int> joint_dims = w.dims;
  const int iso_pos = w.iso;
  Mat mixture = Mat::Zero(reduced_target.rows(), reduced_target.cols());
  for (const EnsembleBranch& br : w.branches) mixture += br.p * br.state;
  cand.mixture_residual = (mixture - reduced_target).norm();
  if (cand.mixture_residual > kMixtureTol)
    throw ArgumentError("measured ensemble does not average back to the reduced state (residual " +
                        std::to_string(cand.mixture_residual) + ")");

  std::vector<double> weights;
  for (const EnsembleBranch& br : w.branches) {
    if (br.p < kWeightFloor) continue;
    weights.push_back(br.p);
    DensityOperator joint = DensityOperator::trusted(joint_dims, br.state);
    DensityOperator comp = partial_trace(joint, {iso_pos});
    for (int s = 0; s < static_cast<int>(joint_dims.size()); ++s) {
      if (s == iso_pos) continue;
      const Mat site = kernels::partial_trace(br.state, joint_dims, {s});
      cand.marginal_deviation =
          std::max(cand.marginal_deviation, (site - comp.matrix()).norm());
    }
    cand.joint_components.push_back(std::move(joint));
    cand.components.push_back(std::move(comp));
  }
  if (weights.empty()) throw ArgumentError("all measurement outcomes have negligible weight");
  if (cand.marginal_deviation > kMarginalTol)
    throw ArgumentError("single-system marginals of a measured branch disagree (deviation " +
                        std::to_string(cand.marginal_deviation) + ")");
  double total = 0.0;
  for (double p : weights) total += p;
  cand.weights = RVec(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) cand.weights(static_cast<int>(i)) = weights[i] / total;
  return cand;
}

DensityOperator assemble_candidate(const DeFinettiCandidate& cand) {
  if (cand.components.empty()) throw ArgumentError("empty candidate ensemble");
  const std::vector<int> site_dims = cand.components.front().dims();
  std::vector<int> dims;
  for (int f = 0; f < cand.fold; ++f) dims.insert(dims.end(), site_dims.begin(), site_dims.end());
  const long dim = product_dim(dims);
  Mat sum = Mat::Zero(dim, dim);
  for (int i = 0; i < static_cast<int>(cand.components.size()); ++i) {
    Mat fold_mat = cand.components[i].matrix();
    for (int f = 1; f < cand.fold; ++f) fold_mat = kernels::kron(fold_mat, cand.components[i].matrix());
    sum += cand.weights(i) * fold_mat;
  }
  return DensityOperator(dims, sum);
}

TheoremBounds theorem_bounds(int n, int k, int dA) {
  if (n < 1 || k < 0) throw ArgumentError("bounds need n >= 1 and k >= 0");
  if (k >= n)
    throw ArgumentError("bounds need k < n (got k = " + std::to_string(k) +
                        ", n = " + std::to_string(n) + ")");
  if (dA < 1) throw ArgumentError("bounds need a positive local dimension");
  TheoremBounds b;
  const double kk = static_cast<double>(k - 1) * static_cast<double>(k - 1);
  b.relent_bits = kk * std::log2(static_cast<double>(dA)) / static_cast<double>(n - k);
  b.norm = std::sqrt(2.0 * kk * std::log(static_cast<double>(dA)) / static_cast<double>(n - k));
  return b;
}

TheoremReport verify_theorem(const DensityOperator& rho, int k, const VerifyOptions& opts) {
  const int n = rho.subsystems();
  for (int d : rho.dims())
    if (d != rho.dims().front())
      throw ArgumentError("verification needs identical subsystem dimensions");
  TheoremReport rep;
  rep.n = n;
  rep.k = k;
  rep.dA = rho.dims().front();
  rep.bounds = theorem_bounds(n, k, rep.dA);
  const GroupingLayout layout = make_grouping(n, k);
  rep.m = layout.m;
  rep.score_ceiling = (k >= 2) ? std::log2(static_cast<double>(rep.dA)) / layout.m : 0.0;
  rep.invariance_residual = group_invariance_residual(rho, layout.groups);
  if (k == 1) {
    rep.components = 1;
    rep.norm_converged = rep.relent_converged = true;
    rep.pass = true;
    return rep;
  }

  QStarOptions qopts = opts.qstar;
  qopts.seed = Rng::derive(opts.seed, 11).next_u64();
  const QStarResult qstar = find_qstar(rho, layout, qopts);
  rep.qstar_score = qstar.score;

  const DeFinettiCandidate cand = build_candidate(rho, k, layout, qstar);
  rep.components = static_cast<int>(cand.weights.size());
  const DensityOperator sigma = assemble_candidate(cand);

  std::vector<int> keep{layout.isolated};
  for (int idx : layout.groups[qstar.argmin_block]) keep.push_back(idx);
  std::sort(keep.begin(), keep.end());
  const DensityOperator target = partial_trace(rho, keep);

  SeesawOptions nopts;
  nopts.restarts = opts.seesaw_restarts;
  nopts.iters = opts.seesaw_iters;
  nopts.seed = Rng::derive(opts.seed, 12).next_u64();
  const SeesawResult norm_res =
      restricted_norm(target, sigma, MeasurementClass::OneWayFull, nopts);
  rep.distance_estimate = norm_res.value;
  rep.norm_converged = norm_res.converged;

  SeesawOptions ropts;
  ropts.restarts = opts.seesaw_restarts;
  ropts.iters = opts.seesaw_iters;
  ropts.seed = Rng::derive(opts.seed, 13).next_u64();
  ropts.init = &norm_res.witness;
  const SeesawResult rel_res =
      restricted_relative_entropy(target, sigma, MeasurementClass::OneWayFull, ropts);
  rep.relent_estimate_bits = rel_res.value;
  rep.relent_infinite = rel_res.value_infinite;
  rep.relent_converged = rel_res.converged;

  rep.pass = !rep.relent_infinite &&
             rep.distance_estimate <= rep.bounds.norm + 1e-6 &&
             rep.relent_estimate_bits <= rep.bounds.relent_bits + 1e-6;
  return rep;
}

}  // namespace qdf
