#include "qdf/measurement.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qdf {

void Povm::validate(int outcome_cap) const {
  if (effects.empty()) throw ArgumentError("Povm: no effects");
  if (outcomes() > outcome_cap)
    throw ArgumentError("Povm: outcome count " + std::to_string(outcomes()) +
                        " exceeds cap " + std::to_string(outcome_cap));
  const long d = dim();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& e : effects) {
    if (e.rows() != d || e.cols() != d) throw ArgumentError("Povm: effect side mismatch");
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
      throw ArgumentError("Povm: effect not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -defaults::kPsdTol)
      throw ArgumentError("Povm: effect not PSD");
    sum += e;
  }
  if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > defaults::kPovmSumTol)
    throw ArgumentError("Povm: effects do not sum to identity");
}

Povm Povm::computational(int d) {
  Povm p;
  p.dims = {d};
  for (int i = 0; i < d; ++i) {
    Mat e = Mat::Zero(d, d);
    e(i, i) = 1.0;
    p.effects.push_back(std::move(e));
  }
  return p;
}

Povm Povm::from_basis(const Mat& unitary) {
  const long d = unitary.rows();
  if (unitary.cols() != d) throw ArgumentError("Povm::from_basis: matrix not square");
  Povm p;
  p.dims = {static_cast<int>(d)};
  for (long i = 0; i < d; ++i) p.effects.push_back(unitary.col(i) * unitary.col(i).adjoint());
  return p;
}

Povm Povm::binary(const Mat& effect) {
  Povm p;
  p.dims = {static_cast<int>(effect.rows())};
  p.effects = {effect, Mat::Identity(effect.rows(), effect.cols()) - effect};
  return p;
}

Povm Povm::trivial(int d) {
  Povm p;
  p.dims = {d};
  p.effects = {Mat::Identity(d, d)};
  return p;
}

std::vector<int> AdaptiveMeasurementTree::level_outcomes() const {
  std::vector<int> out;
  const TreeNode* node = &root;
  for (int t = 0; t < parties(); ++t) {
    out.push_back(node->povm.outcomes());
    if (!node->children.empty()) node = &node->children.front();
  }
  return out;
}

namespace {
void validate_node(const TreeNode& node, const std::vector<int>& party_dims, int depth,
                   const std::vector<int>& level, int outcome_cap) {
  if (depth >= static_cast<int>(party_dims.size()))
    throw ArgumentError("AdaptiveMeasurementTree: path longer than party list");
  node.povm.validate(outcome_cap);
  if (node.povm.dim() != party_dims[depth])
    throw ArgumentError("AdaptiveMeasurementTree: node dimension does not match its party");
  if (node.povm.outcomes() != level[depth])
    throw ArgumentError("AdaptiveMeasurementTree: non-uniform branching at one level");
  const bool last = depth + 1 == static_cast<int>(party_dims.size());
  if (last) {
    if (!node.children.empty())
      throw ArgumentError("AdaptiveMeasurementTree: children below the last party");
    return;
  }
  if (static_cast<int>(node.children.size()) != node.povm.outcomes())
    throw ArgumentError("AdaptiveMeasurementTree: child count must equal outcome count");
  for (const TreeNode& c : node.children) validate_node(c, party_dims, depth + 1, level, outcome_cap);
}
}  // namespace

void AdaptiveMeasurementTree::validate(int outcome_cap) const {
  if (party_dims.empty()) throw ArgumentError("AdaptiveMeasurementTree: empty party list");
  validate_node(root, party_dims, 0, level_outcomes(), outcome_cap);
}

bool class_contains(MeasurementClass outer, MeasurementClass inner) {
  auto rank = [](MeasurementClass c) {
    switch (c) {
      case MeasurementClass::LO: return 0;
      case MeasurementClass::OneWayParallel: return 1;
      case MeasurementClass::OneWayFull: return 2;
      case MeasurementClass::All: return 3;
    }
    return 3;
  };
  return rank(outer) >= rank(inner);
}

RVec outcome_probabilities(const Povm& povm, const Mat& rho) {
  if (rho.rows() != povm.dim()) throw ArgumentError("outcome_probabilities: dimension mismatch");
  RVec p(povm.outcomes());
  for (int x = 0; x < povm.outcomes(); ++x)
    p(x) = (povm.effects[x].adjoint() * rho).trace().real();
  return p;
}

DensityOperator apply_channel(const MeasurementChannel& channel, const DensityOperator& rho) {
  if (channel.povm.dim() != rho.dim())
    throw ArgumentError("apply_channel: measurement does not match state dimension");
  const RVec p = outcome_probabilities(channel.povm, rho.matrix());
  Mat diag = Mat::Zero(p.size(), p.size());
  for (long i = 0; i < p.size(); ++i) diag(i, i) = std::max(0.0, p(i));
  return DensityOperator::trusted({static_cast<int>(p.size())}, std::move(diag));
}

namespace {

// tr_0((E (x) I) m) for m on `dims`; the result lives on dims[1..].
Mat condition_first(const Mat& m, const std::vector<int>& dims, const Mat& e) {
  const int d0 = dims[0];
  const long rest = m.rows() / d0;
  Mat out = Mat::Zero(rest, rest);
  for (int a = 0; a < d0; ++a)
    for (int b = 0; b < d0; ++b) {
      const Cplx w = e(a, b);
      if (w == Cplx(0.0, 0.0)) continue;
      out.noalias() += w * m.block(b * rest, a * rest, rest, rest);
    }
  return out;
}

void walk_probabilities(const TreeNode& node, const std::vector<int>& dims, int depth,
                        const Mat& omega, double* out, long stride_index, long stride_step,
                        const std::vector<int>& level) {
  const bool last = depth + 1 == static_cast<int>(dims.size());
  const long next_step = stride_step / level[depth];
  for (int x = 0; x < node.povm.outcomes(); ++x) {
    if (last) {
      out[stride_index + x * next_step] = (node.povm.effects[x].adjoint() * omega).trace().real();
      continue;
    }
    std::vector<int> rest(dims.begin() + depth, dims.end());
    Mat child = condition_first(omega, rest, node.povm.effects[x]);
    walk_probabilities(node.children[x], dims, depth + 1, child, out,
                       stride_index + x * next_step, next_step, level);
  }
}

}  // namespace

RVec tree_probabilities(const AdaptiveMeasurementTree& tree, const DensityOperator& rho) {
  if (rho.dims() != tree.party_dims)
    throw ArgumentError("tree_probabilities: state subsystems must match party dimensions");
  const auto level = tree.level_outcomes();
  long total = 1;
  for (int o : level) total *= o;
  RVec p = RVec::Zero(total);
  walk_probabilities(tree.root, tree.party_dims, 0, rho.matrix(), p.data(), 0, total, level);
  return p;
}

DensityOperator apply_channel(const AdaptiveMeasurementTree& tree, const DensityOperator& rho) {
  const RVec p = tree_probabilities(tree, rho);
  Mat diag = Mat::Zero(p.size(), p.size());
  for (long i = 0; i < p.size(); ++i) diag(i, i) = std::max(0.0, p(i));
  return DensityOperator::trusted(tree.level_outcomes(), std::move(diag));
}

namespace {
void walk_branches(const TreeNode& node, const std::vector<int>& dims, int depth, int stop,
                   const Mat& omega, double prob_so_far, std::vector<Branch>* out) {
  if (depth == stop) {
    const double tr = omega.trace().real();
    Branch b;
    b.prob = prob_so_far * std::max(0.0, tr);
    b.cond = (tr > 1e-15) ? Mat(omega / tr) : Mat(Mat::Zero(omega.rows(), omega.cols()));
    out->push_back(std::move(b));
    return;
  }
  std::vector<int> rest(dims.begin() + depth, dims.end());
  for (int x = 0; x < node.povm.outcomes(); ++x) {
    Mat child = condition_first(omega, rest, node.povm.effects[x]);
    walk_branches(node.children.empty() ? node : node.children[x], dims, depth + 1, stop, child,
                  prob_so_far, out);
  }
}
}  // namespace

std::vector<Branch> tree_branches(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                                  int depth) {
  if (rho.dims() != tree.party_dims)
    throw ArgumentError("tree_branches: state subsystems must match party dimensions");
  if (depth < 1 || depth >= tree.parties())
    throw ArgumentError("tree_branches: depth must leave at least one unmeasured party");
  std::vector<Branch> out;
  // Conditioning keeps unnormalized operators; prob_so_far stays 1 and the
  // branch probability is the trace that survives the conditioning chain.
  walk_branches(tree.root, tree.party_dims, 0, depth, rho.matrix(), 1.0, &out);
  return out;
}

namespace {
TreeNode truncate_node(const TreeNode& node, int levels_left) {
  TreeNode out;
  out.povm = node.povm;
  if (levels_left > 1)
    for (const TreeNode& c : node.children) out.children.push_back(truncate_node(c, levels_left - 1));
  return out;
}
}  // namespace

AdaptiveMeasurementTree reduced_measurement(const AdaptiveMeasurementTree& tree, int l) {
  if (l < 1 || l > tree.parties())
    throw ArgumentError("reduced_measurement: level out of range");
  AdaptiveMeasurementTree out;
  out.party_dims.assign(tree.party_dims.begin(), tree.party_dims.begin() + l);
  out.root = truncate_node(tree.root, l);
  return out;
}

ChainIdentityReport chain_identity(const AdaptiveMeasurementTree& tree, const DensityOperator& rho) {
  tree.validate();
  const int k = tree.parties();
  if (k < 2) throw ArgumentError("chain_identity: needs at least two parties");
  if (rho.dims() != tree.party_dims)
    throw ArgumentError("chain_identity: state subsystems must match party dimensions");

  ChainIdentityReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool infinite = false;

  // Single-party marginals and their running tensor products.
  std::vector<DensityOperator> marg;
  for (int s = 0; s < k; ++s) marg.push_back(partial_trace(rho, {s}));
  std::vector<Mat> prod(k);  // prod[l] = marg_0 (x) ... (x) marg_l
  prod[0] = marg[0].matrix();
  for (int l = 1; l < k; ++l) prod[l] = kernels::kron(prod[l - 1], marg[l].matrix());

  const RVec pk = tree_probabilities(tree, rho);
  std::vector<int> dims_all = tree.party_dims;
  const RVec qk = tree_probabilities(tree, DensityOperator::trusted(dims_all, prod[k - 1]));
  RelEntropy lhs = classical_relative_entropy(pk, qk);
  rep.lhs_bits = lhs.bits;
  infinite |= lhs.infinite;

  std::vector<int> first_l;
  double sum = 0.0;
  for (int l = 2; l <= k; ++l) {
    first_l.resize(l);
    for (int s = 0; s < l; ++s) first_l[s] = s;
    const AdaptiveMeasurementTree tl = reduced_measurement(tree, l);
    const DensityOperator rl = partial_trace(rho, first_l);
    // hybrid: joint state of the first l-1 systems, product with the l-th marginal
    std::vector<int> head(first_l.begin(), first_l.end() - 1);
    const Mat hybrid = kernels::kron(partial_trace(rho, head).matrix(), marg[l - 1].matrix());
    const RVec pl = tree_probabilities(tl, rl);
    const RVec ql = tree_probabilities(tl, DensityOperator::trusted(rl.dims(), hybrid));
    RelEntropy step = classical_relative_entropy(pl, ql);
    infinite |= step.infinite;
    rep.step_bits.push_back(step.bits);
    sum += step.bits;
  }
  rep.residual = std::abs(rep.lhs_bits - sum);

  // One-step decompositions at the last party.  T = sum_x p_x D(M_x(cond_x) || M_x(marg_k)).
  const auto branches = tree_branches(tree, rho, k - 1);
  const auto leaves = [&] {
    std::vector<const TreeNode*> nodes;
    std::vector<const TreeNode*> frontier{&tree.root};
    for (int t = 0; t < k - 1; ++t) {
      std::vector<const TreeNode*> next;
      for (const TreeNode* n : frontier)
        for (const TreeNode& c : n->children) next.push_back(&c);
      frontier = std::move(next);
    }
    return frontier;
  }();
  double t_sum = 0.0;
  for (size_t h = 0; h < branches.size(); ++h) {
    if (branches[h].prob < defaults::kEigCutoff) continue;
    const RVec a = outcome_probabilities(leaves[h]->povm, branches[h].cond);
    const RVec b = outcome_probabilities(leaves[h]->povm, marg[k - 1].matrix());
    RelEntropy d = classical_relative_entropy(a, b);
    infinite |= d.infinite;
    t_sum += branches[h].prob * d.bits;
  }

  // Full chain vs (k-1)-party chain plus conditional last-step terms.
  {
    const AdaptiveMeasurementTree thead = reduced_measurement(tree, k - 1);
    std::vector<int> head(k - 1);
    for (int s = 0; s < k - 1; ++s) head[s] = s;
    const DensityOperator rhead = partial_trace(rho, head);
    const RVec ph = tree_probabilities(thead, rhead);
    const RVec qh = tree_probabilities(thead, DensityOperator::trusted(rhead.dims(), prod[k - 2]));
    RelEntropy dh = classical_relative_entropy(ph, qh);
    infinite |= dh.infinite;
    rep.eq_onestep_full_residual = std::abs(rep.lhs_bits - (dh.bits + t_sum));
  }
  // Hybrid last-step relative entropy vs the same conditional terms.
  rep.eq_laststep_residual = std::abs(rep.step_bits.back() - t_sum);

  if (infinite) {
    rep.finite = false;
    rep.residual = nan;
    rep.eq_onestep_full_residual = nan;
    rep.eq_laststep_residual = nan;
  }
  return rep;
}

double chain_identity_residual(const AdaptiveMeasurementTree& tree, const DensityOperator& rho) {
  return chain_identity(tree, rho).residual;
}

std::pair<double, Mat> measure_update(const Mat& m, const std::vector<int>& dims,
                                      const std::vector<int>& positions, const Mat& effect) {
  const Mat conditioned = embed_at(effect, dims, positions) * m;
  std::vector<int> keep;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (!std::binary_search(positions.begin(), positions.end(), s)) keep.push_back(s);
  Mat post = kernels::partial_trace(conditioned, dims, keep);
  return {post.trace().real(), std::move(post)};
}

Mat random_unitary(int d, Rng& rng) {
  Mat g(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) g(r, c) = rng.cnormal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Cplx rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= (mag > 0.0) ? rii / mag : Cplx(1.0, 0.0);
  }
  return q;
}

Povm random_binary_povm(int d, Rng& rng) {
  const Mat u = random_unitary(d, rng);
  RVec lam(d);
  for (int i = 0; i < d; ++i) lam(i) = rng.uniform();
  Mat e = u * lam.cast<Cplx>().asDiagonal() * u.adjoint();
  return Povm::binary(0.5 * (e + e.adjoint()));
}

Povm random_projective_povm(int d, Rng& rng) { return Povm::from_basis(random_unitary(d, rng)); }

namespace {
TreeNode random_node(const std::vector<int>& party_dims, int depth, TreeKind kind, Rng& rng) {
  TreeNode node;
  const int d = party_dims[depth];
  node.povm = (kind == TreeKind::BinaryGeneral) ? random_binary_povm(d, rng)
                                                : random_projective_povm(d, rng);
  if (depth + 1 < static_cast<int>(party_dims.size()))
    for (int x = 0; x < node.povm.outcomes(); ++x)
      node.children.push_back(random_node(party_dims, depth + 1, kind, rng));
  return node;
}
}  // namespace

AdaptiveMeasurementTree random_tree(const std::vector<int>& party_dims, TreeKind kind, Rng& rng) {
  AdaptiveMeasurementTree tree;
  tree.party_dims = party_dims;
  tree.root = random_node(party_dims, 0, kind, rng);
  return tree;
}

}  // namespace qdf
