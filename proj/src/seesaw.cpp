#include "qdf/seesaw.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qdf {

namespace {

// tr_0((E (x) I) m) with m on dims, E on dims[0].
Mat condition_first(const Mat& m, int d0, const Mat& e) {
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

// G with tr(P G) = tr((P (x) w) m) for any P on the first factor of m.
Mat partial_expectation_rest(const Mat& m, int d0, const Mat& w) {
  const long rest = m.rows() / d0;
  Mat g(d0, d0);
  for (int b = 0; b < d0; ++b)
    for (int a = 0; a < d0; ++a)
      g(b, a) = (w * m.block(b * rest, a * rest, rest, rest)).trace();
  return g;
}

struct Helstrom {
  double value = 0.0;  // || delta ||_1
  Mat plus;            // projector incl. the zero eigenspace (outcome 0)
  Mat sign;            // plus - minus
};

Helstrom helstrom_split(const Mat& delta) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (delta + delta.adjoint()));
  Helstrom h;
  h.value = es.eigenvalues().cwiseAbs().sum();
  const long d = delta.rows();
  h.plus = Mat::Zero(d, d);
  for (long i = 0; i < d; ++i)
    if (es.eigenvalues()(i) >= 0.0)
      h.plus.noalias() += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  h.sign = 2.0 * h.plus - Mat::Identity(d, d);
  return h;
}

// Internal parametrization of a strategy: projective rank-1 measurements for
// every optimized party.  `upstream[j]` holds one unitary per tie group
// (single for LO / parallel, one per outcome history for the full class).
// `last` is used by the LO norm objective and by every relative-entropy
// objective; the norm objective for parallel/full classes derives the last
// measurement in closed form (Helstrom) instead.
struct Params {
  MeasurementClass cls = MeasurementClass::OneWayFull;
  std::vector<int> dims;
  std::vector<std::vector<Mat>> upstream;
  std::vector<Mat> last;
  bool last_tied = true;
};

long history_count(const std::vector<int>& dims, int j) {
  long h = 1;
  for (int t = 0; t < j; ++t) h *= dims[t];
  return h;
}

int group_of(const Params& p, long prefix) {
  return p.cls == MeasurementClass::OneWayFull ? static_cast<int>(prefix) : 0;
}

// delta conditioned on every outcome history of parties [0..j).
std::vector<Mat> conditionals(const Params& p, const Mat& delta, int j) {
  std::vector<Mat> cur{delta};
  for (int t = 0; t < j; ++t) {
    const int d = p.dims[t];
    std::vector<Mat> next;
    next.reserve(cur.size() * d);
    for (size_t h = 0; h < cur.size(); ++h) {
      const Mat& u = p.upstream[t][group_of(p, static_cast<long>(h))];
      for (int x = 0; x < d; ++x) {
        const Mat proj = u.col(x) * u.col(x).adjoint();
        next.push_back(condition_first(cur[h], d, proj));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

double eval_norm(const Params& p, const Mat& delta) {
  const int k = static_cast<int>(p.dims.size());
  const auto cond = conditionals(p, delta, k - 1);
  double v = 0.0;
  if (p.cls == MeasurementClass::LO) {
    const Mat& u = p.last[0];
    for (const Mat& c : cond)
      for (int y = 0; y < p.dims[k - 1]; ++y)
        v += std::abs((u.col(y).adjoint() * c * u.col(y))(0, 0).real());
  } else {
    for (const Mat& c : cond) v += helstrom_split(c).value;
  }
  return v;
}

struct RelentValue {
  double objective = 0.0;  // surrogate-guarded, for the ascent
  double exact = 0.0;      // exact bits (inf when infinite)
  bool infinite = false;
};

RelentValue eval_relent(const Params& p, const Mat& rho, const Mat& sigma) {
  const int k = static_cast<int>(p.dims.size());
  const auto cr = conditionals(p, rho, k - 1);
  const auto cs = conditionals(p, sigma, k - 1);
  const int d = p.dims[k - 1];
  RVec pv(static_cast<long>(cr.size()) * d), qv(pv.size());
  long idx = 0;
  for (size_t h = 0; h < cr.size(); ++h) {
    const Mat& u = p.last[p.last_tied ? 0 : h];
    for (int y = 0; y < d; ++y, ++idx) {
      pv(idx) = std::max(0.0, (u.col(y).adjoint() * cr[h] * u.col(y))(0, 0).real());
      qv(idx) = std::max(0.0, (u.col(y).adjoint() * cs[h] * u.col(y))(0, 0).real());
    }
  }
  const RelEntropy dd = classical_relative_entropy(pv, qv);
  RelentValue out;
  out.infinite = dd.infinite;
  out.exact = dd.bits;
  out.objective = dd.infinite ? defaults::kInfiniteSurrogateBits : dd.bits;
  return out;
}

// Sign operators on the last party for each full upstream history, at the
// current parameters (used to linearize the norm objective).
std::vector<Mat> sign_operators(const Params& p, const Mat& delta) {
  const int k = static_cast<int>(p.dims.size());
  const auto cond = conditionals(p, delta, k - 1);
  std::vector<Mat> signs;
  signs.reserve(cond.size());
  if (p.cls == MeasurementClass::LO) {
    const Mat& u = p.last[0];
    const int d = p.dims[k - 1];
    for (const Mat& c : cond) {
      Mat s = Mat::Zero(d, d);
      for (int y = 0; y < d; ++y) {
        const double w = (u.col(y).adjoint() * c * u.col(y))(0, 0).real();
        s.noalias() += (w >= 0.0 ? 1.0 : -1.0) * (u.col(y) * u.col(y).adjoint());
      }
      signs.push_back(std::move(s));
    }
  } else {
    for (const Mat& c : cond) signs.push_back(helstrom_split(c).sign);
  }
  return signs;
}

// K(t, prefix): tree operator on parties t..k-1 built from the current
// projectors below depth t and the leaf sign operators.
Mat build_k(const Params& p, const std::vector<Mat>& signs, int t, long prefix) {
  const int k = static_cast<int>(p.dims.size());
  if (t == k - 1) return signs[prefix];
  const int d = p.dims[t];
  const Mat& u = p.upstream[t][group_of(p, prefix)];
  Mat out;
  for (int x = 0; x < d; ++x) {
    const Mat proj = u.col(x) * u.col(x).adjoint();
    Mat sub = kernels::kron(proj, build_k(p, signs, t + 1, prefix * d + x), kernels::Exec::Serial);
    if (x == 0)
      out = std::move(sub);
    else
      out += sub;
  }
  return out;
}

// Exact maximizer of sum_x <u_x|G_x|u_x> over orthonormal bases for d = 2.
Mat best_basis_2(const Mat& g0, const Mat& g1) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g0 - g1 + (g0 - g1).adjoint()));
  Mat u(2, 2);
  u.col(0) = es.eigenvectors().col(1);  // top eigenvector
  u.col(1) = es.eigenvectors().col(0);
  return u;
}

Mat cayley(const Mat& skew) {
  const long d = skew.rows();
  const Mat i = Mat::Identity(d, d);
  return (i - 0.5 * skew).partialPivLu().solve(i + 0.5 * skew);
}

}  // namespace

Mat ascend_unitary(const std::function<double(const Mat&)>& f, Mat u, int iters) {
  const int d = static_cast<int>(u.rows());
  std::vector<Mat> dirs;
  for (int p = 0; p < d; ++p) {
    Mat a = Mat::Zero(d, d);
    a(p, p) = Cplx(0.0, 1.0);
    dirs.push_back(a);
    for (int q = p + 1; q < d; ++q) {
      Mat b = Mat::Zero(d, d);
      b(p, q) = 1.0;
      b(q, p) = -1.0;
      dirs.push_back(b);
      Mat c = Mat::Zero(d, d);
      c(p, q) = Cplx(0.0, 1.0);
      c(q, p) = Cplx(0.0, 1.0);
      dirs.push_back(c);
    }
  }
  double step = 0.5;
  double best = f(u);
  for (int it = 0; it < iters; ++it) {
    bool improved = false;
    for (const Mat& a : dirs)
      for (double sgn : {1.0, -1.0}) {
        Mat cand = cayley(sgn * step * a) * u;
        const double v = f(cand);
        if (v > best + 1e-14) {
          u = std::move(cand);
          best = v;
          improved = true;
          break;
        }
      }
    if (!improved) {
      step /= 3.0;
      if (step < 1e-7) break;
    }
  }
  return u;
}

namespace {

Params random_params(MeasurementClass cls, const std::vector<int>& dims, bool needs_last,
                     Rng& rng) {
  Params p;
  p.cls = cls;
  p.dims = dims;
  const int k = static_cast<int>(dims.size());
  p.upstream.resize(std::max(0, k - 1));
  for (int j = 0; j < k - 1; ++j) {
    const long groups = cls == MeasurementClass::OneWayFull ? history_count(dims, j) : 1;
    for (long g = 0; g < groups; ++g) p.upstream[j].push_back(random_unitary(dims[j], rng));
  }
  p.last_tied = (cls == MeasurementClass::LO);
  if (needs_last) {
    const long n = p.last_tied ? 1 : history_count(dims, k - 1);
    for (long g = 0; g < n; ++g) p.last.push_back(random_unitary(dims[k - 1], rng));
  } else if (cls == MeasurementClass::LO) {
    p.last.push_back(random_unitary(dims[k - 1], rng));
  }
  return p;
}

// Eigenbasis of sum_x (x+1) E_x: recovers the measurement basis of a
// projective POVM and gives a sensible unitary for any other POVM.
Mat unitary_from_povm(const Povm& povm) {
  const long d = povm.dim();
  Mat b = Mat::Zero(d, d);
  for (int x = 0; x < povm.outcomes(); ++x) b += static_cast<double>(x + 1) * povm.effects[x];
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (b + b.adjoint()));
  return es.eigenvectors();
}

// Best-effort parameter extraction from an existing witness tree.
bool params_from_tree(const AdaptiveMeasurementTree& tree, MeasurementClass cls, bool needs_last,
                      Params* out) {
  const int k = tree.parties();
  Params p;
  p.cls = cls;
  p.dims = tree.party_dims;
  p.upstream.resize(std::max(0, k - 1));
  p.last_tied = (cls == MeasurementClass::LO);
  std::vector<const TreeNode*> frontier{&tree.root};
  for (int t = 0; t < k; ++t) {
    const bool is_last = (t == k - 1);
    for (const TreeNode* n : frontier) {
      if (n->povm.outcomes() > static_cast<int>(tree.party_dims[t]) && !is_last) return false;
      if (!is_last) {
        if (n->povm.outcomes() != tree.party_dims[t]) return false;  // projective ansatz only
        p.upstream[t].push_back(unitary_from_povm(n->povm));
      }
    }
    if (is_last && (needs_last || cls == MeasurementClass::LO)) {
      const long n_last = p.last_tied ? 1 : static_cast<long>(frontier.size());
      for (long h = 0; h < n_last; ++h) p.last.push_back(unitary_from_povm(frontier[h]->povm));
    }
    if (!is_last) {
      // Tie groups: LO/parallel keep only the first node's unitary.
      if (cls != MeasurementClass::OneWayFull) p.upstream[t].resize(1);
      std::vector<const TreeNode*> next;
      for (const TreeNode* n : frontier)
        for (const TreeNode& c : n->children) next.push_back(&c);
      frontier = std::move(next);
      if (frontier.empty()) return false;
    }
  }
  *out = std::move(p);
  return true;
}

AdaptiveMeasurementTree params_to_tree(const Params& p, bool norm_leaves, const Mat& delta) {
  const int k = static_cast<int>(p.dims.size());
  std::vector<Mat> leaf_cond;
  if (norm_leaves && p.cls != MeasurementClass::LO) leaf_cond = conditionals(p, delta, k - 1);

  std::function<TreeNode(int, long)> make = [&](int t, long prefix) {
    TreeNode node;
    if (t == k - 1) {
      if (p.cls == MeasurementClass::LO) {
        node.povm = Povm::from_basis(p.last[0]);
      } else if (norm_leaves) {
        const Helstrom h = helstrom_split(leaf_cond[prefix]);
        node.povm = Povm::binary(h.plus);
      } else {
        node.povm = Povm::from_basis(p.last[p.last_tied ? 0 : prefix]);
      }
      node.povm.dims = {p.dims[t]};
      return node;
    }
    const Mat& u = p.upstream[t][group_of(p, prefix)];
    node.povm = Povm::from_basis(u);
    node.povm.dims = {p.dims[t]};
    for (int x = 0; x < p.dims[t]; ++x) node.children.push_back(make(t + 1, prefix * p.dims[t] + x));
    return node;
  };
  AdaptiveMeasurementTree tree;
  tree.party_dims = p.dims;
  tree.root = make(0, 0);
  return tree;
}

DensityOperator reshape_to(const AdaptiveMeasurementTree& tree, const DensityOperator& rho) {
  if (rho.dims() == tree.party_dims) return rho;
  if (rho.dim() != product_dim(tree.party_dims))
    throw ArgumentError("witness evaluation: total dimension mismatch");
  return DensityOperator::trusted(tree.party_dims, rho.matrix());
}

// One seesaw sweep for the norm objective; returns the objective value after
// the sweep.  Updates are monotone: closed forms maximize a tight linear
// minorant, the fallback ascent only accepts improvements.
double sweep_norm(Params& p, const Mat& delta, int fd_iters) {
  const int k = static_cast<int>(p.dims.size());
  for (int j = 0; j < k - 1; ++j) {
    const auto signs = sign_operators(p, delta);
    const auto cond_j = conditionals(p, delta, j);
    const long groups = p.cls == MeasurementClass::OneWayFull ? history_count(p.dims, j) : 1;
    const int d = p.dims[j];
    for (long g = 0; g < groups; ++g) {
      std::vector<Mat> big(d, Mat::Zero(d, d));
      for (size_t h = 0; h < cond_j.size(); ++h) {
        if (p.cls == MeasurementClass::OneWayFull && static_cast<long>(h) != g) continue;
        for (int x = 0; x < d; ++x) {
          const Mat kx = build_k(p, signs, j + 1, static_cast<long>(h) * d + x);
          big[x] += partial_expectation_rest(cond_j[h], d, kx);
        }
      }
      if (d == 2) {
        p.upstream[j][g] = best_basis_2(big[0], big[1]);
      } else {
        Mat& u = p.upstream[j][g];
        u = ascend_unitary(
            [&](const Mat& cand) {
              Params q = p;
              q.upstream[j][g] = cand;
              return eval_norm(q, delta);
            },
            u, fd_iters);
      }
    }
  }
  if (p.cls == MeasurementClass::LO) {
    const auto cond = conditionals(p, delta, k - 1);
    const int d = p.dims[k - 1];
    const Mat& u = p.last[0];
    std::vector<Mat> big(d, Mat::Zero(d, d));
    for (const Mat& c : cond)
      for (int y = 0; y < d; ++y) {
        const double w = (u.col(y).adjoint() * c * u.col(y))(0, 0).real();
        big[y] += (w >= 0.0 ? 1.0 : -1.0) * c;
      }
    if (d == 2) {
      p.last[0] = best_basis_2(big[0], big[1]);
    } else {
      p.last[0] = ascend_unitary(
          [&](const Mat& cand) {
            Params q = p;
            q.last[0] = cand;
            return eval_norm(q, delta);
          },
          u, fd_iters);
    }
  }
  return eval_norm(p, delta);
}

double sweep_relent(Params& p, const Mat& rho, const Mat& sigma, int fd_iters) {
  const int k = static_cast<int>(p.dims.size());
  for (int j = 0; j < k - 1; ++j) {
    const long groups = p.cls == MeasurementClass::OneWayFull ? history_count(p.dims, j) : 1;
    for (long g = 0; g < groups; ++g) {
      p.upstream[j][g] = ascend_unitary(
          [&](const Mat& cand) {
            Params q = p;
            q.upstream[j][g] = cand;
            return eval_relent(q, rho, sigma).objective;
          },
          p.upstream[j][g], fd_iters);
    }
  }
  for (size_t h = 0; h < p.last.size(); ++h) {
    p.last[h] = ascend_unitary(
        [&](const Mat& cand) {
          Params q = p;
          q.last[h] = cand;
          return eval_relent(q, rho, sigma).objective;
        },
        p.last[h], fd_iters);
  }
  return eval_relent(p, rho, sigma).objective;
}

struct RestartOutcome {
  double value = -1.0;
  bool converged = false;
  Params params;
  bool valid = false;
};

void attach_class_witnesses(SeesawResult* res, const Params& p, bool norm_leaves,
                            const Mat& delta) {
  const int k = static_cast<int>(p.dims.size());
  if (p.cls == MeasurementClass::LO) {
    ProductWitness w;
    w.party_dims = p.dims;
    for (int j = 0; j < k - 1; ++j) {
      Povm q = Povm::from_basis(p.upstream[j][0]);
      q.dims = {p.dims[j]};
      w.povms.push_back(std::move(q));
    }
    Povm q = Povm::from_basis(p.last[0]);
    q.dims = {p.dims[k - 1]};
    w.povms.push_back(std::move(q));
    res->product = std::move(w);
  } else if (p.cls == MeasurementClass::OneWayParallel) {
    ParallelWitness w;
    w.party_dims = p.dims;
    for (int j = 0; j < k - 1; ++j) {
      Povm q = Povm::from_basis(p.upstream[j][0]);
      q.dims = {p.dims[j]};
      w.upstream.push_back(std::move(q));
    }
    const long histories = history_count(p.dims, k - 1);
    std::vector<Mat> cond;
    if (norm_leaves) cond = conditionals(p, delta, k - 1);
    for (long h = 0; h < histories; ++h) {
      Povm q = norm_leaves ? Povm::binary(helstrom_split(cond[h]).plus)
                           : Povm::from_basis(p.last[p.last_tied ? 0 : h]);
      q.dims = {p.dims[k - 1]};
      w.last.push_back(std::move(q));
    }
    res->parallel = std::move(w);
  }
}

SeesawResult run_seesaw(const DensityOperator& rho, const DensityOperator& sigma,
                        MeasurementClass cls, const SeesawOptions& opts, bool norm_objective) {
  if (rho.dims() != sigma.dims()) throw ArgumentError("seesaw: dimension mismatch");
  if (opts.restarts < 1 || opts.iters < 1) throw ArgumentError("seesaw: budget must be positive");
  const std::vector<int>& dims = rho.dims();
  const Mat delta = rho.matrix() - sigma.matrix();
  const bool needs_last = !norm_objective;
  const int fd_iters = 4;

  SeesawResult res;
  res.cls = cls;

  // Unrestricted class: exact closed forms, no iteration needed for the norm.
  if (cls == MeasurementClass::All) {
    const int total = static_cast<int>(rho.dim());
    AdaptiveMeasurementTree tree;
    tree.party_dims = {total};
    if (norm_objective) {
      const Helstrom h = helstrom_split(delta);
      tree.root.povm = Povm::binary(h.plus);
      tree.root.povm.dims = {total};
      res.witness = tree;
      res.value = evaluate_norm_witness(tree, rho, sigma);
      res.converged = true;
      return res;
    }
    // One global projective measurement, ascended directly.
    Params p;
    p.cls = MeasurementClass::LO;
    p.dims = {total};
    p.last_tied = true;
    double best = -1.0;
    Params best_p;
    for (int r = 0; r < opts.restarts; ++r) {
      Rng rng = Rng::derive(opts.seed, static_cast<std::uint64_t>(r));
      p.last = {random_unitary(total, rng)};
      p.last[0] = ascend_unitary(
          [&](const Mat& cand) {
            Params q = p;
            q.last[0] = cand;
            return eval_relent(q, rho.matrix(), sigma.matrix()).objective;
          },
          p.last[0], opts.iters);
      const double v = eval_relent(p, rho.matrix(), sigma.matrix()).objective;
      if (v > best) {
        best = v;
        best_p = p;
      }
    }
    res.witness = params_to_tree(best_p, false, delta);
    const RelEntropy exact = evaluate_relent_witness(res.witness, rho, sigma);
    res.value = exact.bits;
    res.value_infinite = exact.infinite;
    res.converged = true;
    return res;
  }

  std::vector<RestartOutcome> outcomes(opts.restarts);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng = Rng::derive(opts.seed, static_cast<std::uint64_t>(r));
    Params p;
    bool have = false;
    if (r == 0 && opts.init && opts.init->party_dims == dims)
      have = params_from_tree(*opts.init, cls, needs_last, &p);
    if (!have) p = random_params(cls, dims, needs_last, rng);

    double value = norm_objective ? eval_norm(p, delta)
                                  : eval_relent(p, rho.matrix(), sigma.matrix()).objective;
    bool converged = false;
    for (int it = 0; it < opts.iters; ++it) {
      const double next = norm_objective ? sweep_norm(p, delta, fd_iters)
                                         : sweep_relent(p, rho.matrix(), sigma.matrix(), fd_iters);
      if (next <= value + 1e-12 * std::max(1.0, std::abs(value))) {
        value = std::max(value, next);
        converged = true;
        break;
      }
      value = next;
    }
    outcomes[r].value = value;
    outcomes[r].converged = converged;
    outcomes[r].params = std::move(p);
    outcomes[r].valid = true;
  }

  int best = 0;
  for (int r = 1; r < opts.restarts; ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  const Params& bp = outcomes[best].params;
  res.converged = outcomes[best].converged;
  res.witness = params_to_tree(bp, norm_objective, delta);
  attach_class_witnesses(&res, bp, norm_objective, delta);
  if (norm_objective) {
    res.value = evaluate_norm_witness(res.witness, rho, sigma);
  } else {
    const RelEntropy exact = evaluate_relent_witness(res.witness, rho, sigma);
    res.value = exact.bits;
    res.value_infinite = exact.infinite;
  }

  // A provided warm-start witness is also a complete candidate: keep it when
  // it beats everything the seesaw found.
  if (opts.init) {
    const double init_value =
        norm_objective ? evaluate_norm_witness(*opts.init, rho, sigma)
                       : [&] {
                           const RelEntropy e = evaluate_relent_witness(*opts.init, rho, sigma);
                           return e.infinite ? defaults::kInfiniteSurrogateBits : e.bits;
                         }();
    if (init_value > res.value && !res.value_infinite) {
      res.value = init_value;
      res.witness = *opts.init;
      res.product.reset();
      res.parallel.reset();
      if (!norm_objective) {
        const RelEntropy e = evaluate_relent_witness(res.witness, rho, sigma);
        res.value = e.bits;
        res.value_infinite = e.infinite;
      }
    }
  }
  return res;
}

}  // namespace

AdaptiveMeasurementTree product_to_tree(const ProductWitness& w) {
  const int k = static_cast<int>(w.party_dims.size());
  if (static_cast<int>(w.povms.size()) != k)
    throw ArgumentError("product_to_tree: need one POVM per party");
  std::function<TreeNode(int)> make = [&](int t) {
    TreeNode node;
    node.povm = w.povms[t];
    if (t + 1 < k)
      for (int x = 0; x < node.povm.outcomes(); ++x) node.children.push_back(make(t + 1));
    return node;
  };
  AdaptiveMeasurementTree tree;
  tree.party_dims = w.party_dims;
  tree.root = make(0);
  return tree;
}

AdaptiveMeasurementTree parallel_to_full_embedding(const ParallelWitness& w) {
  const int k = static_cast<int>(w.party_dims.size());
  if (static_cast<int>(w.upstream.size()) != k - 1)
    throw ArgumentError("parallel_to_full_embedding: need k-1 upstream POVMs");
  long histories = 1;
  for (const Povm& p : w.upstream) histories *= p.outcomes();
  if (static_cast<long>(w.last.size()) != histories)
    throw ArgumentError("parallel_to_full_embedding: need one last POVM per upstream history");
  std::function<TreeNode(int, long)> make = [&](int t, long prefix) {
    TreeNode node;
    if (t == k - 1) {
      node.povm = w.last[prefix];
      return node;
    }
    node.povm = w.upstream[t];
    for (int x = 0; x < node.povm.outcomes(); ++x)
      node.children.push_back(make(t + 1, prefix * node.povm.outcomes() + x));
    return node;
  };
  AdaptiveMeasurementTree tree;
  tree.party_dims = w.party_dims;
  tree.root = make(0, 0);
  return tree;
}

double evaluate_norm_witness(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                             const DensityOperator& sigma) {
  const RVec p = tree_probabilities(tree, reshape_to(tree, rho));
  const RVec q = tree_probabilities(tree, reshape_to(tree, sigma));
  return (p - q).cwiseAbs().sum();
}

RelEntropy evaluate_relent_witness(const AdaptiveMeasurementTree& tree, const DensityOperator& rho,
                                   const DensityOperator& sigma) {
  const RVec p = tree_probabilities(tree, reshape_to(tree, rho));
  const RVec q = tree_probabilities(tree, reshape_to(tree, sigma));
  return classical_relative_entropy(p, q);
}

SeesawResult restricted_norm(const DensityOperator& rho, const DensityOperator& sigma,
                             MeasurementClass cls, const SeesawOptions& opts) {
  return run_seesaw(rho, sigma, cls, opts, true);
}

SeesawResult restricted_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                                         MeasurementClass cls, const SeesawOptions& opts) {
  return run_seesaw(rho, sigma, cls, opts, false);
}

}  // namespace qdf
