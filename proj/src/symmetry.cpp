#include "qdf/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace qdf {

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw ArgumentError("compose: size mismatch");
  Perm c(a.size());
  for (size_t s = 0; s < b.size(); ++s) c[s] = a[b[s]];
  return c;
}

Perm inverse_perm(const Perm& a) {
  Perm inv(a.size());
  for (size_t s = 0; s < a.size(); ++s) inv[a[s]] = static_cast<int>(s);
  return inv;
}

void check_perm(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v])
      throw ArgumentError("permutation is not a bijection on its index range");
    seen[v] = 1;
  }
}

std::vector<Perm> symmetric_group_generators(int n) {
  if (n < 1) throw ArgumentError("symmetric_group_generators: n must be positive");
  if (n == 1) return {identity_perm(1)};
  Perm swap01 = identity_perm(n);
  std::swap(swap01[0], swap01[1]);
  Perm cycle(n);
  for (int s = 0; s < n; ++s) cycle[s] = (s + 1) % n;
  if (n == 2) return {swap01};
  return {swap01, cycle};
}

namespace {
struct PermHash {
  size_t operator()(const Perm& p) const {
    size_t h = 1469598103934665603ull;
    for (int v : p) {
      h ^= static_cast<size_t>(v) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};
}  // namespace

std::vector<Perm> group_closure(const std::vector<Perm>& generators, long cap) {
  if (generators.empty()) throw ArgumentError("group_closure: no generators");
  const size_t n = generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != n) throw ArgumentError("group_closure: generator size mismatch");
    check_perm(g);
  }
  std::unordered_set<Perm, PermHash> seen;
  std::vector<Perm> frontier{identity_perm(static_cast<int>(n))};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& p : frontier)
      for (const auto& g : generators) {
        Perm q = compose(g, p);
        if (seen.insert(q).second) {
          next.push_back(std::move(q));
          if (static_cast<long>(seen.size()) > cap)
            throw ResourceError("group_closure: group size exceeds cap of " + std::to_string(cap));
        }
      }
    frontier = std::move(next);
  }
  return std::vector<Perm>(seen.begin(), seen.end());
}

std::vector<int> basis_index_map(const Perm& perm, const std::vector<int>& dims) {
  check_perm(perm);
  if (perm.size() != dims.size()) throw ArgumentError("basis_index_map: size mismatch");
  const int n = static_cast<int>(dims.size());
  for (int s = 0; s < n; ++s)
    if (dims[s] != dims[perm[s]])
      throw ArgumentError("basis_index_map: permutation moves unequal dimensions");
  std::vector<long> stride(n);
  long acc = 1;
  for (int s = n - 1; s >= 0; --s) {
    stride[s] = acc;
    acc *= dims[s];
  }
  const long total = acc;
  std::vector<int> map(total);
  std::vector<int> tuple(n, 0);
  for (long i = 0; i < total; ++i) {
    long img = 0;
    for (int s = 0; s < n; ++s) img += tuple[s] * stride[perm[s]];
    map[i] = static_cast<int>(img);
    for (int s = n - 1; s >= 0; --s) {
      if (++tuple[s] < dims[s]) break;
      tuple[s] = 0;
    }
  }
  return map;
}

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(long n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

kernels::OrbitTable build_orbit_table(const std::vector<Perm>& generators,
                                      const std::vector<int>& dims) {
  const long d = product_dim(dims);
  if (d * d > (1L << 31) - 1) throw ResourceError("build_orbit_table: matrix too large");
  UnionFind uf(d * d);
  for (const auto& g : generators) {
    const auto map = basis_index_map(g, dims);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j)
        uf.unite(static_cast<std::int32_t>(i * d + j),
                 static_cast<std::int32_t>(static_cast<long>(map[i]) * d + map[j]));
  }
  kernels::OrbitTable t;
  t.dim = d;
  t.orbit_of.resize(d * d);
  std::vector<std::int32_t> label(d * d, -1);
  std::int32_t norb = 0;
  for (long e = 0; e < d * d; ++e) {
    const std::int32_t root = uf.find(static_cast<std::int32_t>(e));
    if (label[root] < 0) label[root] = norb++;
    t.orbit_of[e] = label[root];
  }
  std::vector<long> count(norb, 0);
  for (long e = 0; e < d * d; ++e) ++count[t.orbit_of[e]];
  t.orbit_start.assign(norb + 1, 0);
  for (std::int32_t o = 0; o < norb; ++o) t.orbit_start[o + 1] = t.orbit_start[o] + count[o];
  t.entry_by_orbit.resize(d * d);
  std::vector<long> cursor(t.orbit_start.begin(), t.orbit_start.end() - 1);
  for (long e = 0; e < d * d; ++e) t.entry_by_orbit[cursor[t.orbit_of[e]]++] = static_cast<std::int32_t>(e);
  return t;
}

}  // namespace qdf
