#include "qdf/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef QDF_HAVE_OPENMP
#include <omp.h>
#endif

namespace qdf::kernels {

bool parallel_enabled() {
#ifdef QDF_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

bool use_parallel(Exec exec, long work) {
  switch (exec) {
    case Exec::Serial:
      return false;
    case Exec::Parallel:
      return parallel_enabled();
    case Exec::Auto:
      return parallel_enabled() && work >= 1 << 14;
  }
  return false;
}

Mat kron(const Mat& a, const Mat& b, Exec exec) {
  const long ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Mat out(ra * rb, ca * cb);
  const bool par = use_parallel(exec, ra * rb * ca * cb);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for collapse(2) if (par)
#endif
  for (long j1 = 0; j1 < ca; ++j1)
    for (long i1 = 0; i1 < ra; ++i1) out.block(i1 * rb, j1 * cb, rb, cb) = a(i1, j1) * b;
  (void)par;
  return out;
}

namespace {

// Strides for the row-major multi-index over `dims`.
std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

// Offsets of all joint values of the subsystems in `subset` (row-major order
// within the subset).
std::vector<long> subset_offsets(const std::vector<int>& dims,
                                 const std::vector<long>& strides,
                                 const std::vector<int>& subset) {
  long total = 1;
  for (int s : subset) total *= dims[s];
  std::vector<long> off(total, 0);
  long repeat = total;
  for (int s : subset) {
    const int d = dims[s];
    repeat /= d;
    long idx = 0;
    while (idx < total)
      for (int v = 0; v < d; ++v)
        for (long r = 0; r < repeat; ++r) off[idx++] += v * strides[s];
  }
  return off;
}

}  // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& keep, Exec exec) {
  const long total = product_dim(dims);
  if (m.rows() != total || m.cols() != total)
    throw ArgumentError("partial_trace: matrix side does not match subsystem dimensions");
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= static_cast<int>(dims.size()))
      throw ArgumentError("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw ArgumentError("partial_trace: keep indices must be strictly increasing");
  }
  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

  const auto strides = strides_of(dims);
  const auto kept_off = subset_offsets(dims, strides, keep);
  const auto traced_off = subset_offsets(dims, strides, traced);
  const long dk = static_cast<long>(kept_off.size());
  const long dt = static_cast<long>(traced_off.size());

  Mat out(dk, dk);
  const bool par = use_parallel(exec, dk * dk * dt);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for collapse(2) if (par)
#endif
  for (long c = 0; c < dk; ++c)
    for (long r = 0; r < dk; ++r) {
      Cplx acc(0.0, 0.0);
      for (long t = 0; t < dt; ++t) acc += m(kept_off[r] + traced_off[t], kept_off[c] + traced_off[t]);
      out(r, c) = acc;
    }
  (void)par;
  return out;
}

Mat permute_basis(const Mat& m, const std::vector<int>& new_index_of, Exec exec) {
  const long n = m.rows();
  if (m.cols() != n || static_cast<long>(new_index_of.size()) != n)
    throw ArgumentError("permute_basis: index map size mismatch");
  std::vector<int> inv(n);
  for (long i = 0; i < n; ++i) inv[new_index_of[i]] = static_cast<int>(i);
  Mat out(n, n);
  const bool par = use_parallel(exec, n * n);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for if (par)
#endif
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) out(r, c) = m(inv[r], inv[c]);
  (void)par;
  return out;
}

void add_embedded_identity(Mat& x, const Mat& a, const std::vector<int>& dims,
                           const std::vector<int>& positions, Cplx scale, Exec exec) {
  const long total = product_dim(dims);
  if (x.rows() != total || x.cols() != total)
    throw ArgumentError("add_embedded_identity: target side does not match dims");
  const auto strides = strides_of(dims);
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (!std::binary_search(positions.begin(), positions.end(), s)) rest.push_back(s);
  const auto pos_off = subset_offsets(dims, strides, positions);
  const auto rest_off = subset_offsets(dims, strides, rest);
  const long da = static_cast<long>(pos_off.size());
  const long dr = static_cast<long>(rest_off.size());
  if (a.rows() != da || a.cols() != da)
    throw ArgumentError("add_embedded_identity: operator side does not match positions");

  const bool par = use_parallel(exec, da * da * dr);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for collapse(2) if (par)
#endif
  for (long ck = 0; ck < da; ++ck)
    for (long rk = 0; rk < da; ++rk) {
      const Cplx v = scale * a(rk, ck);
      if (v == Cplx(0.0, 0.0)) continue;
      for (long t = 0; t < dr; ++t) x(pos_off[rk] + rest_off[t], pos_off[ck] + rest_off[t]) += v;
    }
  (void)par;
}

Mat orbit_average(const Mat& m, const OrbitTable& table, Exec exec) {
  const long n = m.rows();
  if (m.cols() != n || table.dim != n)
    throw ArgumentError("orbit_average: table does not match matrix side");
  const long norb = table.orbit_count();
  std::vector<Cplx> mean(norb);
  const Cplx* data = m.data();  // column-major; entry id i*n+j maps to data[j*n+i]
  const bool par = use_parallel(exec, n * n);
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for if (par)
#endif
  for (long o = 0; o < norb; ++o) {
    Cplx acc(0.0, 0.0);
    for (long e = table.orbit_start[o]; e < table.orbit_start[o + 1]; ++e) {
      const long id = table.entry_by_orbit[e];
      acc += data[(id % n) * n + (id / n)];
    }
    mean[o] = acc / static_cast<double>(table.orbit_start[o + 1] - table.orbit_start[o]);
  }
  Mat out(n, n);
  Cplx* odata = out.data();
#ifdef QDF_HAVE_OPENMP
#pragma omp parallel for if (par)
#endif
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) odata[c * n + r] = mean[table.orbit_of[r * n + c]];
  (void)par;
  return out;
}

}  // namespace qdf::kernels
