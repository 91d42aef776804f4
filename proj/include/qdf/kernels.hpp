// Dense index-arithmetic kernels with serial and OpenMP variants.
//
// The parallel variants are written so every output element is produced by a
// single thread with a fixed inner summation order, which keeps results
// bit-identical to the serial path regardless of thread count.
#pragma once

#include <cstdint>
#include <vector>

#include "qdf/common.hpp"

namespace qdf::kernels {

enum class Exec { Serial, Parallel, Auto };

// True when the library was compiled with OpenMP support.
bool parallel_enabled();

// Resolve Auto: use the parallel path when available and the problem is big
// enough to amortize the fork/join.
bool use_parallel(Exec exec, long work);

// Kronecker product a (x) b.
Mat kron(const Mat& a, const Mat& b, Exec exec = Exec::Auto);

// Partial trace of m over the subsystems NOT listed in `keep`.
// `dims` are the subsystem dimensions (row-major index layout); `keep` must be
// strictly increasing.  Empty `keep` yields the 1x1 matrix [tr m].
Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& keep, Exec exec = Exec::Auto);

// Basis relabeling: out(map[i], map[j]) = in(i, j).
Mat permute_basis(const Mat& m, const std::vector<int>& new_index_of,
                  Exec exec = Exec::Auto);

// x += scale * (a embedded at `positions`, identity elsewhere).
// `positions` strictly increasing, a's side equals the product of the
// dimensions at those positions (in position order).
void add_embedded_identity(Mat& x, const Mat& a, const std::vector<int>& dims,
                           const std::vector<int>& positions, Cplx scale,
                           Exec exec = Exec::Auto);

// Partition of matrix entries into orbits of a permutation action on basis
// indices.  entry_by_orbit lists entry ids (i*dim + j) grouped by orbit;
// orbit_start[o]..orbit_start[o+1] delimits orbit o.
struct OrbitTable {
  long dim = 0;
  std::vector<std::int32_t> orbit_of;      // size dim*dim
  std::vector<long> orbit_start;           // size orbit_count()+1
  std::vector<std::int32_t> entry_by_orbit;  // size dim*dim
  long orbit_count() const { return static_cast<long>(orbit_start.size()) - 1; }
};

// Replace every entry by the mean of its orbit.
Mat orbit_average(const Mat& m, const OrbitTable& table, Exec exec = Exec::Auto);

}  // namespace qdf::kernels
