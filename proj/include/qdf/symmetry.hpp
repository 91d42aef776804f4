// Subsystem permutations, finite group closure and orbit tables for
// permutation twirls.
#pragma once

#include <vector>

#include "qdf/kernels.hpp"

namespace qdf {

// perm[s] = position that subsystem s is sent to.
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& a, const Perm& b);  // (a o b)(s) = a[b[s]]
Perm inverse_perm(const Perm& a);
void check_perm(const Perm& p);  // throws ArgumentError unless p is a bijection

// Transposition (0 1) and the n-cycle: together they generate all of S_n.
std::vector<Perm> symmetric_group_generators(int n);

// BFS closure of the generated group; throws ResourceError if the group
// exceeds `cap` elements.
std::vector<Perm> group_closure(const std::vector<Perm>& generators, long cap);

// Basis index map induced by a subsystem permutation: the old basis index i
// (row-major over dims) is sent to map[i].  Requires dims[s] == dims[perm[s]].
std::vector<int> basis_index_map(const Perm& perm, const std::vector<int>& dims);

// Entry orbits of the group generated by `generators` acting by conjugation.
// Only generators are needed: orbits of the generated group coincide with the
// connected components under generator moves.
kernels::OrbitTable build_orbit_table(const std::vector<Perm>& generators,
                                      const std::vector<int>& dims);

}  // namespace qdf
