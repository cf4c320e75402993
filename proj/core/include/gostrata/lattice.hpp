#pragma once

#include <vector>

#include "gostrata/witt.hpp"

namespace gos {

// p^shift * span{(p^a, c), (0, p^b)} with c reduced modulo p^b and
// min(a, b, v(c)) = 0. Every Lattice2 value is kept in this canonical form.
struct Lattice2 {
  int shift = 0;
  int a = 0;
  int b = 0;
  WElem c;
  bool operator==(const Lattice2&) const = default;
};

// A 2 x k generator matrix: gens[j] is the j-th column.
using Column = std::array<WElem, 2>;

Lattice2 lattice_standard();
Lattice2 lattice_from_generators(const WittRing& r, int shift, const std::vector<Column>& gens);
Lattice2 lattice_normalize(const WittRing& r, int shift, const Mat2& basis);
Mat2 lattice_basis(const WittRing& r, const Lattice2& l);

inline bool lattice_equal(const Lattice2& x, const Lattice2& y) { return x == y; }
Lattice2 lattice_sum(const WittRing& r, const Lattice2& x, const Lattice2& y);
Lattice2 lattice_scale(const Lattice2& l, int k);
bool lattice_contains(const WittRing& r, const Lattice2& big, const Lattice2& small);

// log_p of the index of l inside the standard lattice (negative when l is larger).
int lattice_index(const Lattice2& l);
// length of big/small; requires small inside big.
int lattice_colength(const WittRing& r, const Lattice2& big, const Lattice2& small);

// p^shift span(M * phi^k(B)).
Lattice2 lattice_apply(const WittRing& r, const Lattice2& l, const Mat2& m, long k);
// {x : M * phi^k(x) in l}.
Lattice2 lattice_preimage(const WittRing& r, const Lattice2& l, const Mat2& m, long k);
// {v : v^T P w integral for every w in l}.
Lattice2 lattice_dual(const WittRing& r, const Lattice2& l, const Mat2& pairing);

}  // namespace gos
