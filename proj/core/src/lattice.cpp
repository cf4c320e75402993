#include "gostrata/lattice.hpp"

namespace gos {

namespace {

WElem pow_p(const WittRing& r, int k) { return r.mul_p(r.one(), k); }

}  // namespace

Lattice2 lattice_standard() { return {}; }

Lattice2 lattice_from_generators(const WittRing& r, int shift, const std::vector<Column>& gens) {
  const int N = r.N();
  std::vector<Column> g = gens;

  // Row 0: a unit multiple of p^a, where a is the least valuation in the row.
  std::size_t piv = g.size();
  int a = N;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const int v = r.valuation(g[j][0]);
    if (v < a) {
      a = v;
      piv = j;
    }
  }
  require(piv < g.size(), ErrorCode::BudgetExhausted, "generators do not span a full-rank lattice");
  const WElem u = r.div_p(g[piv][0], a);
  const WElem uinv = r.inverse(u);
  const WElem c0 = r.mul(g[piv][1], uinv);  // known modulo p^{N-a}

  // Clear row 0 of every other column against the pivot; row 1 then has precision N - a.
  int b = N - a;
  std::vector<WElem> rest;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j == piv) continue;
    const WElem w = r.div_p(g[j][0], a);
    const WElem x = r.truncate(r.sub(r.mul(u, g[j][1]), r.mul(w, g[piv][1])), N - a);
    rest.push_back(x);
    b = std::min(b, r.valuation(x));
  }
  require(b < N - a, ErrorCode::BudgetExhausted, "generators do not span a full-rank lattice");

  WElem c = r.truncate(c0, b);
  const int k = std::min({a, b, r.valuation(c)});
  Lattice2 out;
  out.shift = shift + k;
  out.a = a - k;
  out.b = b - k;
  out.c = r.truncate(r.div_p(c, k), out.b);
  require(out.a + out.b <= r.budget(), ErrorCode::BudgetExhausted,
          "lattice index exceeds the precision budget");
  return out;
}

Lattice2 lattice_normalize(const WittRing& r, int shift, const Mat2& basis) {
  return lattice_from_generators(
      r, shift, {Column{basis.e[0][0], basis.e[1][0]}, Column{basis.e[0][1], basis.e[1][1]}});
}

Mat2 lattice_basis(const WittRing& r, const Lattice2& l) {
  Mat2 m;
  m.e[0][0] = pow_p(r, l.a);
  m.e[1][0] = l.c;
  m.e[0][1] = r.zero();
  m.e[1][1] = pow_p(r, l.b);
  return m;
}

Lattice2 lattice_sum(const WittRing& r, const Lattice2& x, const Lattice2& y) {
  const int e = std::min(x.shift, y.shift);
  const Mat2 bx = lattice_basis(r, x);
  const Mat2 by = lattice_basis(r, y);
  std::vector<Column> gens;
  auto push = [&](const Mat2& bm, int k) {
    for (int j = 0; j < 2; ++j)
      gens.push_back({r.mul_p(bm.e[0][j], k), r.mul_p(bm.e[1][j], k)});
  };
  push(bx, x.shift - e);
  push(by, y.shift - e);
  return lattice_from_generators(r, e, gens);
}

Lattice2 lattice_scale(const Lattice2& l, int k) {
  Lattice2 out = l;
  out.shift += k;
  return out;
}

bool lattice_contains(const WittRing& r, const Lattice2& big, const Lattice2& small) {
  return lattice_sum(r, big, small) == big;
}

int lattice_index(const Lattice2& l) { return 2 * l.shift + l.a + l.b; }

int lattice_colength(const WittRing& r, const Lattice2& big, const Lattice2& small) {
  require(lattice_contains(r, big, small), ErrorCode::InvalidArgument, "lattice is not contained");
  return lattice_index(small) - lattice_index(big);
}

Lattice2 lattice_apply(const WittRing& r, const Lattice2& l, const Mat2& m, long k) {
  const Mat2 b = mat_frobenius(r, lattice_basis(r, l), k);
  return lattice_normalize(r, l.shift, mat_mul(r, m, b));
}

Lattice2 lattice_preimage(const WittRing& r, const Lattice2& l, const Mat2& m, long k) {
  // M^{-1} = adj(M) / det(M), and unit factors do not change a span.
  const int d = r.valuation(mat_det(r, m));
  require(d < r.budget(), ErrorCode::NotSplit, "matrix is not invertible within the budget");
  const Mat2 img = mat_mul(r, mat_adj(r, m), lattice_basis(r, l));
  return lattice_normalize(r, l.shift - d, mat_frobenius(r, img, -k));
}

Lattice2 lattice_dual(const WittRing& r, const Lattice2& l, const Mat2& pairing) {
  const Mat2 mt = mat_transpose(mat_mul(r, pairing, lattice_basis(r, l)));
  const int d = r.valuation(mat_det(r, mt));
  require(d < r.budget(), ErrorCode::NotSplit, "pairing is degenerate on the lattice");
  return lattice_normalize(r, -l.shift - d, mat_adj(r, mt));
}

}  // namespace gos
