#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "gostrata/lattice.hpp"
#include "oracles.hpp"

using namespace gos;
using oracle::Vec;

// Over the prime field a lattice inside Z_p^2 containing p^K Z_p^2 is determined
// by its image in (Z/p^K)^2, which the oracle enumerates by brute force.
namespace {

std::int64_t ppow(long p, int k) {
  std::int64_t q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  return q;
}

int depth(const Lattice2& l) { return l.shift + l.a + l.b; }

// Columns of p^shift * basis, as integers.
std::vector<Vec> gens_of(const WittRing& r, const Lattice2& l) {
  REQUIRE(l.shift >= 0);
  const Mat2 b = lattice_basis(r, l);
  const std::int64_t s = ppow(r.p(), l.shift);
  return {{b.e[0][0].c[0] * s, b.e[1][0].c[0] * s}, {b.e[0][1].c[0] * s, b.e[1][1].c[0] * s}};
}

std::set<Vec> image(const WittRing& r, const Lattice2& l, int K) { return oracle::span_mod(r.p(), K, gens_of(r, l)); }

Vec apply(const Mat2& m, const Vec& v, std::int64_t q) {
  auto md = [q](std::int64_t x) { return ((x % q) + q) % q; };
  return {md(m.e[0][0].c[0] * v.first + m.e[0][1].c[0] * v.second),
          md(m.e[1][0].c[0] * v.first + m.e[1][1].c[0] * v.second)};
}

struct Sampler {
  const WittRing& r;
  std::mt19937_64 rng;

  std::int64_t entry() {
    const int v = static_cast<int>(rng() % 3);
    return (static_cast<std::int64_t>(rng() % 50) * ppow(r.p(), v)) % r.q();
  }
  Mat2 matrix() {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.e[i][j] = r.from_int(static_cast<long>(entry()));
    return m;
  }
  std::optional<Lattice2> lattice(int max_depth) {
    try {
      const Lattice2 l = lattice_normalize(r, static_cast<int>(rng() % 2), matrix());
      if (depth(l) <= max_depth) return l;
    } catch (const DomainError&) {
    }
    return std::nullopt;
  }
};

}  // namespace

TEST_CASE("canonical form") {
  const WittRing r(3, 1, 8);
  // span{(3, 1), (0, 9)} has a = 1, b = 2, c = 1.
  Mat2 m;
  m.e[0][0] = r.from_int(3);
  m.e[1][0] = r.from_int(1);
  m.e[1][1] = r.from_int(9);
  const Lattice2 l = lattice_normalize(r, 0, m);
  CHECK(l.a == 1);
  CHECK(l.b == 2);
  CHECK(l.c == r.from_int(1));
  CHECK(lattice_index(l) == 3);

  // A common factor moves into the shift.
  const Lattice2 s = lattice_normalize(r, 0, mat_from_ints(r, 3, 0, 0, 9));
  CHECK(s.shift == 1);
  CHECK(s.a == 0);
  CHECK(s.b == 1);

  CHECK(lattice_normalize(r, 0, mat_identity(r)) == lattice_standard());
  CHECK_THROWS_AS(lattice_normalize(r, 0, mat_from_ints(r, 1, 1, 1, 1)), DomainError);
}

TEST_CASE("normalizing a basis is idempotent") {
  const WittRing r(5, 1, 8);
  Sampler smp{r, std::mt19937_64(1)};
  for (int i = 0; i < 300; ++i) {
    const auto l = smp.lattice(4);
    if (!l) continue;
    CHECK(lattice_normalize(r, l->shift, lattice_basis(r, *l)) == *l);
    CHECK(r.truncate(l->c, l->b) == l->c);
    CHECK(std::min({l->a, l->b, l->c == r.zero() ? l->b : r.valuation(l->c)}) == 0);
  }
}

TEST_CASE("sum and containment against enumeration") {
  for (long p : {2L, 3L}) {
    const WittRing r(p, 1, 8);
    Sampler smp{r, std::mt19937_64(static_cast<unsigned>(p))};
    const int cap = p == 2 ? 4 : 3;
    int seen = 0;
    for (int i = 0; i < 150; ++i) {
      const auto x = smp.lattice(cap), y = smp.lattice(cap);
      if (!x || !y) continue;
      const int K = std::max(depth(*x), depth(*y)) + 1;
      const Lattice2 s = lattice_sum(r, *x, *y);
      auto g = gens_of(r, *x);
      for (const Vec& v : gens_of(r, *y)) g.push_back(v);
      CHECK(image(r, s, K) == oracle::span_mod(p, K, g));

      const auto ix = image(r, *x, K), iy = image(r, *y, K);
      bool sub = true;
      for (const Vec& v : iy) sub = sub && ix.count(v);
      CHECK(lattice_contains(r, *x, *y) == sub);
      if (sub) CHECK(lattice_colength(r, *x, *y) == lattice_index(*y) - lattice_index(*x));
      ++seen;
    }
    CHECK(seen > 50);
  }
}

TEST_CASE("images and preimages against enumeration") {
  for (long p : {2L, 3L}) {
    const WittRing r(p, 1, 8);
    Sampler smp{r, std::mt19937_64(40 + static_cast<unsigned>(p))};
    int seen = 0;
    for (int i = 0; i < 200 && seen < 60; ++i) {
      const auto l = smp.lattice(2);
      const Mat2 m = smp.matrix();
      if (!l) continue;
      const int vd = r.valuation(mat_det(r, m));
      if (vd > 2) continue;

      const Lattice2 img = lattice_apply(r, *l, m, 0);
      const int K = std::max(depth(img), depth(*l) + vd) + 1;
      std::vector<Vec> mg;
      for (const Vec& v : gens_of(r, *l)) mg.push_back(apply(m, v, ppow(p, K)));
      CHECK(image(r, img, K) == oracle::span_mod(p, K, mg));

      // Scaling by p^vd keeps the preimage inside Z_p^2.
      const Lattice2 target = lattice_scale(*l, vd);
      const Lattice2 pre = lattice_preimage(r, target, m, 0);
      REQUIRE(pre.shift >= 0);
      const int K2 = std::max(depth(target), depth(pre)) + 1;
      const auto tgt = image(r, target, K2);
      std::set<Vec> want;
      const std::int64_t q = ppow(p, K2);
      for (std::int64_t x = 0; x < q; ++x)
        for (std::int64_t y = 0; y < q; ++y)
          if (tgt.count(apply(m, {x, y}, q))) want.insert({x, y});
      CHECK(image(r, pre, K2) == want);
      CHECK(lattice_apply(r, pre, m, 0) == target);
      ++seen;
    }
    CHECK(seen >= 30);
  }
}

TEST_CASE("duals against enumeration") {
  for (long p : {2L, 3L}) {
    // The double dual needs room for both discriminants.
    const WittRing r(p, 1, 10);
    Sampler smp{r, std::mt19937_64(70 + static_cast<unsigned>(p))};
    int seen = 0;
    for (int i = 0; i < 900 && seen < 60; ++i) {
      const auto l = smp.lattice(2);
      const Mat2 pm = smp.matrix();
      if (!l) continue;
      const int vd = r.valuation(mat_det(r, pm));
      if (vd > 1) continue;
      const Lattice2 dual = lattice_dual(r, *l, pm);
      CHECK(lattice_dual(r, dual, mat_transpose(pm)) == *l);

      const int k = depth(*l) + vd;
      const Lattice2 scaled = lattice_scale(dual, k);
      REQUIRE(scaled.shift >= 0);
      const std::int64_t q = ppow(p, k);
      const auto lg = gens_of(r, *l);
      std::set<Vec> want;
      for (std::int64_t x = 0; x < q; ++x)
        for (std::int64_t y = 0; y < q; ++y) {
          bool ok = true;
          for (const Vec& w : lg) {
            const Vec pw = apply(pm, w, q);
            ok = ok && ((x * pw.first + y * pw.second) % q == 0);
          }
          if (ok) want.insert({x, y});
        }
      CHECK(image(r, scaled, k) == want);
      ++seen;
    }
    CHECK(seen >= 30);
  }
}

TEST_CASE("semilinear images over an extension") {
  const WittRing r(3, 2, 8);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Mat2 u = mat_random_unimodular(r, rng);
    Lattice2 l;
    try {
      l = lattice_normalize(r, 0, mat_mul(r, mat_random_unimodular(r, rng), mat_from_ints(r, 1, 0, 0, 3)));
    } catch (const DomainError&) {
      continue;
    }
    // phi-semilinear maps are invertible and preserve the index.
    const Lattice2 im = lattice_apply(r, l, u, 1);
    CHECK(lattice_index(im) == lattice_index(l));
    CHECK(lattice_preimage(r, im, u, 1) == l);
  }
}
