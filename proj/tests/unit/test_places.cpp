#include <doctest.h>

#include "gostrata/places.hpp"
#include "oracles.hpp"

using namespace gos;

namespace {

oracle::Cycle cycle_of(int f, Mask s) {
  oracle::Cycle c(static_cast<std::size_t>(f));
  for (int i = 0; i < f; ++i) c[static_cast<std::size_t>(i)] = has(s, i);
  return c;
}

}  // namespace

TEST_CASE("place systems from inertia data") {
  const PlaceSystem one = build_place_system({{4, true}});
  CHECK(one.size() == 1);
  CHECK(one.prime(0).f == 4);
  CHECK(one.prime(0).e_split);
  CHECK(one.degree() == 4);

  CHECK(build_place_system({{10, true}}).degree() == 10);

  const PlaceSystem two = build_place_system({{2, false}, {3, true}});
  CHECK(two.size() == 2);
  CHECK(two.prime(0).f == 2);
  CHECK_FALSE(two.prime(0).e_split);
  CHECK(two.prime(1).f == 3);
  CHECK(two.index_of(two.prime(1).id) == 1);
  CHECK_THROWS_AS(two.index_of("nope"), DomainError);
  CHECK_THROWS_AS(build_place_system({}), DomainError);
}

TEST_CASE("frobenius shifts on both cycles") {
  const PlaceSystem ps = build_place_system({{4, true}});
  CHECK(frobenius_shift(ps, ArchPlace{0, 1}, 1).i == 2);
  CHECK(frobenius_shift(ps, ArchPlace{0, 1}, 4).i == 1);
  CHECK(frobenius_shift(ps, ArchPlace{0, 1}, -2).i == 3);

  const PlaceSystem inert = build_place_system({{2, false}});
  // j = 3 on the 4-cycle steps to j = 0.
  CHECK(emb_shift(2, false, 3, 1) == 0);
  CHECK(emb_index(inert, frobenius_shift(inert, emb_at(inert, 0, 3), 1)) == 0);
}

TEST_CASE("embedding cycle laws") {
  for (int f = 1; f <= 6; ++f)
    for (bool split : {true, false})
      for (int j = 0; j < 2 * f; ++j) {
        CHECK(emb_conj(f, emb_conj(f, j)) == j);
        CHECK(emb_shift(f, split, j, 2 * f) == j);
        if (split) CHECK(emb_shift(f, split, j, f) == j);
        CHECK(emb_conj(f, emb_shift(f, split, j, 1)) == emb_shift(f, split, emb_conj(f, j), 1));
        CHECK(emb_shift(f, split, j, 1) % f == (j % f + 1) % f);
      }
}

TEST_CASE("conjugation and restriction on EmbE") {
  const PlaceSystem ps = build_place_system({{3, true}});
  const EmbE x{0, 0, 2};
  CHECK(conjugate(conjugate(x)) == x);
  CHECK(conjugate(x).sheet == 1);
  CHECK(restrict_to_F(x) == restrict_to_F(conjugate(x)));
}

TEST_CASE("n_tau examples") {
  const ShimuraDatum empty4 = single_prime_datum(4, true, 0);
  const NTau a = n_tau(empty4, {0, 1});
  CHECK(a.n == 1);
  CHECK(a.minus.i == 0);
  CHECK(a.plus.i == 2);

  // S = {sigma^-2 tau_0, sigma^-6 tau_0} on the 10-cycle, i.e. indices 8 and 4.
  const ShimuraDatum ten = single_prime_datum(10, true, bit(8) | bit(4));
  const NTau b = n_tau(ten, {0, 5});
  CHECK(b.n == 2);
  CHECK(b.minus.i == 3);
  const NTau c = n_tau(ten, {0, 9});
  CHECK(c.n == 2);
  CHECK(c.minus.i == 7);
}

TEST_CASE("n_tau agrees with a brute-force walk and partitions the cycle") {
  for (int f = 1; f <= 8; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, true, s);
      const auto cyc = cycle_of(f, s);
      int total = 0;
      for (int i : members(d.gaps(0))) {
        const NTau got = n_tau(d, {0, i});
        const oracle::Walk want = oracle::walk_n_tau(cyc, i);
        CHECK(got.n == want.n);
        CHECK(got.minus.i == want.minus);
        CHECK(got.plus.i == want.plus);
        CHECK(n_tau(d, got.minus).plus.i == i);
        CHECK(n_tau(d, got.plus).minus.i == i);
        total += got.n;
      }
      CHECK(total == f);
    }
}

TEST_CASE("prime types") {
  CHECK(classify_prime(single_prime_datum(4, true, 0), 0) == PrimeType::Alpha);
  CHECK(classify_prime(single_prime_datum(3, false, 0), 0) == PrimeType::Beta);
  CHECK(classify_prime(single_prime_datum(2, true, 0b11, false, Level::Iwahori), 0) == PrimeType::AlphaSharp);
  CHECK(classify_prime(single_prime_datum(2, true, 0b11, false), 0) == PrimeType::Alpha);
  CHECK(classify_prime(single_prime_datum(3, false, 0b111, true, Level::MaximalOrder), 0) == PrimeType::BetaSharp);
}

TEST_CASE("datum validation") {
  const PlaceSystem ps = build_place_system({{3, true}});
  EvenPlaceSet odd{{bit(0)}, {false}, 0};
  CHECK_THROWS_AS(validate_even_set(ps, odd), DomainError);

  // A ramified finite place forces every archimedean place above it into S.
  EvenPlaceSet partial{{bit(0)}, {true}, 0};
  CHECK_THROWS_AS(validate_even_set(ps, partial), DomainError);

  EvenPlaceSet ok{{bit(0) | bit(1)}, {false}, 0};
  CHECK_NOTHROW(make_datum(ps, ok, {Level::Hyperspecial}));
  CHECK_THROWS_AS(make_datum(ps, ok, {Level::Iwahori}), DomainError);
  CHECK_THROWS_AS(make_datum(ps, ok, {Level::MaximalOrder}), DomainError);

  try {
    make_datum(ps, ok, {Level::Iwahori});
  } catch (const DomainError& e) {
    CHECK(e.code() == ErrorCode::InconsistentLevel);
  }
}

TEST_CASE("level names round trip") {
  for (Level l : {Level::Hyperspecial, Level::Iwahori, Level::MaximalOrder}) CHECK(parse_level(level_name(l)) == l);
  CHECK_THROWS_AS(parse_level("parahoric"), DomainError);
}
