#include <doctest.h>

#include "gostrata/strata.hpp"
#include "gostrata/verify.hpp"
#include "oracles.hpp"

using namespace gos;

namespace {

oracle::Cycle cycle_of(int f, Mask s) {
  oracle::Cycle c(static_cast<std::size_t>(f));
  for (int i = 0; i < f; ++i) c[static_cast<std::size_t>(i)] = has(s, i);
  return c;
}

Mask mask_of_cycle(const oracle::Cycle& c) {
  Mask m = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) m |= bit(static_cast<int>(i));
  return m;
}

// sigma^-k tau_0 on a cycle of length f.
int back(int f, int k) { return mod(-k, f); }

}  // namespace

TEST_CASE("chains of the ten-cycle example") {
  const int f = 10;
  const ShimuraDatum d = single_prime_datum(f, true, bit(back(f, 2)) | bit(back(f, 6)));
  const Mask t = bit(back(f, 3)) | bit(back(f, 5)) | bit(back(f, 7));
  const auto chains = chain_decompose(d, 0, t);
  REQUIRE(chains.size() == 2);
  // {sigma^-2, sigma^-3} has top 8; {sigma^-5, sigma^-6, sigma^-7} has top 5.
  CHECK(chains[0].top == 5);
  CHECK(chains[0].m == 2);
  CHECK(chains[1].top == 8);
  CHECK(chains[1].m == 1);
  CHECK(chains[1].member_mask(f) == (bit(8) | bit(7)));
}

TEST_CASE("small chain examples") {
  const ShimuraDatum d = single_prime_datum(4, true, 0);
  auto one = chain_decompose(d, 0, bit(1));
  REQUIRE(one.size() == 1);
  CHECK(one[0].top == 1);
  CHECK(one[0].m == 0);
  auto two = chain_decompose(d, 0, bit(1) | bit(2));
  REQUIRE(two.size() == 1);
  CHECK(two[0].top == 2);
  CHECK(two[0].m == 1);
}

TEST_CASE("chains match brute-force maximal runs") {
  for (int f = 2; f <= 8; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, true, s);
      const Mask gaps = d.gaps(0);
      for (Mask t = gaps;; t = (t - 1) & gaps) {
        if ((s | t) != full_mask(f)) {
          const auto got = chain_decompose(d, 0, t);
          const auto want = oracle::runs(cycle_of(f, s | t));
          REQUIRE(got.size() == want.size());
          for (std::size_t k = 0; k < got.size(); ++k) {
            CHECK(got[k].top == want[k].first);
            CHECK(got[k].m == want[k].second);
          }
        }
        if (t == 0) break;
      }
    }
}

TEST_CASE("quartic descriptors") {
  const ShimuraDatum d = single_prime_datum(4, true, 0);
  const auto single = stratum_descriptor(d, {bit(1)});
  CHECK(single.target.s.s_infty[0] == (bit(0) | bit(1)));
  CHECK(single.n_bundle == 1);
  CHECK(single.cases[0] == CaseTag::A1);

  const auto opposite = stratum_descriptor(d, {bit(1) | bit(3)});
  CHECK(opposite.target.s.s_infty[0] == full_mask(4));
  CHECK(opposite.n_bundle == 2);

  const auto all = stratum_descriptor(d, {full_mask(4)});
  CHECK(all.target.s.s_infty[0] == full_mask(4));
  CHECK(all.target.level[0] == Level::Iwahori);
  CHECK(all.n_bundle == 0);
  CHECK(all.cases[0] == CaseTag::A2);
}

TEST_CASE("cubic with T everything adds the finite place") {
  const ShimuraDatum d = single_prime_datum(3, false, 0);
  const auto desc = stratum_descriptor(d, {full_mask(3)});
  CHECK(desc.cases[0] == CaseTag::B2);
  CHECK(desc.t_prime_p[0]);
  CHECK(desc.target.s.s_p[0]);
  CHECK(desc.target.s.s_infty[0] == full_mask(3));
  CHECK(desc.target.level[0] == Level::MaximalOrder);
  CHECK(desc.n_bundle == 0);
}

TEST_CASE("ten-cycle T prime and I_T") {
  const int f = 10;
  const ShimuraDatum d = single_prime_datum(f, true, bit(back(f, 2)) | bit(back(f, 6)));
  const Mask t = bit(back(f, 3)) | bit(back(f, 5)) | bit(back(f, 7));
  const auto desc = stratum_descriptor(d, {t});
  CHECK(desc.t_prime[0] == (bit(back(f, 3)) | bit(back(f, 4)) | bit(back(f, 5)) | bit(back(f, 7))));
  CHECK(desc.i_t[0] == bit(back(f, 4)));
  CHECK(desc.n_bundle == 1);
}

TEST_CASE("empty stratum is the identity") {
  for (int f = 1; f <= 6; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, (f - popcount(s)) % 2 == 0, s);
      const auto desc = stratum_descriptor(d, {0});
      CHECK(desc.target.s == d.s);
      CHECK(desc.target.level == d.level);
      CHECK(desc.n_bundle == 0);
    }
}

TEST_CASE("overlap of S and T is rejected") {
  const ShimuraDatum d = single_prime_datum(4, true, bit(0) | bit(1));
  CHECK_THROWS_AS(stratum_descriptor(d, {bit(1)}), DomainError);
}

TEST_CASE("descriptors agree with the brute-force recipe") {
  for (int f = 1; f <= 8; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const ShimuraDatum d = single_prime_datum(f, true, s);
      const Mask gaps = d.gaps(0);
      for (Mask t = gaps;; t = (t - 1) & gaps) {
        const auto desc = stratum_descriptor(d, {t});
        const oracle::Recipe r = oracle::recipe(cycle_of(f, s), cycle_of(f, t));
        CHECK(desc.t_prime[0] == mask_of_cycle(r.t_prime));
        CHECK(desc.t_prime_p[0] == r.prime_in_t_prime);
        CHECK(desc.target.s.s_infty[0] == mask_of_cycle(r.s_of_t));
        CHECK(desc.i_t[0] == mask_of_cycle(r.i_t));
        CHECK(desc.n_bundle == r.n);
        CHECK((desc.target.level[0] == Level::Iwahori) == r.iwahori);
        CHECK((desc.target.level[0] == Level::MaximalOrder) == r.maximal);
        // T' has even size once the finite place is counted.
        CHECK((popcount(desc.t_prime[0]) + (desc.t_prime_p[0] ? 1 : 0)) % 2 == 0);
        CHECK((desc.t_prime[0] & t) == t);
        CHECK_NOTHROW(validate_datum(desc.target));
        if (t == 0) break;
      }
    }
}

TEST_CASE("sharp primes pass through") {
  const ShimuraDatum d = single_prime_datum(2, true, 0b11, false, Level::Iwahori);
  const auto desc = stratum_descriptor(d, {0});
  CHECK(desc.cases[0] == CaseTag::ASharpPass);
  const auto lift = lift_assignment(d, desc);
  const auto delta = delta_sets(d, desc, lift);
  CHECK(delta.plus[0] == 0);
  CHECK(delta.minus[0] == 0);
}

TEST_CASE("lift and Delta examples") {
  SUBCASE("quartic, T = {tau_1}") {
    const ShimuraDatum d = single_prime_datum(4, true, 0);
    const auto desc = stratum_descriptor(d, {bit(1)});
    const auto lift = lift_assignment(d, desc);
    // lift of tau_1 on sheet 0, and the conjugate of sigma^-1 of it.
    CHECK(lift.s_tilde_of_t[0] == (bit(1) | bit(4 + 0)));
    const auto delta = delta_sets(d, desc, lift);
    CHECK(delta.minus[0] == bit(1));
    CHECK(delta.plus[0] == bit(4 + 1));
    const auto s = signature_from_lift(d.places, lift.s_tilde_of_t).s[0];
    CHECK(s[1] == 0);
    CHECK(s[4] == 0);
    CHECK(s[5] == 2);
    CHECK(s[0] == 2);
    CHECK(s[2] == 1);
  }
  SUBCASE("f = 2 split, T everything, anchor tau_1") {
    const ShimuraDatum d = single_prime_datum(2, true, 0);
    const auto desc = stratum_descriptor(d, {0b11});
    LiftOptions lo;
    lo.a2_anchor = {1};
    const auto lift = lift_assignment(d, desc, lo);
    CHECK(lift.s_tilde_of_t[0] == (bit(1) | bit(2 + 0)));
  }
  SUBCASE("f = 3 inert, T everything") {
    const ShimuraDatum d = single_prime_datum(3, false, 0);
    const auto desc = stratum_descriptor(d, {0b111});
    const auto lift = lift_assignment(d, desc);
    // Offsets 0, 2, 4 on the 6-cycle from j = 0.
    CHECK(lift.s_tilde_of_t[0] == (bit(0) | bit(4) | bit(2)));
    const auto delta = delta_sets(d, desc, lift);
    CHECK(delta.plus[0] == 0);
    CHECK(delta.minus[0] == (bit(0) | bit(4) | bit(2)));
    const auto s0 = signature_from_lift(d.places, lift.s_tilde);
    CHECK(dimension_count_check(d.places, s0, delta) == signature_from_lift(d.places, lift.s_tilde_of_t));
  }
}

TEST_CASE("B2 on a prime split in E is inapplicable") {
  const ShimuraDatum d = single_prime_datum(3, true, 0);
  const auto desc = stratum_descriptor(d, {0b111});
  try {
    lift_assignment(d, desc);
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(e.code() == ErrorCode::Inapplicable);
  }
}

TEST_CASE("signature profiles") {
  const PlaceSystem ps = build_place_system({{4, true}});
  const auto flat = signature_from_lift(ps, {0}).s[0];
  for (int v : flat) CHECK(v == 1);
  const auto one = signature_from_lift(ps, {bit(1)}).s[0];
  CHECK(one[1] == 0);
  CHECK(one[5] == 2);
  CHECK(one[0] == 1);

  DeltaSets none{{0}, {0}};
  const SignatureProfile s = signature_from_lift(ps, {bit(2)});
  CHECK(dimension_count_check(ps, s, none) == s);
}

TEST_CASE("lifted S(T) restricts bijectively and I_T lifts correctly") {
  for (int f = 1; f <= 7; ++f)
    for (Mask s = 0; s < full_mask(f); ++s) {
      const bool split = (f - popcount(s)) % 2 == 0;
      const ShimuraDatum d = single_prime_datum(f, split, s);
      const Mask gaps = d.gaps(0);
      for (Mask t = gaps;; t = (t - 1) & gaps) {
        const auto desc = stratum_descriptor(d, {t});
        const auto lift = lift_assignment(d, desc);
        const Mask st = lift.s_tilde_of_t[0];
        const Mask low = st & full_mask(f), high = st >> f;
        CHECK((low & high) == 0);
        CHECK((low | high) == desc.target.s.s_infty[0]);
        for (int j : members(lift.i_tilde_t[0])) {
          CHECK(has(desc.i_t[0], j % f));
          CHECK(has(st, emb_conj(f, j)));
        }
        CHECK(popcount(lift.i_tilde_t[0]) == desc.n_bundle);
        if (t == 0) break;
      }
    }
}

TEST_CASE("Delta properties and dimension count over random larger cycles") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const int f = 9 + static_cast<int>(rng() % 4);
    Mask s = rng() & full_mask(f);
    if (s == full_mask(f)) s = 0;
    const bool split = (f - popcount(s)) % 2 == 0;
    const ShimuraDatum d = single_prime_datum(f, split, s);
    const Mask t = rng() & d.gaps(0);
    LiftOptions lo;
    lo.s_lift_sheet = {rng() & s};
    const auto desc = stratum_descriptor(d, {t});
    const auto lift = lift_assignment(d, desc, lo);
    const auto delta = delta_sets(d, desc, lift);
    CHECK(delta_property_violation(d, desc, lift, delta).empty());
    CHECK(dimension_count_holds(d, lift, delta));
  }
}
