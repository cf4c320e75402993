#include <doctest.h>

#include <random>

#include "gostrata/serialize.hpp"
#include "gostrata/verify.hpp"

using namespace gos;

TEST_CASE("datum files") {
  const DatumFile q = datum_from_json(
      R"({"primes":[{"id":"p1","f":4,"e_split":true}],"S":{"infty":[],"p":[],"n_other":0},)"
      R"("level":{"p1":"hyperspecial"},"p":3})");
  CHECK(q.p == 3);
  CHECK(q.datum.f(0) == 4);
  CHECK(q.datum.s_at(0) == 0);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const ShimuraDatum d = random_single_prime_datum(1 + static_cast<int>(rng() % 8), rng);
    const std::string text = datum_to_json(d);
    const DatumFile back = datum_from_json(text);
    CHECK(back.datum.places == d.places);
    CHECK(back.datum.s == d.s);
    CHECK(back.datum.level == d.level);
    CHECK(datum_to_json(back.datum) == text);
  }

  CHECK_THROWS_AS(datum_from_json("{"), DomainError);
  CHECK_THROWS_AS(datum_from_json(R"({"primes":[]})"), DomainError);
  // Odd ramification is refused on load.
  CHECK_THROWS_AS(datum_from_json(R"({"primes":[{"id":"p1","f":3,"e_split":true}],)"
                                  R"("S":{"infty":[["p1",0]],"p":[],"n_other":0},"level":{"p1":"hyperspecial"}})"),
                  DomainError);
}

TEST_CASE("links") {
  const Link l{{5, bit(0) | bit(2) | bit(4)}, {5, bit(0) | bit(2) | bit(3)}, {{0, 3}, {2, 3}, {4, 3}}};
  const std::string text = link_to_json(l);
  CHECK(text.find("\"v\":9") != std::string::npos);
  CHECK(link_from_json(text) == l);
  CHECK_THROWS_AS(link_from_json(R"({"n":3,"source_nodes":[5],"target_nodes":[],"disp":{}})"), DomainError);
  CHECK_THROWS_AS(link_from_json(R"({"n":0,"source_nodes":[],"target_nodes":[],"disp":{}})"), DomainError);
}

TEST_CASE("points") {
  for (long p : {2L, 3L})
    for (int f : {2, 3})
      for (std::uint64_t i = 0; i < 5; ++i) {
        const TrialSample s = sample_trial(p, f, 8, 31, i);
        const std::string text = point_to_json(s.point);
        const PointFile pf = point_file_from_json(text);
        const DieudonnePoint back =
            make_point(pf.ring, pf.datum, pf.f_mats, pf.pairings, s.point.signature, pf.s_lift);
        CHECK(back.comp == s.point.comp);
        CHECK(back.iso->f_mat == s.point.iso->f_mat);
        CHECK(point_to_json(back) == text);
      }
}

TEST_CASE("rationals") {
  for (const char* s : {"0", "-7", "3/4", "-12/5", "123456789012345678901234567890"})
    CHECK(rational_to_string(rational_from_string(s)) == s);
  CHECK(rational_to_string(rational_from_string("6/4")) == "3/2");
  CHECK_THROWS_AS(rational_from_string("1/0"), DomainError);
  CHECK_THROWS_AS(rational_from_string("x"), DomainError);
}

TEST_CASE("descriptor output is stable") {
  const ShimuraDatum d = single_prime_datum(4, true, 0);
  const StratumDescriptor desc = stratum_descriptor(d, {bit(0) | bit(2)});
  const std::string a = descriptor_to_json(d, desc);
  CHECK(a == descriptor_to_json(d, stratum_descriptor(d, {bit(0) | bit(2)})));
  CHECK(a.find("\"N\":2") != std::string::npos);
}
