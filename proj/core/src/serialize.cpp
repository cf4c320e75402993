#include "gostrata/serialize.hpp"

#include "json.hpp"

namespace gos {

using nlohmann::ordered_json;

namespace {

ordered_json place_json(const PlaceSystem& ps, int prime, int i) {
  return ordered_json::array({ps.prime(prime).id, i});
}

ordered_json mask_places(const PlaceSystem& ps, const std::vector<Mask>& m) {
  ordered_json out = ordered_json::array();
  for (int q = 0; q < ps.size(); ++q)
    for (int i : members(m[q])) out.push_back(place_json(ps, q, i));
  return out;
}

// Embeddings of E are written as [prime, sheet, i].
ordered_json mask_embeddings(const PlaceSystem& ps, const std::vector<Mask>& m) {
  ordered_json out = ordered_json::array();
  for (int q = 0; q < ps.size(); ++q) {
    const int f = ps.prime(q).f;
    for (int j : members(m[q])) out.push_back(ordered_json::array({ps.prime(q).id, j / f, j % f}));
  }
  return out;
}

ordered_json even_set_json(const PlaceSystem& ps, const EvenPlaceSet& s) {
  ordered_json p = ordered_json::array();
  for (int q = 0; q < ps.size(); ++q)
    if (s.s_p[q]) p.push_back(ps.prime(q).id);
  return {{"infty", mask_places(ps, s.s_infty)}, {"p", p}, {"n_other", s.n_other}};
}

ordered_json levels_json(const ShimuraDatum& d) {
  ordered_json out = ordered_json::object();
  for (int q = 0; q < d.places.size(); ++q) out[d.places.prime(q).id] = level_name(d.level[q]);
  return out;
}

template <class F>
auto guarded(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

ordered_json datum_json(const ShimuraDatum& d) {
  ordered_json primes = ordered_json::array();
  for (const auto& p : d.places.primes())
    primes.push_back({{"id", p.id}, {"f", p.f}, {"e_split", p.e_split}});
  return {{"primes", primes}, {"S", even_set_json(d.places, d.s)}, {"level", levels_json(d)}};
}

DatumFile parse_datum(const ordered_json& j) {
  std::vector<PrimeSlot> slots;
  for (const auto& p : j.at("primes"))
    slots.push_back({p.at("id").get<std::string>(), p.at("f").get<int>(), p.value("e_split", true)});
  PlaceSystem ps(std::move(slots));
  const int k = ps.size();
  EvenPlaceSet s{std::vector<Mask>(k, 0), std::vector<bool>(k, false), 0};
  std::vector<Level> level(k, Level::Hyperspecial);
  if (j.contains("S")) {
    const auto& sj = j.at("S");
    if (sj.contains("infty"))
      for (const auto& pl : sj.at("infty")) {
        const int q = ps.index_of(pl.at(0).get<std::string>());
        const int i = pl.at(1).get<int>();
        require(i >= 0 && i < ps.prime(q).f, ErrorCode::InvalidArgument, "place index out of range");
        s.s_infty[q] |= bit(i);
      }
    if (sj.contains("p"))
      for (const auto& id : sj.at("p")) s.s_p[ps.index_of(id.get<std::string>())] = true;
    s.n_other = sj.value("n_other", 0);
  }
  if (j.contains("level"))
    for (const auto& [id, lv] : j.at("level").items()) level[ps.index_of(id)] = parse_level(lv.get<std::string>());
  DatumFile out{make_datum(std::move(ps), std::move(s), std::move(level)), std::nullopt, std::nullopt};
  if (j.contains("p")) out.p = j.at("p").get<long>();
  if (j.contains("S_lift")) {
    std::vector<Mask> sheet1(static_cast<std::size_t>(k), 0);
    for (const auto& e : j.at("S_lift")) {
      const int q = out.datum.places.index_of(e.at(0).get<std::string>());
      const int sheet = e.at(1).get<int>();
      const int i = e.at(2).get<int>();
      require(has(out.datum.s.s_infty[q], i), ErrorCode::InvalidArgument, "S_lift names a place outside S");
      if (sheet == 1) sheet1[q] |= bit(i);
    }
    out.s_lift_sheet = sheet1;
  }
  return out;
}

ordered_json link_json(const Link& l) {
  ordered_json disp = ordered_json::object();
  for (const auto& [v, d] : l.disp) disp[std::to_string(v)] = d;
  return {{"n", l.source.n},
          {"source_nodes", members(l.source.nodes)},
          {"target_nodes", members(l.target.nodes)},
          {"disp", disp},
          {"v", total_displacement(l)}};
}

ordered_json mat_json(const WittRing& r, const Mat2& m) {
  return ordered_json::array({ordered_json::array({r.to_hex(m.e[0][0]), r.to_hex(m.e[0][1])}),
                              ordered_json::array({r.to_hex(m.e[1][0]), r.to_hex(m.e[1][1])})});
}

Mat2 mat_from(const WittRing& r, const ordered_json& j) {
  Mat2 m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m.e[a][b] = r.from_hex(j.at(a).at(b).get<std::string>());
  return m;
}

}  // namespace

DatumFile datum_from_json(const std::string& text) {
  return guarded([&] { return parse_datum(ordered_json::parse(text)); });
}

std::string datum_to_json(const ShimuraDatum& d) { return datum_json(d).dump(); }

std::string descriptor_to_json(const ShimuraDatum& d, const StratumDescriptor& desc) {
  ordered_json cases = ordered_json::object();
  ordered_json tprime = ordered_json::object();
  for (int q = 0; q < d.places.size(); ++q) {
    cases[d.places.prime(q).id] = case_name(desc.cases[q]);
    ordered_json tp = ordered_json::array();
    for (int i : members(desc.t_prime[q])) tp.push_back(place_json(d.places, q, i));
    if (desc.t_prime_p[q]) tp.push_back(d.places.prime(q).id);
    tprime[d.places.prime(q).id] = tp;
  }
  ordered_json j = {{"T", mask_places(d.places, desc.t)},
                    {"T_prime", tprime},
                    {"S_of_T", even_set_json(d.places, desc.target.s)},
                    {"I_T", mask_places(d.places, desc.i_t)},
                    {"N", desc.n_bundle},
                    {"cases", cases},
                    {"level_T", levels_json(desc.target)}};
  return j.dump();
}

std::string lift_to_json(const ShimuraDatum& d, const LiftChoice& lift, const DeltaSets& delta) {
  ordered_json j = {{"S_tilde", mask_embeddings(d.places, lift.s_tilde)},
                    {"S_tilde_of_T", mask_embeddings(d.places, lift.s_tilde_of_t)},
                    {"I_tilde_T", mask_embeddings(d.places, lift.i_tilde_t)},
                    {"delta_plus", mask_embeddings(d.places, delta.plus)},
                    {"delta_minus", mask_embeddings(d.places, delta.minus)}};
  return j.dump();
}

Link link_from_json(const std::string& text) {
  return guarded([&] {
    const auto j = ordered_json::parse(text);
    Link l;
    l.source.n = l.target.n = j.at("n").get<int>();
    require(l.source.n >= 1 && l.source.n <= 60, ErrorCode::InvalidArgument, "band length must lie in [1, 60]");
    for (int v : j.at("source_nodes").get<std::vector<int>>()) {
      require(v >= 0 && v < l.source.n, ErrorCode::InvalidArgument, "node outside the band");
      l.source.nodes |= bit(v);
    }
    for (int v : j.at("target_nodes").get<std::vector<int>>()) {
      require(v >= 0 && v < l.source.n, ErrorCode::InvalidArgument, "node outside the band");
      l.target.nodes |= bit(v);
    }
    for (const auto& [k, d] : j.at("disp").items()) l.disp[std::stoi(k)] = d.get<long>();
    return l;
  });
}

std::string link_to_json(const Link& l) { return link_json(l).dump(); }

std::string morphism_to_json(const LinkMorphismDescriptor& m, std::optional<long> p) {
  ordered_json j = {{"kind", morphism_kind_name(m.note)},
                    {"link", link_json(m.link)},
                    {"indentation", m.indentation}};
  if (m.degree_exponent) {
    j["degree_exponent"] = *m.degree_exponent;
    if (p) j["degree"] = ipow(*p, static_cast<int>(*m.degree_exponent)).str();
  }
  return j.dump();
}

std::string ring_to_json(const WittRing& r) {
  ordered_json j = {{"p", r.p()}, {"m", r.m()}, {"N", r.N()}, {"modulus", r.modulus()}};
  return j.dump();
}

PointFile point_file_from_json(const std::string& text) {
  return guarded([&] {
    const auto j = ordered_json::parse(text);
    const auto& rj = j.at("ring");
    std::vector<std::int64_t> modulus;
    if (rj.contains("modulus")) modulus = rj.at("modulus").get<std::vector<std::int64_t>>();
    PointFile pf;
    pf.ring = std::make_shared<WittRing>(rj.at("p").get<long>(), rj.at("m").get<int>(),
                                         rj.value("N", 8), modulus);
    pf.datum = parse_datum(j.at("datum")).datum;
    const int f = pf.datum.f(0);
    for (const auto& e : j.value("s_lift", ordered_json::array())) {
      const int sheet = e.at(0).get<int>();
      const int i = e.at(1).get<int>();
      require(sheet >= 0 && sheet <= 1 && i >= 0 && i < f, ErrorCode::InvalidArgument, "bad lift entry");
      pf.s_lift |= bit(sheet * f + i);
    }
    for (const auto& m : j.at("f_mats")) pf.f_mats.push_back(mat_from(*pf.ring, m));
    if (j.contains("pairings"))
      for (const auto& m : j.at("pairings")) pf.pairings.push_back(mat_from(*pf.ring, m));
    return pf;
  });
}

std::string point_to_json(const DieudonnePoint& pt) {
  const WittRing& r = *pt.iso->ring;
  const int f = pt.iso->f;
  ordered_json lift = ordered_json::array();
  for (int j : members(pt.s_lift)) lift.push_back(ordered_json::array({j / f, j % f}));
  ordered_json fm = ordered_json::array();
  ordered_json pm = ordered_json::array();
  for (const Mat2& m : pt.iso->f_mat) fm.push_back(mat_json(r, m));
  for (const Mat2& m : pt.iso->pairing) pm.push_back(mat_json(r, m));
  ordered_json j = {{"ring", ordered_json::parse(ring_to_json(r))},
                    {"datum", datum_json(pt.datum)},
                    {"s_lift", lift},
                    {"f_mats", fm},
                    {"pairings", pm}};
  return j.dump();
}

std::string rational_to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

Rational rational_from_string(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    const BigInt den(s.substr(slash + 1));
    require(den != 0, ErrorCode::InvalidArgument, "zero denominator");
    return Rational(BigInt(s.substr(0, slash)), den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    fail(ErrorCode::InvalidArgument, "not a rational number: " + s);
  }
}

}  // namespace gos
