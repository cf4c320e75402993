#include "gostrata/places.hpp"

#include <bit>

namespace gos {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FullCycle: return "FullCycle";
    case ErrorCode::InconsistentLevel: return "InconsistentLevel";
    case ErrorCode::Inapplicable: return "Inapplicable";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::NotSplit: return "NotSplit";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::StabilityViolated: return "StabilityViolated";
  }
  return "Unknown";
}

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> members(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= bit(i);
  return m;
}

bool operator==(const PrimeSlot& a, const PrimeSlot& b) {
  return a.id == b.id && a.f == b.f && a.e_split == b.e_split;
}

PlaceSystem::PlaceSystem(std::vector<PrimeSlot> primes) : primes_(std::move(primes)) {
  require(!primes_.empty(), ErrorCode::InvalidArgument, "at least one prime above p is required");
  for (std::size_t k = 0; k < primes_.size(); ++k) {
    const auto& p = primes_[k];
    require(p.f >= 1 && p.f <= kMaxInertia, ErrorCode::InvalidArgument,
            "inertia degree of " + p.id + " must lie in [1, 30]");
    for (std::size_t l = 0; l < k; ++l)
      require(primes_[l].id != p.id, ErrorCode::InvalidArgument, "duplicate prime id " + p.id);
  }
}

const PrimeSlot& PlaceSystem::prime(int k) const {
  require(k >= 0 && k < size(), ErrorCode::InvalidArgument, "prime index out of range");
  return primes_[static_cast<std::size_t>(k)];
}

int PlaceSystem::index_of(std::string_view id) const {
  for (int k = 0; k < size(); ++k)
    if (primes_[static_cast<std::size_t>(k)].id == id) return k;
  fail(ErrorCode::InvalidArgument, "unknown prime id " + std::string(id));
}

int PlaceSystem::degree() const {
  int g = 0;
  for (const auto& p : primes_) g += p.f;
  return g;
}

bool PlaceSystem::operator==(const PlaceSystem& o) const { return primes_ == o.primes_; }

PlaceSystem build_place_system(const std::vector<std::pair<int, bool>>& spec) {
  std::vector<PrimeSlot> slots;
  slots.reserve(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k)
    slots.push_back({"p" + std::to_string(k + 1), spec[k].first, spec[k].second});
  return PlaceSystem(std::move(slots));
}

ArchPlace frobenius_shift(const PlaceSystem& ps, ArchPlace x, long k) {
  const int f = ps.prime(x.prime).f;
  return {x.prime, mod(x.i + k, f)};
}

int emb_shift(int f, bool e_split, int j, long k) {
  if (e_split) {
    const int sheet = j / f;
    return sheet * f + mod(j % f + k, f);
  }
  return mod(j + k, 2L * f);
}

EmbE frobenius_shift(const PlaceSystem& ps, EmbE x, long k) {
  const auto& p = ps.prime(x.prime);
  return emb_at(ps, x.prime, emb_shift(p.f, p.e_split, emb_index(ps, x), k));
}

EmbE conjugate(EmbE x) { return {x.prime, 1 - x.sheet, x.i}; }

int emb_index(const PlaceSystem& ps, EmbE x) {
  const int f = ps.prime(x.prime).f;
  require(x.sheet == 0 || x.sheet == 1, ErrorCode::InvalidArgument, "sheet must be 0 or 1");
  require(x.i >= 0 && x.i < f, ErrorCode::InvalidArgument, "embedding index out of range");
  return x.sheet * f + x.i;
}

EmbE emb_at(const PlaceSystem& ps, int prime, int j) {
  const int f = ps.prime(prime).f;
  require(j >= 0 && j < 2 * f, ErrorCode::InvalidArgument, "embedding index out of range");
  return {prime, j / f, j % f};
}

const char* level_name(Level l) {
  switch (l) {
    case Level::Hyperspecial: return "hyperspecial";
    case Level::Iwahori: return "iwahori";
    case Level::MaximalOrder: return "maximal_order";
  }
  return "?";
}

Level parse_level(std::string_view s) {
  if (s == "hyperspecial") return Level::Hyperspecial;
  if (s == "iwahori") return Level::Iwahori;
  if (s == "maximal_order") return Level::MaximalOrder;
  fail(ErrorCode::InvalidArgument, "unknown level " + std::string(s));
}

const char* prime_type_name(PrimeType t) {
  switch (t) {
    case PrimeType::Alpha: return "alpha";
    case PrimeType::AlphaSharp: return "alpha_sharp";
    case PrimeType::Beta: return "beta";
    case PrimeType::BetaSharp: return "beta_sharp";
  }
  return "?";
}

int EvenPlaceSet::cardinality() const {
  int n = n_other;
  for (Mask m : s_infty) n += popcount(m);
  for (bool b : s_p) n += b ? 1 : 0;
  return n;
}

void validate_even_set(const PlaceSystem& ps, const EvenPlaceSet& s) {
  const auto k = static_cast<std::size_t>(ps.size());
  require(s.s_infty.size() == k && s.s_p.size() == k, ErrorCode::InvalidArgument,
          "ramification data does not match the number of primes");
  require(s.n_other >= 0, ErrorCode::InvalidArgument, "n_other must be nonnegative");
  for (int q = 0; q < ps.size(); ++q) {
    const Mask full = full_mask(ps.prime(q).f);
    require((s.s_infty[q] & ~full) == 0, ErrorCode::InvalidArgument,
            "archimedean place outside the cycle of " + ps.prime(q).id);
    require(!s.s_p[q] || s.s_infty[q] == full, ErrorCode::InvalidArgument,
            "ramified at " + ps.prime(q).id + " but not at every place above it");
  }
  require(s.cardinality() % 2 == 0, ErrorCode::InvalidArgument,
          "ramification set has odd cardinality");
}

void validate_datum(const ShimuraDatum& d) {
  validate_even_set(d.places, d.s);
  require(d.level.size() == static_cast<std::size_t>(d.places.size()),
          ErrorCode::InvalidArgument, "level list does not match the number of primes");
  for (int q = 0; q < d.places.size(); ++q) {
    const bool ram = d.s.s_p[q];
    const bool full = d.s.s_infty[q] == full_mask(d.f(q));
    const Level l = d.level[q];
    require((l == Level::MaximalOrder) == ram, ErrorCode::InconsistentLevel,
            "maximal order level must coincide with ramification at " + d.places.prime(q).id);
    require(l != Level::Iwahori || (full && !ram), ErrorCode::InconsistentLevel,
            "Iwahori level at " + d.places.prime(q).id + " needs every place above it ramified");
  }
}

ShimuraDatum make_datum(PlaceSystem ps, EvenPlaceSet s, std::vector<Level> level) {
  ShimuraDatum d{std::move(ps), std::move(s), std::move(level)};
  validate_datum(d);
  return d;
}

ShimuraDatum single_prime_datum(int f, bool e_split, Mask s_infty, bool s_p, Level level) {
  EvenPlaceSet s{{s_infty}, {s_p}, 0};
  s.n_other = s.cardinality() % 2;
  return make_datum(build_place_system({{f, e_split}}), std::move(s), {level});
}

NTau n_tau(const ShimuraDatum& d, ArchPlace tau) {
  const int f = d.f(tau.prime);
  const Mask S = d.s_at(tau.prime);
  require(tau.i >= 0 && tau.i < f, ErrorCode::InvalidArgument, "place index out of range");
  require(!has(S, tau.i), ErrorCode::InvalidArgument, "place lies in the ramification set");
  NTau r;
  int n = 1;
  while (has(S, mod(tau.i - n, f))) ++n;
  r.n = n;
  r.minus = {tau.prime, mod(tau.i - n, f)};
  int k = 1;
  while (has(S, mod(tau.i + k, f))) ++k;
  r.plus = {tau.prime, mod(tau.i + k, f)};
  return r;
}

PrimeType classify_prime(const ShimuraDatum& d, int prime) {
  validate_datum(d);
  if (d.s.s_p[prime]) return PrimeType::BetaSharp;
  const int count = popcount(d.gaps(prime));
  if (count % 2 == 1) return PrimeType::Beta;
  if (count == 0 && d.level[prime] == Level::Iwahori) return PrimeType::AlphaSharp;
  return PrimeType::Alpha;
}

}  // namespace gos
