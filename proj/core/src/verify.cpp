#include "gostrata/verify.hpp"

#include <memory>

namespace gos {

ShimuraDatum random_single_prime_datum(int f, std::mt19937_64& rng) {
  require(f >= 1 && f <= kMaxInertia, ErrorCode::InvalidArgument, "f out of range");
  Mask s = 0;
  do {
    s = rng() & full_mask(f);
  } while (s == full_mask(f));
  const bool alpha = (f - popcount(s)) % 2 == 0;
  return single_prime_datum(f, alpha, s);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

RoundtripOutcome roundtrip_all_strata(const DieudonnePoint& pt, Mask s_lift_sheet1) {
  RoundtripOutcome out;
  out.stratum = stratum_of_point(pt);
  const ShimuraDatum& d = pt.datum;
  for (Mask t = out.stratum;; t = (t - 1) & out.stratum) {
    ++out.strata_checked;
    try {
      const StratumDescriptor desc = stratum_descriptor(d, {t});
      LiftOptions lo;
      lo.s_lift_sheet = {s_lift_sheet1};
      const LiftChoice lift = lift_assignment(d, desc, lo);
      const DeltaSets delta = delta_sets(d, desc, lift);
      const IsogenyTriple tri = build_isogeny_triple(pt, desc, lift, delta);
      const DieudonnePoint back = reconstruct_point(tri.b_point, tri.j_lines, d, desc, lift, delta);
      if (back.comp == pt.comp)
        ++out.strata_exact;
      else if (out.failure.empty())
        out.failure = "reconstruction differs for T mask " + std::to_string(t);
    } catch (const DomainError& e) {
      if (out.failure.empty()) out.failure = "T mask " + std::to_string(t) + ": " + e.what();
    }
    if (t == 0) break;
  }
  return out;
}

std::string delta_property_violation(const ShimuraDatum& d, const StratumDescriptor& desc,
                                     const LiftChoice& lift, const DeltaSets& delta) {
  for (int q = 0; q < d.places.size(); ++q) {
    const auto uq = static_cast<std::size_t>(q);
    const int f = d.f(q);
    const bool split = d.places.prime(q).e_split;
    const Mask tp_e = desc.t_prime[uq] | (desc.t_prime[uq] << f);
    const Mask t_tilde = lift.s_tilde_of_t[uq] & tp_e;
    const Mask t_tilde_c = conj_mask(f, t_tilde);
    const std::string where = " over " + d.places.prime(q).id;
    for (Mask set : {delta.plus[uq], delta.minus[uq]})
      for (int j : members(set)) {
        int n = 1;
        while (n <= 2 * f && has(set, emb_shift(f, split, j, -n))) ++n;
        if (!has(tp_e, emb_shift(f, split, j, -n)))
          return "run ending at " + std::to_string(j) + " does not start after T'" + where;
        if (has(tp_e, j) && n != n_tau(d, {q, j % f}).n)
          return "run length at " + std::to_string(j) + " differs from n_tau" + where;
        if (has(set, emb_shift(f, split, j, 1)) && !has(d.s_at(q), j % f))
          return "consecutive members outside S at " + std::to_string(j) + where;
      }
    for (int j = 0; j < 2 * f; ++j) {
      const bool in = has(delta.minus[uq], j);
      const bool next_in = has(delta.minus[uq], emb_shift(f, split, j, 1));
      if (in && !next_in && !has(t_tilde, j)) return "exit point " + std::to_string(j) + " not in the lift of T'" + where;
      if (!in && next_in && !has(t_tilde_c, j))
        return "entry point " + std::to_string(j) + " not conjugate to the lift of T'" + where;
    }
  }
  return {};
}

bool dimension_count_holds(const ShimuraDatum& d, const LiftChoice& lift, const DeltaSets& delta) {
  try {
    const SignatureProfile before = signature_from_lift(d.places, lift.s_tilde);
    return dimension_count_check(d.places, before, delta) == signature_from_lift(d.places, lift.s_tilde_of_t);
  } catch (const DomainError&) {
    return false;
  }
}

TrialSample sample_trial(long p, int f, int N, std::uint64_t seed, std::uint64_t index,
                         const std::optional<ShimuraDatum>& datum) {
  std::mt19937_64 rng = trial_rng(seed, index);
  TrialSample s;
  s.datum = datum ? *datum : random_single_prime_datum(f, rng);
  require(s.datum.places.size() == 1, ErrorCode::InvalidArgument, "points live over a single prime");
  const PrimeSlot& slot = s.datum.places.prime(0);
  s.sheet1 = rng() & s.datum.s_at(0);
  const Mask lift = default_s_lift(s.datum, {s.sheet1})[0];
  auto ring = std::make_shared<WittRing>(p, slot.e_split ? slot.f : 2 * slot.f, N);
  s.point = random_point(ring, s.datum, lift, rng);
  return s;
}

}  // namespace gos
