#include "gostrata/strata.hpp"

#include <algorithm>

namespace gos {

const char* case_name(CaseTag c) {
  switch (c) {
    case CaseTag::A1: return "A1";
    case CaseTag::A2: return "A2";
    case CaseTag::B1: return "B1";
    case CaseTag::B2: return "B2";
    case CaseTag::ASharpPass: return "ASharp";
    case CaseTag::BSharpPass: return "BSharp";
  }
  return "?";
}

Mask Chain::member_mask(int f) const {
  Mask out = 0;
  for (int a = 0; a <= m; ++a) out |= bit(mod(top - a, f));
  return out;
}

Mask conj_mask(int f, Mask m) {
  const Mask lo = m & full_mask(f);
  const Mask hi = (m >> f) & full_mask(f);
  return (lo << f) | hi;
}

Mask shift_emask(int f, bool e_split, Mask m, long k) {
  Mask out = 0;
  for (int j : members(m)) out |= bit(emb_shift(f, e_split, j, k));
  return out;
}

namespace {

void check_t(const ShimuraDatum& d, const std::vector<Mask>& t) {
  require(t.size() == static_cast<std::size_t>(d.places.size()), ErrorCode::InvalidArgument,
          "stratum must list a subset for every prime");
  for (int q = 0; q < d.places.size(); ++q)
    require((t[q] & ~d.gaps(q)) == 0, ErrorCode::InvalidArgument,
            "T meets the ramification set or leaves the cycle at " + d.places.prime(q).id);
}

// sigma^{-a} of the anchor along the walk of length 2f that passes to the
// conjugate sheet after f steps (for an inert prime this is the cycle itself).
int walk(int f, bool e_split, int anchor, int a) {
  if (a < f) return emb_shift(f, e_split, anchor, -a);
  return emb_conj(f, emb_shift(f, e_split, anchor, -(a - f)));
}

Mask alternate(int f, bool e_split, const LiftRun& run) {
  // Members at odd positions (1-based) go on the anchor side, even ones are conjugated.
  Mask out = 0;
  for (std::size_t k = 0; k < run.a.size(); ++k) {
    const int e = walk(f, e_split, run.anchor, run.a[k]);
    out |= bit(k % 2 == 0 ? e : emb_conj(f, e));
  }
  return out;
}

}  // namespace

std::vector<Chain> chain_decompose(const ShimuraDatum& d, int prime, Mask t) {
  const int f = d.f(prime);
  require((t & ~d.gaps(prime)) == 0, ErrorCode::InvalidArgument, "T meets the ramification set");
  const Mask u = d.s_at(prime) | t;
  require(u != full_mask(f), ErrorCode::FullCycle, "S and T cover the whole cycle");
  std::vector<Chain> out;
  for (int i = 0; i < f; ++i) {
    if (!has(u, i) || has(u, mod(i + 1, f))) continue;
    int m = 0;
    while (has(u, mod(i - m - 1, f))) ++m;
    out.push_back({prime, i, m});
  }
  return out;
}

StratumDescriptor stratum_descriptor(const ShimuraDatum& d, const std::vector<Mask>& t) {
  validate_datum(d);
  check_t(d, t);
  const int k = d.places.size();
  StratumDescriptor out;
  out.t = t;
  out.t_prime.assign(k, 0);
  out.t_prime_p.assign(k, false);
  out.cases.resize(k);
  out.chains.resize(k);
  out.target = d;

  for (int q = 0; q < k; ++q) {
    const int f = d.f(q);
    const PrimeType type = classify_prime(d, q);
    const bool all_gaps = t[q] == d.gaps(q);
    switch (type) {
      case PrimeType::AlphaSharp:
        out.cases[q] = CaseTag::ASharpPass;
        break;
      case PrimeType::BetaSharp:
        out.cases[q] = CaseTag::BSharpPass;
        break;
      case PrimeType::Alpha:
      case PrimeType::Beta: {
        const bool alpha = type == PrimeType::Alpha;
        if (all_gaps) {
          out.cases[q] = alpha ? CaseTag::A2 : CaseTag::B2;
          out.t_prime[q] = t[q];
          if (alpha) {
            if (t[q] != 0) out.target.level[q] = Level::Iwahori;
          } else {
            out.t_prime_p[q] = true;
            out.target.level[q] = Level::MaximalOrder;
          }
          break;
        }
        out.cases[q] = alpha ? CaseTag::A1 : CaseTag::B1;
        out.chains[q] = chain_decompose(d, q, t[q]);
        for (const Chain& c : out.chains[q]) {
          const Mask hit = c.member_mask(f) & t[q];
          out.t_prime[q] |= hit;
          if (popcount(hit) % 2 == 1) out.t_prime[q] |= bit(mod(c.top - c.m - 1, f));
        }
        break;
      }
    }
    out.target.s.s_infty[q] |= out.t_prime[q];
    if (out.t_prime_p[q]) out.target.s.s_p[q] = true;
  }
  validate_datum(out.target);

  out.i_t.assign(k, 0);
  for (int q = 0; q < k; ++q) {
    out.i_t[q] = out.target.s.s_infty[q] & ~(d.s.s_infty[q] | t[q]);
    out.n_bundle += popcount(out.i_t[q]);
  }
  return out;
}

std::vector<Mask> default_s_lift(const ShimuraDatum& d, const std::vector<Mask>& sheet1) {
  std::vector<Mask> out(static_cast<std::size_t>(d.places.size()), 0);
  for (int q = 0; q < d.places.size(); ++q) {
    const int f = d.f(q);
    const Mask up = q < static_cast<int>(sheet1.size()) ? sheet1[q] : 0;
    for (int i : members(d.s_at(q))) out[q] |= bit(has(up, i) ? f + i : i);
  }
  return out;
}

LiftChoice lift_assignment(const ShimuraDatum& d, const StratumDescriptor& desc,
                           const LiftOptions& opts) {
  const int k = d.places.size();
  LiftChoice out;
  out.s_tilde = default_s_lift(d, opts.s_lift_sheet);
  out.s_tilde_of_t = out.s_tilde;
  out.i_tilde_t.assign(k, 0);
  out.beta_choices.resize(k);
  out.runs.resize(k);

  for (int q = 0; q < k; ++q) {
    const int f = d.f(q);
    const bool split = d.places.prime(q).e_split;
    const Mask t = desc.t[q];
    switch (desc.cases[q]) {
      case CaseTag::ASharpPass:
      case CaseTag::BSharpPass:
        break;
      case CaseTag::A1:
      case CaseTag::B1: {
        const auto& chains = desc.chains[q];
        for (std::size_t ci = 0; ci < chains.size(); ++ci) {
          const Chain& c = chains[ci];
          int sheet = 0;
          if (!split && q < static_cast<int>(opts.beta_choices.size()) &&
              ci < opts.beta_choices[q].size())
            sheet = opts.beta_choices[q][ci];
          require(sheet == 0 || sheet == 1, ErrorCode::InvalidArgument, "sheet must be 0 or 1");
          out.beta_choices[q].push_back(sheet);
          LiftRun run{sheet * f + c.top, {}};
          for (int a = 0; a <= c.m; ++a)
            if (has(t, mod(c.top - a, f))) run.a.push_back(a);
          const bool odd = run.a.size() % 2 == 1;
          if (odd) run.a.push_back(c.m + 1);
          out.s_tilde_of_t[q] |= alternate(f, split, run);
          if (odd) out.i_tilde_t[q] |= bit(walk(f, split, run.anchor, run.a.back()));
          out.runs[q].push_back(std::move(run));
        }
        break;
      }
      case CaseTag::A2:
      case CaseTag::B2: {
        if (t == 0) break;
        int anchor = members(t).front();
        if (q < static_cast<int>(opts.a2_anchor.size()) && opts.a2_anchor[q] >= 0) {
          anchor = opts.a2_anchor[q];
          require(anchor < f && has(t, anchor), ErrorCode::InvalidArgument,
                  "anchor must be a member of T");
        }
        const bool b2 = desc.cases[q] == CaseTag::B2;
        require(!(b2 && split), ErrorCode::Inapplicable,
                "the B2 lift needs the prime inert in E");
        LiftRun run{anchor, {}};
        const int span = b2 ? 2 * f : f;
        for (int a = 0; a < span; ++a)
          if (has(t, mod(anchor - a, f))) run.a.push_back(a);
        // B2 keeps every other member of the doubled walk; A2 alternates sheets.
        if (b2) {
          for (std::size_t j = 0; j < run.a.size(); j += 2)
            out.s_tilde_of_t[q] |= bit(walk(f, split, anchor, run.a[j]));
        } else {
          out.s_tilde_of_t[q] |= alternate(f, split, run);
        }
        out.runs[q].push_back(std::move(run));
        break;
      }
    }
  }
  return out;
}

DeltaSets delta_sets(const ShimuraDatum& d, const StratumDescriptor& desc, const LiftChoice& lift) {
  const int k = d.places.size();
  DeltaSets out{std::vector<Mask>(k, 0), std::vector<Mask>(k, 0)};
  for (int q = 0; q < k; ++q) {
    const int f = d.f(q);
    const bool split = d.places.prime(q).e_split;
    const CaseTag c = desc.cases[q];
    if (c == CaseTag::ASharpPass || c == CaseTag::BSharpPass) continue;
    for (const LiftRun& run : lift.runs[q])
      for (std::size_t j = 0; j + 1 < run.a.size(); j += 2)
        for (int l = run.a[j]; l < run.a[j + 1]; ++l)
          out.minus[q] |= bit(walk(f, split, run.anchor, l));
    if (c != CaseTag::B2) out.plus[q] = conj_mask(f, out.minus[q]);
  }
  return out;
}

SignatureProfile signature_from_lift(const PlaceSystem& ps, const std::vector<Mask>& lift) {
  require(lift.size() == static_cast<std::size_t>(ps.size()), ErrorCode::InvalidArgument,
          "lift must list a subset for every prime");
  SignatureProfile out;
  for (int q = 0; q < ps.size(); ++q) {
    const int f = ps.prime(q).f;
    require((lift[q] & conj_mask(f, lift[q])) == 0, ErrorCode::InvalidArgument,
            "two lifts of the same place");
    std::vector<int> s(static_cast<std::size_t>(2 * f), 1);
    for (int j : members(lift[q])) {
      require(j < 2 * f, ErrorCode::InvalidArgument, "embedding outside the cycle");
      s[j] = 0;
      s[emb_conj(f, j)] = 2;
    }
    out.s.push_back(std::move(s));
  }
  return out;
}

SignatureProfile dimension_count_check(const PlaceSystem& ps, const SignatureProfile& s,
                                       const DeltaSets& delta) {
  SignatureProfile out = s;
  for (int q = 0; q < ps.size(); ++q) {
    const int f = ps.prime(q).f;
    const bool split = ps.prime(q).e_split;
    auto term = [&](int j) {
      return (has(delta.minus[q], j) ? 1 : 0) - (has(delta.plus[q], j) ? 1 : 0);
    };
    for (int j = 0; j < 2 * f; ++j) {
      const int v = s.s[q][j] - term(j) + term(emb_shift(f, split, j, 1));
      require(v >= 0 && v <= 2, ErrorCode::InvalidArgument,
              "dimension count leaves the range [0, 2]");
      out.s[q][j] = v;
    }
  }
  return out;
}

}  // namespace gos
