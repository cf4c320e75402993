#include "gostrata/links.hpp"

#include <sstream>

#include "gostrata/strata.hpp"

namespace gos {

namespace {

void check_band(const Band& b) {
  require(b.n >= 1 && b.n <= 60, ErrorCode::InvalidArgument, "band length must lie in [1, 60]");
  require((b.nodes & ~full_mask(b.n)) == 0, ErrorCode::InvalidArgument, "node outside the band");
}

Link straight_except(const Band& src, const Band& tgt) {
  Link l{src, tgt, {}};
  for (int v : members(src.nodes)) l.disp[v] = 0;
  return l;
}

}  // namespace

Band band_of(const ShimuraDatum& d, int prime) { return {d.f(prime), d.gaps(prime)}; }

LinkReport validate_link(const Link& l) {
  LinkReport r;
  auto bad = [&](std::string why) {
    r.ok = false;
    r.violation = std::move(why);
    return r;
  };
  if (l.source.n < 1 || l.source.n != l.target.n) return bad("bands have different lengths");
  const int n = l.source.n;
  if ((l.source.nodes | l.target.nodes) & ~full_mask(n)) return bad("node outside the band");
  if (popcount(l.source.nodes) != popcount(l.target.nodes))
    return bad("source and target have different numbers of nodes");
  if (static_cast<int>(l.disp.size()) != popcount(l.source.nodes))
    return bad("displacements must be given exactly on the source nodes");
  for (const auto& [v, d] : l.disp)
    if (v < 0 || v >= n || !has(l.source.nodes, v))
      return bad("displacement attached to a non-node " + std::to_string(v));

  Mask hit = 0;
  for (const auto& [v, d] : l.disp) {
    const int t = mod(v + d, n);
    if (!has(l.target.nodes, t)) return bad("curve from " + std::to_string(v) + " ends off the target nodes");
    if (has(hit, t)) return bad("two curves end at target node " + std::to_string(t));
    hit |= bit(t);
    if (d >= n || d <= -n)
      r.warnings.push_back("curve from " + std::to_string(v) + " winds around the cylinder");
  }
  // Lifted endpoints must increase with the source order and stay within one period.
  bool first = true;
  long first_end = 0;
  long prev = 0;
  for (const auto& [v, d] : l.disp) {
    const long end = v + d;
    if (first) {
      first_end = end;
      first = false;
    } else if (end <= prev) {
      return bad("curves from the nodes before " + std::to_string(v) + " cross");
    }
    prev = end;
  }
  if (!first && prev >= first_end + n) return bad("the last curve crosses the first one");
  return r;
}

long total_displacement(const Link& l) {
  long v = 0;
  for (const auto& [node, d] : l.disp) v += d;
  return v;
}

Link identity_link(const Band& b) {
  check_band(b);
  return straight_except(b, b);
}

Link compose(const Link& l2, const Link& l1) {
  require(l1.target == l2.source, ErrorCode::InvalidArgument, "links are not composable");
  const int n = l1.source.n;
  Link out{l1.source, l2.target, {}};
  for (const auto& [v, d] : l1.disp) {
    const auto it = l2.disp.find(mod(v + d, n));
    require(it != l2.disp.end(), ErrorCode::InvalidArgument, "curve ends off the next link");
    out.disp[v] = d + it->second;
  }
  return out;
}

Link invert(const Link& l) {
  const int n = l.source.n;
  Link out{l.target, l.source, {}};
  for (const auto& [v, d] : l.disp) out.disp[mod(v + d, n)] = -d;
  return out;
}

Link frobenius_link(const ShimuraDatum& d, int prime, long k) {
  require(k >= 0, ErrorCode::InvalidArgument, "Frobenius power must be nonnegative");
  const Band src = band_of(d, prime);
  Band tgt{src.n, 0};
  Link l{src, tgt, {}};
  for (int v : members(src.nodes)) {
    l.target.nodes |= bit(mod(v + k, src.n));
    l.disp[v] = k;
  }
  return l;
}

bool turns_right(const Link& l) {
  for (const auto& [v, d] : l.disp)
    if (d < 0) return false;
  return true;
}

const char* morphism_kind_name(MorphismKind k) {
  switch (k) {
    case MorphismKind::PartialFrobenius: return "PartialFrobenius";
    case MorphismKind::DeltaTau0: return "DeltaTau0";
    case MorphismKind::EtaTauMinusPlus: return "EtaTauMinusPlus";
    case MorphismKind::TrivialHecke: return "TrivialHecke";
    case MorphismKind::Induced: return "Induced";
    case MorphismKind::Composite: return "Composite";
  }
  return "?";
}

MorphismKind parse_morphism_kind(const std::string& s) {
  for (auto k : {MorphismKind::PartialFrobenius, MorphismKind::DeltaTau0,
                 MorphismKind::EtaTauMinusPlus, MorphismKind::TrivialHecke})
    if (s == morphism_kind_name(k)) return k;
  fail(ErrorCode::InvalidArgument, "unknown morphism kind " + s);
}

LinkMorphismDescriptor standard_morphism(MorphismKind kind, const ShimuraDatum& d,
                                         const StandardParams& prm) {
  validate_datum(d);
  const int q = prm.prime;
  const int f = d.f(q);
  const bool split = d.places.prime(q).e_split;
  const Mask gaps = d.gaps(q);
  const Mask lift = prm.s_lift.value_or(default_s_lift(d)[q]);
  LinkMorphismDescriptor out;
  out.note = kind;

  switch (kind) {
    case MorphismKind::PartialFrobenius: {
      out.link = frobenius_link(d, q, 2);
      if (split) {
        const int on_q = popcount(lift & full_mask(f));
        const int on_qbar = popcount(lift >> f);
        out.indentation = 2L * on_qbar - 2L * on_q;
      }
      break;
    }
    case MorphismKind::DeltaTau0: {
      require(gaps == 0 && !d.s.s_p[q], ErrorCode::Inapplicable,
              "DeltaTau0 needs every place above the prime ramified and the prime itself unramified");
      require(prm.tau >= 0 && prm.tau < f, ErrorCode::InvalidArgument, "tau_0 out of range");
      require(prm.sheet == 0 || prm.sheet == 1, ErrorCode::InvalidArgument, "sheet must be 0 or 1");
      if (prm.s_lift) {
        const int anchor = prm.sheet * f + prm.tau;
        require(has(lift, anchor), ErrorCode::Inapplicable,
                "the lift of tau_0 is not on the requested sheet");
        require(!has(lift, emb_shift(f, split, anchor, -1)), ErrorCode::Inapplicable,
                "sigma^-1 of the lift of tau_0 lies in the lift of S");
      }
      out.link = identity_link(band_of(d, q));
      if (split) out.indentation = prm.sheet == 0 ? 2 : -2;
      break;
    }
    case MorphismKind::EtaTauMinusPlus: {
      require(prm.tau >= 0 && prm.tau < f && has(gaps, prm.tau), ErrorCode::Inapplicable,
              "tau must lie outside the ramification set");
      require(popcount(gaps) >= 3, ErrorCode::Inapplicable,
              "EtaTauMinusPlus needs at least three unramified places above the prime");
      const NTau nt = n_tau(d, {q, prm.tau});
      const NTau np = n_tau(d, nt.plus);
      const Band src{f, gaps & ~bit(prm.tau) & ~bit(nt.plus.i)};
      const Band tgt{f, gaps & ~bit(prm.tau) & ~bit(nt.minus.i)};
      out.link = straight_except(src, tgt);
      out.link.disp[nt.minus.i] = nt.n + np.n;
      out.degree_exponent = nt.n + np.n;
      if (split) out.indentation = np.n - nt.n;
      break;
    }
    case MorphismKind::TrivialHecke: {
      require(prm.tau >= 0 && prm.tau < f && has(gaps, prm.tau), ErrorCode::Inapplicable,
              "tau must lie outside the ramification set");
      const NTau nt = n_tau(d, {q, prm.tau});
      require(popcount(gaps) == 2, ErrorCode::Inapplicable,
              "TrivialHecke needs exactly two unramified places above the prime");
      out.link = identity_link(Band{f, 0});
      if (split) out.indentation = 2L * n_tau(d, nt.minus).n;
      break;
    }
    default:
      fail(ErrorCode::InvalidArgument, "not a standard morphism kind");
  }
  return out;
}

LinkMorphismDescriptor compose(const LinkMorphismDescriptor& m2, const LinkMorphismDescriptor& m1) {
  LinkMorphismDescriptor out;
  out.link = compose(m2.link, m1.link);
  out.indentation = m1.indentation + m2.indentation;
  out.note = MorphismKind::Composite;
  if (m1.degree_exponent && m2.degree_exponent)
    out.degree_exponent = *m1.degree_exponent + *m2.degree_exponent;
  return out;
}

InducedLink induced_link(const Link& eta, const ShimuraDatum& d, ArchPlace tau, long indent_n) {
  const int q = tau.prime;
  const int f = d.f(q);
  require(eta.source == band_of(d, q), ErrorCode::InvalidArgument,
          "link does not start at the band of the datum");
  const LinkReport rep = validate_link(eta);
  require(rep.ok, ErrorCode::InvalidArgument, "invalid link: " + rep.violation);
  int turning = 0;
  for (const auto& [v, dv] : eta.disp) {
    require(dv >= 0, ErrorCode::Inapplicable, "a curve turns to the left");
    turning += dv > 0 ? 1 : 0;
  }
  require(turning <= 1, ErrorCode::Inapplicable, "more than one curve turns");
  require(has(d.gaps(q), tau.i), ErrorCode::InvalidArgument, "tau lies in the ramification set");
  const NTau nt = n_tau(d, tau);
  require(nt.minus.i != tau.i, ErrorCode::Inapplicable, "tau is the only unramified place");

  ShimuraDatum dprime = d;
  dprime.s.s_infty[q] = full_mask(f) & ~eta.target.nodes;
  const int eta_tau = mod(tau.i + eta.disp.at(tau.i), f);
  const int eta_minus = mod(nt.minus.i + eta.disp.at(nt.minus.i), f);
  const NTau ntp = n_tau(dprime, {q, eta_tau});
  require(ntp.minus.i == eta_minus, ErrorCode::Inapplicable, "the link does not respect tau^-");

  InducedLink out;
  out.link.source = {f, eta.source.nodes & ~bit(tau.i) & ~bit(nt.minus.i)};
  out.link.target = {f, eta.target.nodes & ~bit(eta_tau) & ~bit(eta_minus)};
  for (const auto& [v, dv] : eta.disp)
    if (v != tau.i && v != nt.minus.i) out.link.disp[v] = dv;
  if (d.places.prime(q).e_split) out.indentation = indent_n + nt.n - ntp.n;
  return out;
}

std::string render_band_ascii(const Band& b) {
  check_band(b);
  std::string out;
  for (int i = 0; i < b.n; ++i) {
    if (i) out += ' ';
    out += has(b.nodes, i) ? "•" : "+";
  }
  return out;
}

std::string render_link_ascii(const Link& l) {
  std::ostringstream os;
  os << "source  " << render_band_ascii(l.source) << '\n';
  os << "target  " << render_band_ascii(l.target) << '\n';
  os << "curves ";
  if (l.disp.empty()) os << " (trivial link)";
  for (const auto& [v, d] : l.disp)
    os << ' ' << v << "->" << mod(v + d, l.source.n) << " disp=" << d;
  os << '\n';
  return os.str();
}

}  // namespace gos
