#include "gostrata/dieudonne.hpp"

#include <algorithm>

namespace gos {

namespace {

const WittRing& ring_of(const Isocrystal& iso) { return *iso.ring; }

Mat2 scalar_p(const WittRing& r) { return mat_scale(r, mat_identity(r), r.from_int(r.p())); }

// Smallest n >= 1 with sigma^{-n} j outside the set.
int run_length(const Isocrystal& iso, Mask set, int j) {
  int n = 1;
  while (has(set, iso.shift(j, -n))) {
    ++n;
    require(n <= iso.size(), ErrorCode::InvalidArgument, "run covers the whole cycle");
  }
  return n;
}

int single_prime(const ShimuraDatum& d) {
  require(d.places.size() == 1, ErrorCode::InvalidArgument, "points live over exactly one prime");
  return d.f(0);
}

Mask rotate(Mask m, int f, int k) {
  Mask out = 0;
  for (int i : members(m)) out |= bit(mod(i + k, f));
  return out;
}

}  // namespace

Lattice2 frobenius_image(const Isocrystal& iso, const Lattice2& src, int j) {
  return lattice_apply(ring_of(iso), src, iso.f_mat[j], 1);
}

Lattice2 frobenius_preimage(const Isocrystal& iso, const Lattice2& dst, int j) {
  return lattice_preimage(ring_of(iso), dst, iso.f_mat[j], 1);
}

Lattice2 verschiebung_image(const Isocrystal& iso, const Lattice2& src, int j) {
  // V = p F^{-1} on the isocrystal.
  return lattice_scale(frobenius_preimage(iso, src, iso.next(j)), 1);
}

std::vector<int> family_signature(const Isocrystal& iso, const LatticeFamily& l) {
  const WittRing& r = ring_of(iso);
  std::vector<int> s(static_cast<std::size_t>(iso.size()));
  for (int j = 0; j < iso.size(); ++j) {
    const Lattice2 v = verschiebung_image(iso, l[iso.next(j)], j);
    require(lattice_contains(r, l[j], v), ErrorCode::InvalidPoint,
            "V does not preserve the lattice family at component " + std::to_string(j));
    s[j] = lattice_colength(r, l[j], v);
  }
  return s;
}

Lattice2 es_frobenius(const Isocrystal& iso, const std::vector<int>& sig, Lattice2 x, int from, int n) {
  int cur = from;
  for (int step = 0; step < n; ++step) {
    const int nxt = iso.next(cur);
    x = frobenius_image(iso, x, nxt);
    if (sig[cur] == 0) x = lattice_scale(x, -1);
    cur = nxt;
  }
  return x;
}

Lattice2 es_verschiebung(const Isocrystal& iso, const std::vector<int>& sig, Lattice2 x, int from, int n) {
  int cur = from;
  for (int step = 0; step < n; ++step) {
    const int prv = iso.prev(cur);
    x = frobenius_preimage(iso, x, cur);
    if (sig[prv] != 2) x = lattice_scale(x, 1);
    cur = prv;
  }
  return x;
}

namespace {

// p * M^{-1} for a matrix whose elementary divisors lie in {0,1} after removing p^{v(M)}, v(M) <= 1.
Mat2 p_times_inverse(const WittRing& r, const Mat2& m) {
  const int d = r.valuation(mat_det(r, m));
  const int v = mat_valuation(r, m);
  if (d == 0) return mat_scale(r, mat_adj(r, m), r.mul_int(r.inverse(mat_det(r, m)), r.p()));
  if (d == 1) return mat_scale(r, mat_adj(r, m), r.inverse(r.div_p(mat_det(r, m), 1)));
  require(d == 2 && v >= 1, ErrorCode::InvalidPoint, "F has elementary divisors outside {1, p}");
  const Mat2 g = mat_div_p(r, m, 1);
  const WElem dg = mat_det(r, g);
  require(r.is_unit(dg), ErrorCode::InvalidPoint, "F has elementary divisors outside {1, p}");
  return mat_scale(r, mat_adj(r, g), r.inverse(dg));
}

}  // namespace

std::vector<Mat2> derive_v_mats(const WittRing& r, const std::vector<Mat2>& f_mats) {
  std::vector<Mat2> out;
  out.reserve(f_mats.size());
  for (const Mat2& f : f_mats) out.push_back(mat_frobenius(r, p_times_inverse(r, f), -1));
  return out;
}

Mat2 conjugate_f_mat(const WittRing& r, const Mat2& f) {
  // p f / det f, computed without dividing by a non-unit.
  const int d = r.valuation(mat_det(r, f));
  if (d == 0) return mat_scale(r, f, r.mul_int(r.inverse(mat_det(r, f)), r.p()));
  if (d == 1) return mat_scale(r, f, r.inverse(r.div_p(mat_det(r, f), 1)));
  require(d == 2 && mat_valuation(r, f) >= 1, ErrorCode::InvalidPoint,
          "F has elementary divisors outside {1, p}");
  const Mat2 g = mat_div_p(r, f, 1);
  return mat_scale(r, g, r.inverse(mat_det(r, g)));
}

PointReport check_point(const DieudonnePoint& pt) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  const bool ramified = pt.datum.s.s_p[0];
  auto bad = [](std::string why) { return PointReport{false, std::move(why)}; };
  for (int j = 0; j < iso.size(); ++j) {
    const std::string at = " at component " + std::to_string(j);
    if (!lattice_contains(r, pt.comp[j], frobenius_image(iso, pt.comp[iso.prev(j)], j)))
      return bad("F does not preserve the family" + at);
    if (!lattice_contains(r, pt.comp[j], verschiebung_image(iso, pt.comp[iso.next(j)], j)))
      return bad("V does not preserve the family" + at);
    const Lattice2 dual = lattice_dual(r, pt.comp[iso.conj(j)], iso.pairing[j]);
    if (!lattice_contains(r, dual, pt.comp[j])) return bad("pairing is not integral" + at);
    // A prime in the ramification set carries a pairing with cokernel k on each pair.
    const int gap = lattice_colength(r, dual, pt.comp[j]);
    const bool paired_ok = ramified ? (gap == 1) : (gap == 0);
    if (!paired_ok) return bad("pairing has the wrong discriminant" + at);
  }
  if (family_signature(iso, pt.comp) != pt.signature) return bad("signature mismatch");
  return {};
}

DieudonnePoint point_from_family(const DieudonnePoint& ambient, const ShimuraDatum& datum,
                                 Mask s_lift, LatticeFamily comp) {
  single_prime(datum);
  validate_datum(datum);
  DieudonnePoint pt;
  pt.datum = datum;
  pt.s_lift = s_lift;
  pt.iso = ambient.iso;
  pt.comp = std::move(comp);
  pt.signature = signature_from_lift(datum.places, {s_lift}).s[0];
  // The lift must cover S exactly.
  const int f = datum.f(0);
  const Mask covered = (s_lift | (s_lift >> f)) & full_mask(f);
  require(covered == datum.s.s_infty[0] && popcount(s_lift) == popcount(covered),
          ErrorCode::InvalidPoint, "lift does not match the ramification set");
  const PointReport rep = check_point(pt);
  require(rep.ok, ErrorCode::InvalidPoint, rep.violation);
  return pt;
}

DieudonnePoint make_point(std::shared_ptr<const WittRing> ring, const ShimuraDatum& datum,
                          const std::vector<Mat2>& f_mats, const std::vector<Mat2>& pairings,
                          const std::vector<int>& expected_signature, Mask s_lift) {
  const int f = single_prime(datum);
  const bool split = datum.places.prime(0).e_split;
  const WittRing& r = *ring;
  require(r.m() == (split ? f : 2 * f), ErrorCode::InvalidArgument,
          "ring degree must equal the length of the embedding cycle");
  require(f_mats.size() == static_cast<std::size_t>(2 * f), ErrorCode::InvalidArgument,
          "one F matrix per embedding is required");

  auto iso = std::make_shared<Isocrystal>();
  iso->ring = ring;
  iso->f = f;
  iso->e_split = split;
  iso->f_mat = f_mats;
  iso->v_mat = derive_v_mats(r, f_mats);
  if (pairings.empty()) {
    iso->pairing.assign(f_mats.size(), mat_from_ints(r, 0, 1, -1, 0));
  } else {
    require(pairings.size() == f_mats.size(), ErrorCode::InvalidArgument,
            "one pairing per embedding is required");
    iso->pairing = pairings;
  }

  const Mat2 p_id = scalar_p(r);
  for (int j = 0; j < iso->size(); ++j) {
    require(mat_mul(r, iso->f_mat[j], mat_frobenius(r, iso->v_mat[j], 1)) == p_id &&
                mat_mul(r, iso->v_mat[j], mat_frobenius(r, iso->f_mat[j], -1)) == p_id,
            ErrorCode::InvalidPoint, "FV != p at component " + std::to_string(j));
  }

  DieudonnePoint pt;
  pt.datum = datum;
  pt.s_lift = s_lift;
  pt.iso = iso;
  pt.comp.assign(static_cast<std::size_t>(iso->size()), lattice_standard());
  pt.signature = family_signature(*iso, pt.comp);
  require(pt.signature == expected_signature, ErrorCode::InvalidPoint,
          "signature differs from the declared one");

  for (int j = 0; j < iso->size(); ++j) {
    const int cj = iso->conj(j);
    const Mat2& P = iso->pairing[j];
    require(r.is_unit(mat_det(r, P)), ErrorCode::InvalidPoint, "pairing is not perfect");
    Mat2 minus_pt = mat_transpose(iso->pairing[cj]);
    minus_pt = mat_scale(r, minus_pt, r.from_int(-1));
    require(minus_pt == P, ErrorCode::InvalidPoint, "pairing is not alternating across conjugates");
    const Mat2 lhs = mat_mul(r, mat_mul(r, mat_transpose(iso->f_mat[j]), P), iso->f_mat[cj]);
    const Mat2 rhs = mat_scale(r, mat_frobenius(r, iso->pairing[iso->prev(j)], 1), r.from_int(r.p()));
    require(lhs == rhs, ErrorCode::InvalidPoint,
            "pairing is incompatible with F at component " + std::to_string(j));
  }
  return point_from_family(pt, datum, s_lift, pt.comp);
}

DieudonnePoint random_point(std::shared_ptr<const WittRing> ring, const ShimuraDatum& datum,
                            Mask s_lift, std::mt19937_64& rng, const RandomPointOptions& opts) {
  const int f = single_prime(datum);
  const bool split = datum.places.prime(0).e_split;
  const WittRing& r = *ring;
  const long p = r.p();
  const std::vector<int> sig = signature_from_lift(datum.places, {s_lift}).s[0];
  std::bernoulli_distribution plain(opts.template_weight);
  std::uniform_int_distribution<int> pick3(0, 2);
  std::uniform_int_distribution<int> pick2(0, 1);

  const Mat2 templates[3] = {mat_from_ints(r, 0, 1, p, 0), mat_from_ints(r, 1, 0, 0, p),
                             mat_from_ints(r, p, 0, 0, 1)};
  const Mat2 units[2] = {mat_identity(r), mat_from_ints(r, 0, 1, 1, 0)};

  std::vector<Mat2> fm(static_cast<std::size_t>(2 * f));
  for (int j = 0; j < f; ++j) {
    const int prv = emb_shift(f, split, j, -1);
    Mat2 base;
    if (sig[prv] == 1) {
      base = templates[pick3(rng)];
    } else {
      base = units[pick2(rng)];
      if (sig[prv] == 0) base = mat_scale(r, base, r.from_int(p));
    }
    const Mat2 left = plain(rng) ? mat_scale(r, mat_identity(r), r.random_unit(rng))
                                 : mat_random_unimodular(r, rng);
    fm[j] = mat_mul(r, left, base);
    fm[emb_conj(f, j)] = conjugate_f_mat(r, fm[j]);
  }
  return make_point(ring, datum, fm, {}, sig, s_lift);
}

Lattice2 essential_frobenius_image(const DieudonnePoint& pt, int j, int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be positive");
  const int from = pt.iso->shift(j, -n);
  return es_frobenius(*pt.iso, pt.signature, pt.comp[from], from, n);
}

bool hasse_vanishes(const DieudonnePoint& pt, int j) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  const ArchPlace tau{0, j % iso.f};
  const int n = n_tau(pt.datum, tau).n;
  const Lattice2 pl = lattice_scale(pt.comp[j], 1);
  const Lattice2 img = lattice_sum(r, essential_frobenius_image(pt, j, n), pl);
  const Lattice2 omega = lattice_sum(r, verschiebung_image(iso, pt.comp[iso.next(j)], j), pl);
  return img == omega;
}

Mask stratum_of_point(const DieudonnePoint& pt) {
  Mask t = 0;
  for (int i : members(pt.datum.gaps(0))) {
    const bool h0 = hasse_vanishes(pt, i);
    const bool h1 = hasse_vanishes(pt, pt.iso->conj(i));
    require(h0 == h1, ErrorCode::InvalidPoint, "Hasse invariants of conjugate lifts disagree");
    if (h0) t |= bit(i);
  }
  return t;
}

IsogenyTriple build_isogeny_triple(const DieudonnePoint& pt, const StratumDescriptor& desc,
                                   const LiftChoice& lift, const DeltaSets& delta) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  IsogenyTriple out;
  out.tag = desc.cases[0];
  require(out.tag != CaseTag::ASharpPass && out.tag != CaseTag::BSharpPass, ErrorCode::Inapplicable,
          "the simulator does not cover sharp primes");
  require((desc.t[0] & ~stratum_of_point(pt)) == 0, ErrorCode::StabilityViolated,
          "the point does not lie on the requested stratum");
  const Mask plus = delta.plus[0];
  const Mask minus = delta.minus[0];
  const int size = iso.size();

  out.a = pt.comp;
  out.c = out.a;
  for (int j : members(plus)) {
    const int n = run_length(iso, plus, j);
    const int from = iso.shift(j, -n);
    out.c[j] = lattice_scale(es_frobenius(iso, pt.signature, out.a[from], from, n), -1);
  }
  out.b = out.c;
  for (int j : members(minus)) {
    const int n = run_length(iso, minus, j);
    const int from = iso.shift(j, -n);
    out.b[j] = es_frobenius(iso, pt.signature, out.c[from], from, n);
  }

  for (int j = 0; j < size; ++j) {
    const std::string at = " at component " + std::to_string(j);
    require(lattice_contains(r, out.c[j], out.a[j]) &&
                lattice_colength(r, out.c[j], out.a[j]) == (has(plus, j) ? 1 : 0),
            ErrorCode::StabilityViolated, "A inside C has the wrong colength" + at);
    require(lattice_contains(r, out.c[j], out.b[j]) &&
                lattice_colength(r, out.c[j], out.b[j]) == (has(minus, j) ? 1 : 0),
            ErrorCode::StabilityViolated, "B inside C has the wrong colength" + at);
    for (const LatticeFamily* fam : {&out.c, &out.b}) {
      const LatticeFamily& l = *fam;
      require(lattice_contains(r, l[j], frobenius_image(iso, l[iso.prev(j)], j)) &&
                  lattice_contains(r, l[j], verschiebung_image(iso, l[iso.next(j)], j)),
              ErrorCode::StabilityViolated, "isogenous family is not F/V stable" + at);
    }
  }

  switch (out.tag) {
    case CaseTag::A1:
    case CaseTag::B1:
      for (int j : members(lift.i_tilde_t[0]))
        out.j_lines[j] = lattice_sum(r, verschiebung_image(iso, out.a[iso.next(j)], j),
                                     lattice_scale(out.a[j], 1));
      break;
    case CaseTag::A2:
      for (int j : members(minus)) out.j_lines[j] = lattice_scale(out.a[j], 1);
      break;
    default:
      break;
  }

  out.b_point = point_from_family(pt, desc.target, lift.s_tilde_of_t[0], out.b);
  const SignatureProfile expect =
      dimension_count_check(pt.datum.places, SignatureProfile{{pt.signature}}, delta);
  require(out.b_point.signature == expect.s[0], ErrorCode::StabilityViolated,
          "signature of B differs from the dimension count");
  return out;
}

DieudonnePoint reconstruct_point(const DieudonnePoint& b, const std::map<int, Lattice2>& j_lines,
                                 const ShimuraDatum& source, const StratumDescriptor& desc,
                                 const LiftChoice& lift, const DeltaSets& delta) {
  const Isocrystal& iso = *b.iso;
  const WittRing& r = ring_of(iso);
  const Mask plus = delta.plus[0];
  const Mask minus = delta.minus[0];
  LatticeFamily m = b.comp;
  auto line_at = [&](int j) -> const Lattice2& {
    const auto it = j_lines.find(j);
    require(it != j_lines.end(), ErrorCode::InvalidArgument,
            "missing line datum at component " + std::to_string(j));
    return it->second;
  };

  switch (desc.cases[0]) {
    case CaseTag::A1:
    case CaseTag::B1: {
      const auto& chains = desc.chains[0];
      for (std::size_t ci = 0; ci < chains.size(); ++ci) {
        const LiftRun& run = lift.runs[0][ci];
        const int mi = chains[ci].m;
        const int bottom = iso.shift(run.anchor, -(mi + 1));
        const bool odd = has(lift.i_tilde_t[0], bottom);
        const Lattice2 seed = odd ? line_at(bottom) : b.comp[bottom];
        for (std::size_t k = 0; k + 1 < run.a.size(); k += 2)
          for (int l = run.a[k]; l < run.a[k + 1]; ++l) {
            const int j = iso.shift(run.anchor, -l);
            m[j] = lattice_scale(es_frobenius(iso, b.signature, seed, bottom, mi + 1 - l), -1);
          }
      }
      break;
    }
    case CaseTag::A2:
      for (int j : members(minus)) m[j] = lattice_scale(line_at(j), -1);
      break;
    case CaseTag::B2:
      for (int j : members(minus)) m[j] = lattice_dual(r, b.comp[iso.conj(j)], iso.pairing[j]);
      break;
    default:
      fail(ErrorCode::Inapplicable, "the simulator does not cover sharp primes");
  }

  LatticeFamily a = m;
  for (int j : members(plus)) a[j] = lattice_dual(r, m[iso.conj(j)], iso.pairing[j]);
  return point_from_family(b, source, lift.s_tilde[0], std::move(a));
}

DieudonnePoint twisted_partial_frobenius(const DieudonnePoint& pt) {
  const Isocrystal& iso = *pt.iso;
  const int f = iso.f;
  LatticeFamily out(pt.comp.size());
  for (int j = 0; j < iso.size(); ++j) {
    const int back2 = iso.shift(j, -2);
    const Lattice2 once = frobenius_image(iso, pt.comp[back2], iso.shift(j, -1));
    out[j] = lattice_scale(frobenius_image(iso, once, j), -1);
  }
  ShimuraDatum d = pt.datum;
  d.s.s_infty[0] = rotate(d.s.s_infty[0], f, 2);
  const Mask lift = shift_emask(f, iso.e_split, pt.s_lift, 2);
  return point_from_family(pt, d, lift, std::move(out));
}

SemiMap compose(const WittRing& r, const SemiMap& outer, const SemiMap& inner) {
  return {mat_mul(r, outer.m, mat_frobenius(r, inner.m, outer.k)), outer.k + inner.k,
          std::max(outer.lost, inner.lost)};
}

SemiMap es_frobenius_matrix(const DieudonnePoint& pt, int from, int n) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  SemiMap acc{mat_identity(r), 0, 0};
  int cur = from;
  for (int step = 0; step < n; ++step) {
    const int nxt = iso.next(cur);
    SemiMap hop{iso.f_mat[nxt], 1, 0};
    if (pt.signature[cur] == 0) hop = {mat_div_p(r, hop.m, 1), 1, 1};
    acc = compose(r, hop, acc);
    cur = nxt;
  }
  return acc;
}

SemiMap es_verschiebung_matrix(const DieudonnePoint& pt, int from, int n) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  SemiMap acc{mat_identity(r), 0, 0};
  int cur = from;
  for (int step = 0; step < n; ++step) {
    const int prv = iso.prev(cur);
    SemiMap hop{iso.v_mat[cur], -1, 0};
    if (pt.signature[prv] == 2) hop = {mat_div_p(r, hop.m, 1), -1, 1};
    acc = compose(r, hop, acc);
    cur = prv;
  }
  return acc;
}

IdentityReport check_frobenius_identities(const DieudonnePoint& pt) {
  const Isocrystal& iso = *pt.iso;
  const WittRing& r = ring_of(iso);
  const Mat2 p_id = scalar_p(r);
  IdentityReport rep;
  for (int j = 0; j < iso.size(); ++j) {
    if (mat_mul(r, iso.f_mat[j], mat_frobenius(r, iso.v_mat[j], 1)) != p_id ||
        mat_mul(r, iso.v_mat[j], mat_frobenius(r, iso.f_mat[j], -1)) != p_id) {
      rep.fv_matrices = false;
      rep.detail = "FV != p at component " + std::to_string(j);
    }
  }
  for (int i : members(pt.datum.gaps(0))) {
    const int n = n_tau(pt.datum, {0, i}).n;
    for (int j : {i, iso.conj(i)}) {
      const int back = iso.shift(j, -n);
      const SemiMap fm = es_frobenius_matrix(pt, back, n);
      const SemiMap vm = es_verschiebung_matrix(pt, j, n);
      const SemiMap fv = compose(r, fm, vm);
      const SemiMap vf = compose(r, vm, fm);
      auto is_p = [&](const SemiMap& s) {
        const int digits = r.N() - s.lost;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            if (r.truncate(r.sub(s.m.e[a][b], p_id.e[a][b]), digits) != r.zero()) return false;
        return s.k == 0;
      };
      if (!is_p(fv) || !is_p(vf)) {
        rep.es_composites = false;
        rep.detail = "essential composite differs from p at component " + std::to_string(j);
      }
      const Lattice2& lj = pt.comp[j];
      const Lattice2& lb = pt.comp[back];
      const Lattice2 fimg = es_frobenius(iso, pt.signature, lb, back, n);
      const Lattice2 vimg = es_verschiebung(iso, pt.signature, lj, j, n);
      if (es_frobenius(iso, pt.signature, vimg, back, n) != lattice_scale(lj, 1) ||
          es_verschiebung(iso, pt.signature, fimg, j, n) != lattice_scale(lb, 1)) {
        rep.es_lattices = false;
        rep.detail = "essential composite is not p on lattices at component " + std::to_string(j);
      }
      const int cf = lattice_colength(r, lj, lattice_sum(r, fimg, lattice_scale(lj, 1)));
      const int cv = lattice_colength(r, lb, lattice_sum(r, vimg, lattice_scale(lb, 1)));
      if (cf != 1 || cv != 1) {
        rep.cokernels = false;
        rep.detail = "cokernel modulo p is not one-dimensional at component " + std::to_string(j);
      }
    }
  }
  return rep;
}

}  // namespace gos
