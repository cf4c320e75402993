#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "gostrata/lattice.hpp"
#include "gostrata/places.hpp"
#include "gostrata/strata.hpp"

namespace gos {

// The rational Dieudonne module of one prime: components indexed by E-index
// j in [0, 2f), F: D_{sigma^-1 j} -> D_j given by x -> f_mat[j] * phi(x), and
// a pairing D_j x D_{c j} -> W with matrix pairing[j].
struct Isocrystal {
  std::shared_ptr<const WittRing> ring;
  int f = 1;
  bool e_split = true;
  std::vector<Mat2> f_mat;
  std::vector<Mat2> v_mat;
  std::vector<Mat2> pairing;

  int size() const { return 2 * f; }
  int next(int j) const { return emb_shift(f, e_split, j, 1); }
  int prev(int j) const { return emb_shift(f, e_split, j, -1); }
  int shift(int j, long k) const { return emb_shift(f, e_split, j, k); }
  int conj(int j) const { return emb_conj(f, j); }
};

// One lattice per component.
using LatticeFamily = std::vector<Lattice2>;

struct DieudonnePoint {
  ShimuraDatum datum;  // exactly one prime
  Mask s_lift = 0;     // E-mask of the lift of S
  std::shared_ptr<const Isocrystal> iso;
  LatticeFamily comp;
  std::vector<int> signature;
};

// F and V images between neighbouring components.
Lattice2 frobenius_image(const Isocrystal& iso, const Lattice2& src, int j);       // into j from prev(j)
Lattice2 verschiebung_image(const Isocrystal& iso, const Lattice2& src, int j);    // into j from next(j)
Lattice2 frobenius_preimage(const Isocrystal& iso, const Lattice2& dst, int j);    // of dst at j, lives at prev(j)

// s(j) = length of L_j / V(L_{next j}).
std::vector<int> family_signature(const Isocrystal& iso, const LatticeFamily& l);

// Essential Frobenius F_es^n carrying a lattice at `from` to from + n.
Lattice2 es_frobenius(const Isocrystal& iso, const std::vector<int>& sig, Lattice2 x, int from, int n);
// Essential Verschiebung V_es^n carrying a lattice at `from` to from - n.
Lattice2 es_verschiebung(const Isocrystal& iso, const std::vector<int>& sig, Lattice2 x, int from, int n);

std::vector<Mat2> derive_v_mats(const WittRing& r, const std::vector<Mat2>& f_mats);
Mat2 conjugate_f_mat(const WittRing& r, const Mat2& f);

DieudonnePoint make_point(std::shared_ptr<const WittRing> ring, const ShimuraDatum& datum,
                          const std::vector<Mat2>& f_mats, const std::vector<Mat2>& pairings,
                          const std::vector<int>& expected_signature, Mask s_lift);

// Re-validates an arbitrary lattice family as a point on the given datum.
DieudonnePoint point_from_family(const DieudonnePoint& ambient, const ShimuraDatum& datum,
                                 Mask s_lift, LatticeFamily comp);

struct PointReport {
  bool ok = true;
  std::string violation;
};

// F/V stability, self-duality and the declared signature.
PointReport check_point(const DieudonnePoint& pt);

struct RandomPointOptions {
  double template_weight = 0.7;  // probability of unit * template, otherwise unimodular * template
};

DieudonnePoint random_point(std::shared_ptr<const WittRing> ring, const ShimuraDatum& datum,
                            Mask s_lift, std::mt19937_64& rng, const RandomPointOptions& opts = {});

Lattice2 essential_frobenius_image(const DieudonnePoint& pt, int j, int n);
bool hasse_vanishes(const DieudonnePoint& pt, int j);
Mask stratum_of_point(const DieudonnePoint& pt);

struct IsogenyTriple {
  CaseTag tag = CaseTag::A1;
  LatticeFamily a;
  LatticeFamily b;
  LatticeFamily c;
  std::map<int, Lattice2> j_lines;  // lattices between p*B_j and B_j
  DieudonnePoint b_point;           // b as a point on S(T)
};

IsogenyTriple build_isogeny_triple(const DieudonnePoint& pt, const StratumDescriptor& desc,
                                   const LiftChoice& lift, const DeltaSets& delta);

DieudonnePoint reconstruct_point(const DieudonnePoint& b, const std::map<int, Lattice2>& j_lines,
                                 const ShimuraDatum& source, const StratumDescriptor& desc,
                                 const LiftChoice& lift, const DeltaSets& delta);

DieudonnePoint twisted_partial_frobenius(const DieudonnePoint& pt);

// A semilinear map x -> m * phi^k(x). Entries of m are known modulo p^{N - lost}.
struct SemiMap {
  Mat2 m;
  long k = 0;
  int lost = 0;
};

SemiMap compose(const WittRing& r, const SemiMap& outer, const SemiMap& inner);
SemiMap es_frobenius_matrix(const DieudonnePoint& pt, int from, int n);
SemiMap es_verschiebung_matrix(const DieudonnePoint& pt, int from, int n);

struct IdentityReport {
  bool fv_matrices = true;
  bool es_composites = true;
  bool es_lattices = true;
  bool cokernels = true;
  std::string detail;
  bool ok() const { return fv_matrices && es_composites && es_lattices && cokernels; }
};

IdentityReport check_frobenius_identities(const DieudonnePoint& pt);

}  // namespace gos
