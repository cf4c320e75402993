#pragma once

#include <vector>

#include "gostrata/places.hpp"

namespace gos {

enum class CaseTag { A1, A2, B1, B2, ASharpPass, BSharpPass };
const char* case_name(CaseTag c);

// Maximal run {top, top-1, ..., top-m} inside S_inf u T on one cycle.
struct Chain {
  int prime = 0;
  int top = 0;
  int m = 0;
  Mask member_mask(int f) const;
  bool operator==(const Chain&) const = default;
};

std::vector<Chain> chain_decompose(const ShimuraDatum& d, int prime, Mask t);

struct StratumDescriptor {
  std::vector<Mask> t;          // per prime, subset of the gaps
  std::vector<Mask> t_prime;    // archimedean part of T'
  std::vector<bool> t_prime_p;  // the finite place itself belongs to T'
  std::vector<CaseTag> cases;
  std::vector<std::vector<Chain>> chains;  // populated for A1/B1
  ShimuraDatum target;                     // S(T) together with the new levels
  std::vector<Mask> i_t;
  int n_bundle = 0;
};

StratumDescriptor stratum_descriptor(const ShimuraDatum& d, const std::vector<Mask>& t);

// Which sheet each S place is lifted to, and the free choices of the recipe.
struct LiftOptions {
  std::vector<Mask> s_lift_sheet;               // per prime: bit i set puts the lift of i on sheet 1
  std::vector<std::vector<int>> beta_choices;   // per prime, per chain (inert-in-E primes only)
  std::vector<int> a2_anchor;                   // per prime; negative means smallest index of T
};

// One alternating pattern: the E-index of the anchor and the offsets a_1 < a_2 < ...
struct LiftRun {
  int anchor = 0;
  std::vector<int> a;
};

struct LiftChoice {
  std::vector<Mask> s_tilde;        // E-mask per prime: lift of S
  std::vector<Mask> s_tilde_of_t;   // E-mask per prime: lift of S(T)
  std::vector<Mask> i_tilde_t;      // E-mask per prime
  std::vector<std::vector<int>> beta_choices;
  std::vector<std::vector<LiftRun>> runs;  // per prime, in chain order (A1/B1) or a single run (A2/B2)
};

// E-mask of the sheet-prescribed lift of S alone.
std::vector<Mask> default_s_lift(const ShimuraDatum& d, const std::vector<Mask>& sheet1 = {});

LiftChoice lift_assignment(const ShimuraDatum& d, const StratumDescriptor& desc,
                           const LiftOptions& opts = {});

struct DeltaSets {
  std::vector<Mask> plus;
  std::vector<Mask> minus;
  bool operator==(const DeltaSets&) const = default;
};

DeltaSets delta_sets(const ShimuraDatum& d, const StratumDescriptor& desc, const LiftChoice& lift);

struct SignatureProfile {
  std::vector<std::vector<int>> s;  // per prime, indexed by E-index
  bool operator==(const SignatureProfile&) const = default;
};

SignatureProfile signature_from_lift(const PlaceSystem& ps, const std::vector<Mask>& ramified_lift);
SignatureProfile dimension_count_check(const PlaceSystem& ps, const SignatureProfile& s,
                                       const DeltaSets& delta);

// Conjugate of an E-mask on a cycle of length f.
Mask conj_mask(int f, Mask m);
// sigma^k applied to every member of an E-mask.
Mask shift_emask(int f, bool e_split, Mask m, long k);

}  // namespace gos
