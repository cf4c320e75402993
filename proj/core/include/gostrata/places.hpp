#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gostrata/error.hpp"

namespace gos {

// Subsets of a cycle of length f (or 2f for embeddings of E) are bitmasks.
using Mask = std::uint64_t;
inline constexpr int kMaxInertia = 30;

inline constexpr Mask bit(int i) { return Mask{1} << i; }
inline constexpr Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (bit(n) - 1); }
inline constexpr bool has(Mask m, int i) { return (m >> i) & 1U; }
int popcount(Mask m);
std::vector<int> members(Mask m);
Mask mask_of(const std::vector<int>& idx);
inline constexpr int mod(long a, long n) { return static_cast<int>(((a % n) + n) % n); }

struct PrimeSlot {
  std::string id;
  int f = 1;
  bool e_split = true;
};

class PlaceSystem {
 public:
  PlaceSystem() = default;
  explicit PlaceSystem(std::vector<PrimeSlot> primes);

  int size() const { return static_cast<int>(primes_.size()); }
  const PrimeSlot& prime(int k) const;
  const std::vector<PrimeSlot>& primes() const { return primes_; }
  int index_of(std::string_view id) const;
  int degree() const;  // g = sum of the inertia degrees

  bool operator==(const PlaceSystem&) const;

 private:
  std::vector<PrimeSlot> primes_;
};

bool operator==(const PrimeSlot& a, const PrimeSlot& b);

PlaceSystem build_place_system(const std::vector<std::pair<int, bool>>& spec);

// Index i stands for sigma^i tau_0; sigma adds one to the index.
struct ArchPlace {
  int prime = 0;
  int i = 0;
  auto operator<=>(const ArchPlace&) const = default;
};

// Embeddings of E over one prime are numbered j = sheet * f + i. When the
// prime is inert in E the numbering is a single cycle of length 2f and c is
// the shift by f; when it splits there are two sheets of length f each.
struct EmbE {
  int prime = 0;
  int sheet = 0;
  int i = 0;
  auto operator<=>(const EmbE&) const = default;
};

ArchPlace frobenius_shift(const PlaceSystem& ps, ArchPlace x, long k);
EmbE frobenius_shift(const PlaceSystem& ps, EmbE x, long k);
EmbE conjugate(EmbE x);
inline ArchPlace restrict_to_F(EmbE x) { return {x.prime, x.i}; }

int emb_index(const PlaceSystem& ps, EmbE x);
EmbE emb_at(const PlaceSystem& ps, int prime, int j);

// Shift and conjugation directly on E-indices of a cycle with parameters (f, split).
int emb_shift(int f, bool e_split, int j, long k);
inline int emb_conj(int f, int j) { return j < f ? j + f : j - f; }

enum class Level { Hyperspecial, Iwahori, MaximalOrder };
enum class PrimeType { Alpha, AlphaSharp, Beta, BetaSharp };

const char* level_name(Level l);
Level parse_level(std::string_view s);
const char* prime_type_name(PrimeType t);

struct EvenPlaceSet {
  std::vector<Mask> s_infty;  // per prime, over Z/f
  std::vector<bool> s_p;      // per prime
  int n_other = 0;            // prime-to-p finite places, counted for parity only

  int cardinality() const;
  bool operator==(const EvenPlaceSet&) const = default;
};

struct ShimuraDatum {
  PlaceSystem places;
  EvenPlaceSet s;
  std::vector<Level> level;

  int f(int prime) const { return places.prime(prime).f; }
  Mask s_at(int prime) const { return s.s_infty[prime]; }
  Mask gaps(int prime) const { return full_mask(f(prime)) & ~s.s_infty[prime]; }
};

void validate_even_set(const PlaceSystem& ps, const EvenPlaceSet& s);
void validate_datum(const ShimuraDatum& d);

// Validates and returns the datum.
ShimuraDatum make_datum(PlaceSystem ps, EvenPlaceSet s, std::vector<Level> level);

// Single-prime convenience: n_other is chosen to restore parity.
ShimuraDatum single_prime_datum(int f, bool e_split, Mask s_infty, bool s_p = false,
                                Level level = Level::Hyperspecial);

struct NTau {
  int n = 0;
  ArchPlace minus;
  ArchPlace plus;
};

NTau n_tau(const ShimuraDatum& d, ArchPlace tau);
PrimeType classify_prime(const ShimuraDatum& d, int prime);

}  // namespace gos
