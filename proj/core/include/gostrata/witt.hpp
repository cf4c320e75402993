#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gostrata/error.hpp"

namespace gos {

inline constexpr int kMaxExtension = 16;

// Coefficients of a0 + a1 x + ... + a_{m-1} x^{m-1}, each in [0, p^N).
struct WElem {
  std::array<std::int64_t, kMaxExtension> c{};
  bool operator==(const WElem&) const = default;
};

// W_N(F_{p^m}) presented as (Z/p^N)[x]/(M) with M monic and irreducible mod p.
class WittRing {
 public:
  // reserve is clamped to N - 1.
  WittRing(long p, int m, int N, std::vector<std::int64_t> modulus = {}, int reserve = 4);

  long p() const { return p_; }
  int m() const { return m_; }
  int N() const { return N_; }
  std::int64_t q() const { return q_; }
  int budget() const { return budget_; }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }
  const WElem& frob_image() const { return phi_x_; }

  WElem zero() const { return {}; }
  WElem one() const { return from_int(1); }
  WElem gen() const;
  WElem from_int(long v) const;

  WElem add(const WElem& a, const WElem& b) const;
  WElem sub(const WElem& a, const WElem& b) const;
  WElem neg(const WElem& a) const;
  WElem mul(const WElem& a, const WElem& b) const;
  WElem mul_int(const WElem& a, long k) const;
  WElem pow(WElem a, unsigned long long e) const;

  // min over coefficients of the p-adic valuation; N for zero.
  int valuation(const WElem& a) const;
  bool is_unit(const WElem& a) const { return valuation(a) == 0; }
  WElem inverse(const WElem& u) const;
  // Divides every coefficient representative by p^k; they must all be divisible.
  WElem div_p(const WElem& a, int k) const;
  WElem mul_p(const WElem& a, int k) const;
  // Reduces coefficients modulo p^k.
  WElem truncate(const WElem& a, int k) const;

  // phi^k with k taken modulo m (negative k gives powers of the inverse).
  WElem frobenius(const WElem& a, long k) const;
  // Evaluates an integer polynomial (little-endian) at y.
  WElem evaluate(const std::vector<std::int64_t>& poly, const WElem& y) const;

  WElem random(std::mt19937_64& rng) const;
  WElem random_unit(std::mt19937_64& rng) const;

  std::string to_hex(const WElem& a) const;
  WElem from_hex(const std::string& s) const;
  std::string to_string(const WElem& a) const;

 private:
  std::int64_t norm(std::int64_t v) const { v %= q_; return v < 0 ? v + q_ : v; }
  WElem apply_linear(const std::vector<WElem>& images, const WElem& a) const;

  long p_;
  int m_;
  int N_;
  std::int64_t q_;
  int budget_;
  std::vector<std::int64_t> modulus_;
  WElem phi_x_;
  std::vector<std::vector<WElem>> phi_basis_;  // phi_basis_[k][i] = phi^k(x^i)
};

WittRing witt_ring(long p, int m, int N);

// First monic polynomial of degree m that is irreducible over F_p, scanning
// coefficient vectors (a0 least significant) in base p.
std::vector<std::int64_t> default_modulus(long p, int m);
bool irreducible_mod_p(const std::vector<std::int64_t>& poly, long p);

// 2x2 matrices over the ring; e[row][col].
struct Mat2 {
  std::array<std::array<WElem, 2>, 2> e{};
  bool operator==(const Mat2&) const = default;
};

Mat2 mat_identity(const WittRing& r);
Mat2 mat_from_ints(const WittRing& r, long a, long b, long c, long d);
Mat2 mat_mul(const WittRing& r, const Mat2& a, const Mat2& b);
Mat2 mat_add(const WittRing& r, const Mat2& a, const Mat2& b);
Mat2 mat_scale(const WittRing& r, const Mat2& a, const WElem& s);
Mat2 mat_transpose(const Mat2& a);
Mat2 mat_adj(const WittRing& r, const Mat2& a);
WElem mat_det(const WittRing& r, const Mat2& a);
Mat2 mat_frobenius(const WittRing& r, const Mat2& a, long k);
Mat2 mat_div_p(const WittRing& r, const Mat2& a, int k);
int mat_valuation(const WittRing& r, const Mat2& a);
Mat2 mat_random_unimodular(const WittRing& r, std::mt19937_64& rng);

struct ElementaryDivisors {
  int v1 = 0;
  int v2 = 0;
};

ElementaryDivisors elementary_divisors(const WittRing& r, const Mat2& a);

}  // namespace gos
