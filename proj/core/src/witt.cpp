#include "gostrata/witt.hpp"

#include <algorithm>
#include <sstream>

namespace gos {

namespace {

using Poly = std::vector<long>;  // over F_p, little-endian, trimmed

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long inv_mod(long a, long p) {
  long r = 1;
  long e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& m, long p) {
  trim(a);
  const long lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const long k = a.back() * lead_inv % p;
    const std::size_t off = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[off + i] = ((a[off + i] - k * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, long p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(out), m, p);
}

Poly poly_gcd(Poly a, Poly b, long p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

bool irreducible_mod_p(const std::vector<std::int64_t>& poly, long p) {
  Poly m;
  for (auto c : poly) m.push_back(((c % p) + p) % p);
  trim(m);
  const int deg = static_cast<int>(m.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  // x^{p^i} - x must be coprime to m for every i <= deg/2.
  Poly xp = poly_mod({0, 1}, m, p);
  for (int i = 1; i <= deg / 2; ++i) {
    Poly acc{1};
    Poly base = xp;
    for (long e = p; e; e >>= 1) {
      if (e & 1) acc = poly_mulmod(acc, base, m, p);
      base = poly_mulmod(base, base, m, p);
    }
    xp = acc;
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] - 1 + p) % p;
    trim(diff);
    if (diff.empty()) return false;
    const Poly g = poly_gcd(m, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<std::int64_t> default_modulus(long p, int m) {
  std::vector<std::int64_t> poly(static_cast<std::size_t>(m) + 1, 0);
  poly[static_cast<std::size_t>(m)] = 1;
  for (long k = 0;; ++k) {
    long v = k;
    for (int i = 0; i < m; ++i) {
      poly[static_cast<std::size_t>(i)] = v % p;
      v /= p;
    }
    if (v != 0) break;
    if (irreducible_mod_p(poly, p)) return poly;
  }
  fail(ErrorCode::InvalidArgument, "no irreducible polynomial found");
}

static bool small_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

WittRing::WittRing(long p, int m, int N, std::vector<std::int64_t> modulus, int reserve)
    : p_(p), m_(m), N_(N) {
  require(small_prime(p), ErrorCode::InvalidArgument, "p must be prime");
  require(m >= 1 && m <= kMaxExtension, ErrorCode::InvalidArgument, "extension degree out of range");
  require(N >= 2, ErrorCode::InvalidArgument, "precision must be at least 2");
  // Low precisions keep at least one usable digit.
  reserve = std::min(reserve, N - 1);
  require(reserve >= 1, ErrorCode::InvalidArgument, "reserve must be positive");
  q_ = 1;
  for (int i = 0; i < N; ++i) {
    q_ *= p;
    require(q_ < (std::int64_t{1} << 31), ErrorCode::InvalidArgument, "p^N must stay below 2^31");
  }
  budget_ = N - reserve;
  if (modulus.empty()) modulus = default_modulus(p, m);
  require(modulus.size() == static_cast<std::size_t>(m) + 1 && modulus.back() == 1,
          ErrorCode::InvalidArgument, "modulus must be monic of degree m");
  require(irreducible_mod_p(modulus, p), ErrorCode::InvalidArgument, "modulus is reducible mod p");
  for (auto& c : modulus) c = norm(c);
  modulus_ = std::move(modulus);

  // Hensel/Newton lift of the root x^p of the modulus.
  std::vector<std::int64_t> deriv(static_cast<std::size_t>(m), 0);
  for (int i = 1; i <= m; ++i) deriv[static_cast<std::size_t>(i - 1)] = norm(modulus_[static_cast<std::size_t>(i)] * i);
  WElem y = pow(gen(), static_cast<unsigned long long>(p));
  for (int it = 0; it < 64; ++it) {
    const WElem val = evaluate(modulus_, y);
    if (val == zero()) break;
    y = sub(y, mul(val, inverse(evaluate(deriv, y))));
  }
  require(evaluate(modulus_, y) == zero(), ErrorCode::InvalidArgument, "Frobenius lift did not converge");
  phi_x_ = y;

  phi_basis_.assign(static_cast<std::size_t>(m), {});
  std::vector<WElem> phi1(static_cast<std::size_t>(m));
  WElem acc = one();
  for (int i = 0; i < m; ++i) {
    phi1[static_cast<std::size_t>(i)] = acc;
    acc = mul(acc, phi_x_);
  }
  std::vector<WElem> cur(static_cast<std::size_t>(m));
  WElem xi = one();
  for (int i = 0; i < m; ++i) {
    cur[static_cast<std::size_t>(i)] = xi;
    xi = mul(xi, gen());
  }
  for (int k = 0; k < m; ++k) {
    phi_basis_[static_cast<std::size_t>(k)] = cur;
    for (auto& e : cur) e = apply_linear(phi1, e);
  }
}

WittRing witt_ring(long p, int m, int N) { return WittRing(p, m, N); }

WElem WittRing::gen() const {
  WElem a;
  if (m_ == 1) {
    a.c[0] = norm(-modulus_[0]);
  } else {
    a.c[1] = 1;
  }
  return a;
}

WElem WittRing::from_int(long v) const {
  WElem a;
  a.c[0] = norm(v);
  return a;
}

WElem WittRing::add(const WElem& a, const WElem& b) const {
  WElem r;
  for (int i = 0; i < m_; ++i) {
    const std::int64_t s = a.c[i] + b.c[i];
    r.c[i] = s >= q_ ? s - q_ : s;
  }
  return r;
}

WElem WittRing::sub(const WElem& a, const WElem& b) const {
  WElem r;
  for (int i = 0; i < m_; ++i) {
    const std::int64_t s = a.c[i] - b.c[i];
    r.c[i] = s < 0 ? s + q_ : s;
  }
  return r;
}

WElem WittRing::neg(const WElem& a) const { return sub(zero(), a); }

WElem WittRing::mul(const WElem& a, const WElem& b) const {
  std::array<std::int64_t, 2 * kMaxExtension> t{};
  for (int i = 0; i < m_; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < m_; ++j) t[i + j] = (t[i + j] + a.c[i] * b.c[j]) % q_;
  }
  for (int d = 2 * m_ - 2; d >= m_; --d) {
    const std::int64_t k = t[d];
    if (k == 0) continue;
    t[d] = 0;
    for (int i = 0; i < m_; ++i) t[d - m_ + i] = norm(t[d - m_ + i] - k * modulus_[i] % q_);
  }
  WElem r;
  for (int i = 0; i < m_; ++i) r.c[i] = t[i];
  return r;
}

WElem WittRing::mul_int(const WElem& a, long k) const {
  const std::int64_t kk = norm(k);
  WElem r;
  for (int i = 0; i < m_; ++i) r.c[i] = a.c[i] * kk % q_;
  return r;
}

WElem WittRing::pow(WElem a, unsigned long long e) const {
  WElem r = one();
  while (e) {
    if (e & 1ULL) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int WittRing::valuation(const WElem& a) const {
  int best = N_;
  for (int i = 0; i < m_; ++i) {
    std::int64_t v = a.c[i];
    if (v == 0) continue;
    int k = 0;
    while (v % p_ == 0) {
      v /= p_;
      ++k;
    }
    best = std::min(best, k);
  }
  return best;
}

WElem WittRing::inverse(const WElem& u) const {
  require(is_unit(u), ErrorCode::InvalidArgument, "element is not a unit");
  unsigned long long order = 1;
  for (int i = 0; i < m_; ++i) order *= static_cast<unsigned long long>(p_);
  WElem w = pow(u, order - 2);  // inverse modulo p
  for (int it = 0; it < 64 && mul(u, w) != one(); ++it)
    w = mul(w, sub(from_int(2), mul(u, w)));
  require(mul(u, w) == one(), ErrorCode::InvalidArgument, "unit inverse did not converge");
  return w;
}

WElem WittRing::div_p(const WElem& a, int k) const {
  std::int64_t d = 1;
  for (int i = 0; i < k; ++i) d *= p_;
  WElem r;
  for (int i = 0; i < m_; ++i) {
    require(a.c[i] % d == 0, ErrorCode::InvalidArgument, "element is not divisible by the requested power of p");
    r.c[i] = a.c[i] / d;
  }
  return r;
}

WElem WittRing::mul_p(const WElem& a, int k) const {
  WElem r = a;
  for (int j = 0; j < k; ++j) r = mul_int(r, p_);
  return r;
}

WElem WittRing::truncate(const WElem& a, int k) const {
  std::int64_t d = 1;
  for (int i = 0; i < k && d < q_; ++i) d *= p_;
  WElem r;
  for (int i = 0; i < m_; ++i) r.c[i] = a.c[i] % d;
  return r;
}

WElem WittRing::apply_linear(const std::vector<WElem>& images, const WElem& a) const {
  WElem r;
  for (int i = 0; i < m_; ++i)
    if (a.c[i]) r = add(r, mul_int(images[static_cast<std::size_t>(i)], a.c[i]));
  return r;
}

WElem WittRing::frobenius(const WElem& a, long k) const {
  const int kk = static_cast<int>(((k % m_) + m_) % m_);
  if (kk == 0) return a;
  return apply_linear(phi_basis_[static_cast<std::size_t>(kk)], a);
}

WElem WittRing::evaluate(const std::vector<std::int64_t>& poly, const WElem& y) const {
  WElem r;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) r = add(mul(r, y), from_int(static_cast<long>(*it % q_)));
  return r;
}

WElem WittRing::random(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::int64_t> dist(0, q_ - 1);
  WElem r;
  for (int i = 0; i < m_; ++i) r.c[i] = dist(rng);
  return r;
}

WElem WittRing::random_unit(std::mt19937_64& rng) const {
  for (;;) {
    WElem r = random(rng);
    if (is_unit(r)) return r;
  }
}

std::string WittRing::to_hex(const WElem& a) const {
  std::ostringstream os;
  os << std::hex;
  for (int i = 0; i < m_; ++i) os << (i ? ":" : "") << a.c[i];
  return os.str();
}

WElem WittRing::from_hex(const std::string& s) const {
  WElem r;
  std::istringstream is(s);
  std::string part;
  int i = 0;
  while (std::getline(is, part, ':')) {
    require(i < m_, ErrorCode::InvalidArgument, "too many coefficients in " + s);
    r.c[i++] = norm(std::stoll(part, nullptr, 16));
  }
  require(i == m_, ErrorCode::InvalidArgument, "too few coefficients in " + s);
  return r;
}

std::string WittRing::to_string(const WElem& a) const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < m_; ++i) os << (i ? "," : "") << a.c[i];
  os << ']';
  return os.str();
}

Mat2 mat_identity(const WittRing& r) { return mat_from_ints(r, 1, 0, 0, 1); }

Mat2 mat_from_ints(const WittRing& r, long a, long b, long c, long d) {
  Mat2 m;
  m.e[0][0] = r.from_int(a);
  m.e[0][1] = r.from_int(b);
  m.e[1][0] = r.from_int(c);
  m.e[1][1] = r.from_int(d);
  return m;
}

Mat2 mat_mul(const WittRing& r, const Mat2& a, const Mat2& b) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.e[i][j] = r.add(r.mul(a.e[i][0], b.e[0][j]), r.mul(a.e[i][1], b.e[1][j]));
  return m;
}

Mat2 mat_add(const WittRing& r, const Mat2& a, const Mat2& b) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = r.add(a.e[i][j], b.e[i][j]);
  return m;
}

Mat2 mat_scale(const WittRing& r, const Mat2& a, const WElem& s) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = r.mul(a.e[i][j], s);
  return m;
}

Mat2 mat_transpose(const Mat2& a) {
  Mat2 m = a;
  std::swap(m.e[0][1], m.e[1][0]);
  return m;
}

Mat2 mat_adj(const WittRing& r, const Mat2& a) {
  Mat2 m;
  m.e[0][0] = a.e[1][1];
  m.e[1][1] = a.e[0][0];
  m.e[0][1] = r.neg(a.e[0][1]);
  m.e[1][0] = r.neg(a.e[1][0]);
  return m;
}

WElem mat_det(const WittRing& r, const Mat2& a) {
  return r.sub(r.mul(a.e[0][0], a.e[1][1]), r.mul(a.e[0][1], a.e[1][0]));
}

Mat2 mat_frobenius(const WittRing& r, const Mat2& a, long k) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = r.frobenius(a.e[i][j], k);
  return m;
}

Mat2 mat_div_p(const WittRing& r, const Mat2& a, int k) {
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.e[i][j] = r.div_p(a.e[i][j], k);
  return m;
}

int mat_valuation(const WittRing& r, const Mat2& a) {
  int v = r.N();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v = std::min(v, r.valuation(a.e[i][j]));
  return v;
}

Mat2 mat_random_unimodular(const WittRing& r, std::mt19937_64& rng) {
  for (;;) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.e[i][j] = r.random(rng);
    if (r.is_unit(mat_det(r, m))) return m;
  }
}

ElementaryDivisors elementary_divisors(const WittRing& r, const Mat2& a) {
  // Pivot on an entry of minimal valuation; the complementary divisor is read off the determinant.
  const int v1 = mat_valuation(r, a);
  const int vd = r.valuation(mat_det(r, a));
  require(v1 < r.budget() && vd < r.budget(), ErrorCode::NotSplit,
          "matrix is degenerate within the precision budget");
  return {v1, vd - v1};
}

}  // namespace gos
