#include "gostrata/picard.hpp"

namespace gos {

BigInt ipow(long p, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

namespace {

void check_p(long p) { require(is_prime(p), ErrorCode::InvalidArgument, "p must be a prime"); }

}  // namespace

int PicardBasis::index_of(ArchPlace tau) const {
  for (int k = 0; k < size(); ++k)
    if (taus[static_cast<std::size_t>(k)] == tau) return k;
  fail(ErrorCode::InvalidArgument, "place is not a coordinate of the Picard basis");
}

PicardBasis picard_basis(const ShimuraDatum& d) {
  PicardBasis b;
  for (int q = 0; q < d.places.size(); ++q)
    for (int i : members(d.gaps(q))) b.taus.push_back({q, i});
  return b;
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational k = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= k * m[col][c];
    }
  }
  return det;
}

std::vector<Rational> solve(RationalMatrix m, std::vector<Rational> b) {
  const std::size_t n = m.size();
  require(b.size() == n, ErrorCode::InvalidArgument, "dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    require(piv < n, ErrorCode::InvalidArgument, "singular system");
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational k = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= k * m[col][c];
      b[r] -= k * b[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) b[r] /= m[r][r];
  return b;
}

HasseMatrix hasse_matrix(const ShimuraDatum& d, long p) {
  check_p(p);
  HasseMatrix h;
  h.basis = picard_basis(d);
  const int n = h.basis.size();
  require(n > 0, ErrorCode::InvalidArgument, "every archimedean place is ramified");
  h.c.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), 0));
  for (int j = 0; j < n; ++j) {
    const PicardVector col = divisor_class(d, p, h.basis.taus[static_cast<std::size_t>(j)]);
    for (int i = 0; i < n; ++i) h.c[i][j] = col.coeffs[i];
  }
  h.det = determinant(h.c);
  return h;
}

PicardVector divisor_class(const ShimuraDatum& d, long p, ArchPlace tau) {
  check_p(p);
  const NTau nt = n_tau(d, tau);
  PicardVector v{picard_basis(d), {}};
  v.coeffs.assign(static_cast<std::size_t>(v.basis.size()), 0);
  // When tau^- = tau both terms land on the same coordinate.
  v.coeffs[v.basis.index_of(nt.minus)] += Rational(ipow(p, nt.n));
  v.coeffs[v.basis.index_of(tau)] -= 1;
  return v;
}

Rational fiber_degree(const ShimuraDatum& d, long p, const PicardVector& cls, ArchPlace tau) {
  check_p(p);
  const NTau nt = n_tau(d, tau);
  return Rational(ipow(p, nt.n)) * cls.at(tau) - cls.at(nt.minus);
}

BigInt normal_bundle_class(const ShimuraDatum& d, long p, ArchPlace tau) {
  check_p(p);
  require(popcount(d.gaps(tau.prime)) > 1, ErrorCode::Inapplicable,
          "normal bundle formula needs more than one unramified place above the prime");
  return -2 * ipow(p, n_tau(d, tau).n);
}

std::vector<Rational> in_hasse_coordinates(const HasseMatrix& h, const PicardVector& cls) {
  return solve(h.c, cls.coeffs);
}

std::vector<Inequality> ampleness_cone(const ShimuraDatum& d, long p) {
  check_p(p);
  const PicardBasis b = picard_basis(d);
  std::vector<Inequality> out;
  for (const ArchPlace& tau : b.taus) {
    const NTau nt = n_tau(d, tau);
    Inequality q{tau, nt.minus, ipow(p, nt.n), {}, {}};
    q.lhs = q.coeff.str() + "*t[" + std::to_string(b.index_of(tau)) + "]";
    q.rhs = "t[" + std::to_string(b.index_of(nt.minus)) + "]";
    out.push_back(std::move(q));
  }
  return out;
}

AmpleResult ample_necessary(const ShimuraDatum& d, long p, const std::vector<Rational>& t) {
  const PicardBasis b = picard_basis(d);
  require(static_cast<int>(t.size()) == b.size(), ErrorCode::InvalidArgument,
          "weight vector has the wrong length");
  AmpleResult r;
  for (const Inequality& q : ampleness_cone(d, p)) {
    const Rational lhs = Rational(q.coeff) * t[b.index_of(q.big)];
    if (!(lhs > t[b.index_of(q.small)])) {
      r.pass = false;
      r.violations.push_back(q.big);
    }
  }
  return r;
}

}  // namespace gos
