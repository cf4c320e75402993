#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gostrata/places.hpp"

namespace gos {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt ipow(long p, int e);
bool is_prime(long p);

// Coordinates are indexed by the unramified places, ordered by prime then index.
struct PicardBasis {
  std::vector<ArchPlace> taus;
  int index_of(ArchPlace tau) const;
  int size() const { return static_cast<int>(taus.size()); }
};

PicardBasis picard_basis(const ShimuraDatum& d);

struct PicardVector {
  PicardBasis basis;
  std::vector<Rational> coeffs;
  const Rational& at(ArchPlace tau) const { return coeffs[static_cast<std::size_t>(basis.index_of(tau))]; }
};

using RationalMatrix = std::vector<std::vector<Rational>>;

struct HasseMatrix {
  PicardBasis basis;
  RationalMatrix c;  // column j is the class of the vanishing locus at basis[j]
  Rational det;
};

Rational determinant(RationalMatrix m);
// Unique solution of m x = b; throws when m is singular.
std::vector<Rational> solve(RationalMatrix m, std::vector<Rational> b);

HasseMatrix hasse_matrix(const ShimuraDatum& d, long p);
PicardVector divisor_class(const ShimuraDatum& d, long p, ArchPlace tau);
Rational fiber_degree(const ShimuraDatum& d, long p, const PicardVector& cls, ArchPlace tau);
BigInt normal_bundle_class(const ShimuraDatum& d, long p, ArchPlace tau);

// Coordinates of a class in terms of the vanishing-locus classes.
std::vector<Rational> in_hasse_coordinates(const HasseMatrix& h, const PicardVector& cls);

struct Inequality {
  ArchPlace big;     // p^{n} t[big] > t[small]
  ArchPlace small;
  BigInt coeff;
  std::string lhs;   // rendered as "3*t[0]"
  std::string rhs;
};

std::vector<Inequality> ampleness_cone(const ShimuraDatum& d, long p);

struct AmpleResult {
  bool pass = true;
  std::vector<ArchPlace> violations;
};

// Only a necessary condition: sufficiency is not decided here.
AmpleResult ample_necessary(const ShimuraDatum& d, long p, const std::vector<Rational>& t);

}  // namespace gos
