#pragma once

#include <map>
#include <string>

#include "qdsr/numeric.hpp"

namespace qdsr {

// Finitely supported Laurent polynomial in the formal variable s with
// coefficients in Q(q). Used both as a point on the loop group (entries of
// matrix-valued functions of s) and as a generating series: the mode x_n of
// a series x(s) is the coefficient of s^{-n}.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const RatQ& c) {
    if (!c.is_zero()) c_[0] = c;
  }
  LaurentPoly(long c) : LaurentPoly(RatQ(c)) {}

  static LaurentPoly monomial(const RatQ& c, int e) {
    LaurentPoly p;
    if (!c.is_zero()) c_insert(p, e, c);
    return p;
  }
  // The variable s itself.
  static LaurentPoly s() { return monomial(RatQ(1), 1); }

  bool is_zero() const { return c_.empty(); }
  RatQ coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? RatQ(0) : it->second;
  }
  // Coefficient of s^{-n}; the n-th mode of the series this element encodes.
  RatQ mode_coeff(int n) const { return coeff(-n); }
  const std::map<int, RatQ>& terms() const { return c_; }
  int min_exp() const;
  int max_exp() const;

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly operator*(const RatQ& c) const;
  bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  // Dilation substitution s -> q^k s: the coefficient of s^m picks up q^{km}.
  LaurentPoly shift(int k) const;
  // Multiplicative inverse. Only monomials are invertible in this ring;
  // anything else throws Error("inverse not finitely supported").
  LaurentPoly invert() const;

  std::string to_string() const;

 private:
  static void c_insert(LaurentPoly& p, int e, const RatQ& c) { p.c_[e] = c; }
  std::map<int, RatQ> c_;
};

}  // namespace qdsr
