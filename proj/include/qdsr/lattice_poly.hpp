#pragma once

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdsr/numeric.hpp"

namespace qdsr {

// Generator symbols for the periodic-chain algebras. Kinds a..d are matrix
// entries at a site, lam the free-field variable, t and nu derived-rule
// symbols, and ha..hd a second copy used when one expression mixes a group
// element with a chain point.
enum class GenKind : int { a, b, c, d, lam, t, nu, ha, hb, hc, hd };

struct GenId {
  GenKind kind;
  int site;
  auto operator<=>(const GenId&) const = default;
};

std::string gen_name(GenId g);

// Exponent-sorted product of generator powers; exponents are positive.
using Monomial = std::vector<std::pair<GenId, int>>;

// Multivariate polynomial in the chain generators with rational
// coefficients. The chain rings are q-free, so plain rationals suffice and
// keep the high-volume verification loops fast.
class LatticePolynomial {
 public:
  LatticePolynomial() = default;
  LatticePolynomial(long c) {
    if (c != 0) terms_[Monomial{}] = mpq_class(c);
  }
  explicit LatticePolynomial(const mpq_class& c) {
    if (c != 0) terms_[Monomial{}] = c;
  }
  static LatticePolynomial gen(GenId g, int exp = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  mpq_class constant_value() const;
  const std::map<Monomial, mpq_class>& terms() const { return terms_; }

  LatticePolynomial operator-() const;
  LatticePolynomial operator+(const LatticePolynomial& o) const;
  LatticePolynomial operator-(const LatticePolynomial& o) const;
  LatticePolynomial operator*(const LatticePolynomial& o) const;
  LatticePolynomial& operator+=(const LatticePolynomial& o) { return *this = *this + o; }
  LatticePolynomial& operator-=(const LatticePolynomial& o) { return *this = *this - o; }
  LatticePolynomial& operator*=(const LatticePolynomial& o) { return *this = *this * o; }
  LatticePolynomial operator*(const mpq_class& c) const;
  bool operator==(const LatticePolynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const LatticePolynomial& o) const { return !(*this == o); }

  LatticePolynomial derivative(GenId g) const;
  // Highest power of g appearing in any term.
  int degree_in(GenId g) const;
  // All generators appearing in the polynomial.
  std::vector<GenId> support() const;

  mpq_class eval(const std::function<mpq_class(GenId)>& point) const;

  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const mpq_class& c);
  std::map<Monomial, mpq_class> terms_;
};

// Ratio of chain polynomials. Kept lightly normalized (nonzero denominator,
// stripped common monomial and content factors); equality is decided by
// cross-multiplication, which is exact regardless of remaining common
// factors.
class RationalExpr {
 public:
  RationalExpr() : num_(0), den_(1) {}
  RationalExpr(long c) : num_(c), den_(1) {}
  RationalExpr(LatticePolynomial n) : num_(std::move(n)), den_(1) {}
  RationalExpr(LatticePolynomial n, LatticePolynomial d);

  const LatticePolynomial& num() const { return num_; }
  const LatticePolynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalExpr operator-() const;
  RationalExpr operator+(const RationalExpr& o) const;
  RationalExpr operator-(const RationalExpr& o) const;
  RationalExpr operator*(const RationalExpr& o) const;
  RationalExpr operator/(const RationalExpr& o) const;
  RationalExpr& operator+=(const RationalExpr& o) { return *this = *this + o; }
  RationalExpr& operator-=(const RationalExpr& o) { return *this = *this - o; }
  RationalExpr& operator*=(const RationalExpr& o) { return *this = *this * o; }

  // Exact equality of the represented rational functions.
  bool operator==(const RationalExpr& o) const;
  bool operator!=(const RationalExpr& o) const { return !(*this == o); }

  RationalExpr derivative(GenId g) const;
  mpq_class eval(const std::function<mpq_class(GenId)>& point) const;

  std::string to_string() const;

 private:
  void normalize();
  LatticePolynomial num_, den_;
};

// Replaces every power of g in p by the given rational expression.
RationalExpr substitute_gen(const LatticePolynomial& p, GenId g,
                            const RationalExpr& value);
RationalExpr substitute_gen(const RationalExpr& p, GenId g,
                            const RationalExpr& value);

}  // namespace qdsr
