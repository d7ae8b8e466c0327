#pragma once

#include <gmpxx.h>

#include <variant>
#include <vector>

#include "qdsr/laurent.hpp"
#include "qdsr/numeric.hpp"

namespace qdsr {

class DifferenceRing;

// Element of one of the coefficient rings the difference operators act on:
// either a Laurent polynomial in s (loop and constant variants) or an
// N-periodic tuple of rationals with pointwise operations (chain variant).
class RElem {
 public:
  RElem() : v_(LaurentPoly()) {}
  explicit RElem(LaurentPoly p) : v_(std::move(p)) {}
  explicit RElem(std::vector<mpq_class> sites) : v_(std::move(sites)) {}

  bool is_laurent() const { return std::holds_alternative<LaurentPoly>(v_); }
  const LaurentPoly& laurent() const;
  const std::vector<mpq_class>& sites() const;

  bool is_zero() const;
  RElem operator-() const;
  RElem operator+(const RElem& o) const;
  RElem operator-(const RElem& o) const;
  RElem operator*(const RElem& o) const;
  RElem& operator+=(const RElem& o) { return *this = *this + o; }
  RElem& operator*=(const RElem& o) { return *this = *this * o; }
  bool operator==(const RElem& o) const;
  bool operator!=(const RElem& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  std::variant<LaurentPoly, std::vector<mpq_class>> v_;
};

// Coefficient ring together with its shift automorphism tau. Three
// variants: the loop ring (Laurent polynomials, tau: s -> q s), the
// periodic chain ring (site tuples, tau: cyclic index shift), and the
// constant ring (Laurent polynomials with tau = identity).
class DifferenceRing {
 public:
  enum class Variant { loop, lattice, constant };

  static DifferenceRing loop() { return DifferenceRing(Variant::loop, 0); }
  static DifferenceRing lattice(int sites);
  static DifferenceRing constants() {
    return DifferenceRing(Variant::constant, 0);
  }

  Variant variant() const { return variant_; }
  int sites() const { return sites_; }

  RElem zero() const;
  RElem one() const;
  RElem minus_one() const;
  RElem from_rational(const RatQ& c) const;
  RElem from_laurent(const LaurentPoly& p) const;
  RElem from_sites(std::vector<mpq_class> v) const;

  // tau^power applied to x; power may be negative.
  RElem tau(const RElem& x, int power = 1) const;

  bool operator==(const DifferenceRing& o) const {
    return variant_ == o.variant_ && sites_ == o.sites_;
  }

 private:
  DifferenceRing(Variant v, int n) : variant_(v), sites_(n) {}
  Variant variant_;
  int sites_;
};

// Square matrix over a difference ring.
class MatrixOp {
 public:
  MatrixOp(DifferenceRing ring, int n);
  static MatrixOp identity(const DifferenceRing& ring, int n);

  int n() const { return n_; }
  const DifferenceRing& ring() const { return ring_; }
  RElem& at(int i, int j) { return e_[i * n_ + j]; }
  const RElem& at(int i, int j) const { return e_[i * n_ + j]; }

  MatrixOp operator+(const MatrixOp& o) const;
  MatrixOp operator-(const MatrixOp& o) const;
  MatrixOp operator*(const MatrixOp& o) const;
  bool operator==(const MatrixOp& o) const;
  bool operator!=(const MatrixOp& o) const { return !(*this == o); }

  RElem det() const;

 private:
  DifferenceRing ring_;
  int n_;
  std::vector<RElem> e_;
};

// Entrywise tau.
MatrixOp tau_matrix(const MatrixOp& m, int power = 1);

bool is_unipotent_upper(const MatrixOp& g);
// Inverse of a unipotent upper-triangular matrix (terminating Neumann
// series). Throws on anything else.
MatrixOp unipotent_inverse(const MatrixOp& g);

// Twisted gauge action g . M = tau(g) M g^{-1} for unipotent upper g.
MatrixOp gauge_apply(const MatrixOp& g, const MatrixOp& m);

// Membership in the gauge slice domain: subdiagonal entries are all -1 and
// everything below the subdiagonal vanishes.
bool is_MJ_member(const MatrixOp& m);

// Companion-shaped canonical representative: first row
// (t_1, ..., t_{n-1}, 1), subdiagonal -1, zeros elsewhere.
MatrixOp canonical_embed(const DifferenceRing& ring,
                         const std::vector<RElem>& t);

struct CanonicalForm {
  std::vector<RElem> t;  // t_1 .. t_{n-1}
  MatrixOp gauge;        // unipotent g with gauge_apply(g, input) canonical
};

// Reduces a domain member to its canonical representative by downward
// elimination. Throws Error if the input is not a domain member or its
// determinant is not 1.
CanonicalForm canonicalize(const MatrixOp& m);

// Scalar difference operator D^n + c_1 D^{n-1} + ... + c_{n-1} D + c_n.
struct ScalarDifferenceOp {
  DifferenceRing ring;
  std::vector<RElem> coeffs;  // coeffs[k] multiplies D^{n-k}; coeffs[0] = 1
  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  std::string to_string() const;
};

// The scalar operator attached to a canonical form: unit leading and
// trailing coefficients with the t_i in between.
ScalarDifferenceOp extract_scalar(const DifferenceRing& ring,
                                  const std::vector<RElem>& t);

// Coefficients of prod_i (D + mu_i), expanded with the rule D f = tau(f) D.
// Returned as coeffs[k] of D^{n-k}, so coeffs[0] = 1.
std::vector<RElem> shift_operator_product(const DifferenceRing& ring,
                                          const std::vector<RElem>& mu);

// Free-field composition: t_i as the sum over i-element index subsets
// j_1 < ... < j_i of lambda_{j_1} tau^{-1}(lambda_{j_2}) ...
// tau^{-(i-1)}(lambda_{j_i}). Returns t_1 .. t_n unconstrained; callers
// that need the unit-determinant slice check t_n themselves.
std::vector<RElem> miura_compose(const DifferenceRing& ring,
                                 const std::vector<RElem>& lambda);

// Sums of principal i x i minors, i = 1 .. n. Invariant under conjugation
// over a fixed-point ring of tau.
std::vector<RElem> fundamental_characters(const MatrixOp& m);

}  // namespace qdsr
