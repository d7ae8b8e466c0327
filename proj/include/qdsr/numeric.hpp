#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdsr {

// Library-wide error type. Thrown on precondition violations (division by
// zero, non-monomial inverses, pole specialization, malformed input).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense polynomial in the indeterminate q with arbitrary-precision integer
// coefficients. Coefficient vector is always trimmed (no trailing zeros).
class PolyZ {
 public:
  PolyZ() = default;
  PolyZ(long c) { if (c != 0) c_.push_back(mpz_class(c)); }
  explicit PolyZ(const mpz_class& c) { if (c != 0) c_.push_back(c); }

  static PolyZ monomial(const mpz_class& c, int e);

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  mpz_class coeff(int e) const {
    if (e < 0 || e >= static_cast<int>(c_.size())) return mpz_class(0);
    return c_[e];
  }
  const mpz_class& leading() const;

  PolyZ operator-() const;
  PolyZ operator+(const PolyZ& o) const;
  PolyZ operator-(const PolyZ& o) const;
  PolyZ operator*(const PolyZ& o) const;
  bool operator==(const PolyZ& o) const { return c_ == o.c_; }
  bool operator!=(const PolyZ& o) const { return !(*this == o); }

  // gcd of all coefficients, carrying the sign of the leading coefficient.
  mpz_class content() const;
  PolyZ divide_by_content(const mpz_class& g) const;
  // Exact division; throws if the division leaves a remainder.
  PolyZ div_exact(const PolyZ& d) const;
  // Primitive polynomial gcd (positive leading coefficient, content 1).
  static PolyZ gcd(PolyZ a, PolyZ b);

  std::complex<double> eval(const std::complex<double>& x) const;
  mpq_class eval(const mpq_class& x) const;

  // Sparse human-readable form with ascending exponents, e.g. "-1+q",
  // "2*q^3". Zero renders as "0".
  std::string to_string() const;

 private:
  void trim();
  std::vector<mpz_class> c_;
};

// Exact element of the field Q(q): a reduced ratio of integer-coefficient
// polynomials. Canonical form: numerator and denominator are coprime in
// Q[q], the pair carries no common integer content, and the denominator's
// leading coefficient is positive. Equality is representation equality.
class RationalFunctionQ {
 public:
  RationalFunctionQ() : num_(0), den_(1) {}
  RationalFunctionQ(long c) : num_(c), den_(1) {}
  RationalFunctionQ(const mpz_class& c) : num_(c), den_(1) {}
  explicit RationalFunctionQ(const mpq_class& c)
      : RationalFunctionQ(PolyZ(c.get_num()), PolyZ(c.get_den())) {}
  RationalFunctionQ(PolyZ num, PolyZ den);

  // q^n for any integer n (negative n yields 1/q^{-n}).
  static RationalFunctionQ q_power(int n);
  // The variable q itself.
  static RationalFunctionQ q() { return q_power(1); }

  const PolyZ& num() const { return num_; }
  const PolyZ& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }

  RationalFunctionQ operator-() const;
  RationalFunctionQ operator+(const RationalFunctionQ& o) const;
  RationalFunctionQ operator-(const RationalFunctionQ& o) const;
  RationalFunctionQ operator*(const RationalFunctionQ& o) const;
  RationalFunctionQ operator/(const RationalFunctionQ& o) const;
  RationalFunctionQ& operator+=(const RationalFunctionQ& o) { return *this = *this + o; }
  RationalFunctionQ& operator-=(const RationalFunctionQ& o) { return *this = *this - o; }
  RationalFunctionQ& operator*=(const RationalFunctionQ& o) { return *this = *this * o; }
  RationalFunctionQ& operator/=(const RationalFunctionQ& o) { return *this = *this / o; }
  RationalFunctionQ pow(int e) const;

  bool operator==(const RationalFunctionQ& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RationalFunctionQ& o) const { return !(*this == o); }
  // Total order usable as a map key (lexicographic on coefficients).
  bool operator<(const RationalFunctionQ& o) const;

  // Serialization: "p(q)" when the denominator is 1, else "(p(q))/(r(q))".
  std::string to_string() const;
  // Parses the to_string format; also accepts plain integer rationals
  // such as "3/2". Throws Error on malformed input.
  static RationalFunctionQ parse(const std::string& s);

  // Floating evaluation at a complex point. Throws Error("specialization
  // at pole") when |denominator(q0)| <= 1e-12.
  std::complex<double> eval_complex(const std::complex<double>& q0) const;
  // Exact evaluation at a rational point; throws on an exact pole.
  mpq_class eval_rational(const mpq_class& q0) const;

 private:
  void reduce();
  PolyZ num_, den_;
};

using RatQ = RationalFunctionQ;

enum class RatOp { add, mul, div, neg };

// Dispatch wrapper used by the CLI and tests; div by zero throws Error.
RationalFunctionQ ratq_arith(RatOp op, const RationalFunctionQ& x,
                             const RationalFunctionQ& y);

}  // namespace qdsr
