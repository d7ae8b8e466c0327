#include "qdsr/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace qdsr {

void PolyZ::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyZ PolyZ::monomial(const mpz_class& c, int e) {
  PolyZ p;
  if (c == 0) return p;
  if (e < 0) throw Error("PolyZ::monomial: negative exponent");
  p.c_.assign(e + 1, mpz_class(0));
  p.c_[e] = c;
  return p;
}

const mpz_class& PolyZ::leading() const {
  if (c_.empty()) throw Error("leading coefficient of zero polynomial");
  return c_.back();
}

PolyZ PolyZ::operator-() const {
  PolyZ r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
  PolyZ r;
  r.c_.resize(std::max(c_.size(), o.c_.size()), mpz_class(0));
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
  r.trim();
  return r;
}

PolyZ PolyZ::operator-(const PolyZ& o) const { return *this + (-o); }

PolyZ PolyZ::operator*(const PolyZ& o) const {
  PolyZ r;
  if (c_.empty() || o.c_.empty()) return r;
  r.c_.assign(c_.size() + o.c_.size() - 1, mpz_class(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      r.c_[i + j] += c_[i] * o.c_[j];
    }
  }
  r.trim();
  return r;
}

mpz_class PolyZ::content() const {
  mpz_class g(0);
  for (const auto& c : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  if (g == 0) return mpz_class(0);
  if (!c_.empty() && c_.back() < 0) g = -g;
  return g;
}

PolyZ PolyZ::divide_by_content(const mpz_class& g) const {
  if (g == 0) return PolyZ();
  PolyZ r(*this);
  for (auto& c : r.c_) {
    mpz_class qz, rz;
    mpz_tdiv_qr(qz.get_mpz_t(), rz.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    if (rz != 0) throw Error("divide_by_content: inexact");
    c = qz;
  }
  r.trim();
  return r;
}

PolyZ PolyZ::div_exact(const PolyZ& d) const {
  if (d.is_zero()) throw Error("polynomial division by zero");
  if (is_zero()) return PolyZ();
  // Division is over Q[q]: track a running denominator and require the
  // final result to clear it exactly.
  int dn = degree(), dd = d.degree();
  if (dn < dd) throw Error("div_exact: inexact division");
  std::vector<mpq_class> rem(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) rem[i] = mpq_class(c_[i]);
  std::vector<mpq_class> quo(dn - dd + 1, mpq_class(0));
  mpq_class lead(d.leading());
  for (int k = dn - dd; k >= 0; --k) {
    mpq_class f = rem[k + dd] / lead;
    quo[k] = f;
    if (f != 0) {
      for (int j = 0; j <= dd; ++j) rem[k + j] -= f * mpq_class(d.coeff(j));
    }
  }
  for (const auto& r : rem)
    if (r != 0) throw Error("div_exact: inexact division");
  PolyZ out;
  out.c_.resize(quo.size());
  for (size_t i = 0; i < quo.size(); ++i) {
    if (quo[i].get_den() != 1) throw Error("div_exact: non-integer quotient");
    out.c_[i] = quo[i].get_num();
  }
  out.trim();
  return out;
}

namespace {

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z[q].
PolyZ pseudo_rem(PolyZ a, const PolyZ& b) {
  int db = b.degree();
  mpz_class lb = b.leading();
  while (!a.is_zero() && a.degree() >= db) {
    int k = a.degree() - db;
    mpz_class la = a.leading();
    a = PolyZ(lb) * a - PolyZ::monomial(la, k) * b;
  }
  return a;
}

PolyZ make_primitive(const PolyZ& p) {
  if (p.is_zero()) return p;
  return p.divide_by_content(p.content());
}

}  // namespace

PolyZ PolyZ::gcd(PolyZ a, PolyZ b) {
  if (a.is_zero()) return b.is_zero() ? b : make_primitive(b);
  if (b.is_zero()) return make_primitive(a);
  a = make_primitive(a);
  b = make_primitive(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    PolyZ r = pseudo_rem(a, b);
    a = b;
    b = r.is_zero() ? PolyZ() : make_primitive(r);
  }
  return a;
}

std::complex<double> PolyZ::eval(const std::complex<double>& x) const {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * x + std::complex<double>(it->get_d(), 0.0);
  }
  return acc;
}

mpq_class PolyZ::eval(const mpq_class& x) const {
  mpq_class acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * x + mpq_class(*it);
  }
  return acc;
}

std::string PolyZ::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (int e = 0; e <= degree(); ++e) {
    const mpz_class& c = c_[e];
    if (c == 0) continue;
    std::string term;
    if (e == 0) {
      term = c.get_str();
    } else {
      std::string var = (e == 1) ? "q" : ("q^" + std::to_string(e));
      if (c == 1) term = var;
      else if (c == -1) term = "-" + var;
      else term = c.get_str() + "*" + var;
    }
    if (out.empty()) out = term;
    else if (!term.empty() && term[0] == '-') out += term;
    else out += "+" + term;
  }
  return out;
}

RationalFunctionQ::RationalFunctionQ(PolyZ num, PolyZ den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  reduce();
}

void RationalFunctionQ::reduce() {
  if (num_.is_zero()) {
    den_ = PolyZ(1);
    return;
  }
  PolyZ g = PolyZ::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = num_.div_exact(g);
    den_ = den_.div_exact(g);
  }
  mpz_class cn = num_.content();
  mpz_class cd = den_.content();
  mpz_class g2;
  mpz_gcd(g2.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
  if (g2 != 0 && g2 != 1) {
    num_ = num_.divide_by_content(g2);
    den_ = den_.divide_by_content(g2);
  }
  if (den_.leading() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

RationalFunctionQ RationalFunctionQ::q_power(int n) {
  if (n >= 0)
    return RationalFunctionQ(PolyZ::monomial(1, n), PolyZ(1));
  return RationalFunctionQ(PolyZ(1), PolyZ::monomial(1, -n));
}

RationalFunctionQ RationalFunctionQ::operator-() const {
  RationalFunctionQ r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalFunctionQ RationalFunctionQ::operator+(const RationalFunctionQ& o) const {
  return RationalFunctionQ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunctionQ RationalFunctionQ::operator-(const RationalFunctionQ& o) const {
  return RationalFunctionQ(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunctionQ RationalFunctionQ::operator*(const RationalFunctionQ& o) const {
  return RationalFunctionQ(num_ * o.num_, den_ * o.den_);
}

RationalFunctionQ RationalFunctionQ::operator/(const RationalFunctionQ& o) const {
  if (o.is_zero()) throw Error("division by zero");
  return RationalFunctionQ(num_ * o.den_, den_ * o.num_);
}

RationalFunctionQ RationalFunctionQ::pow(int e) const {
  if (e == 0) return RationalFunctionQ(1);
  RationalFunctionQ base = *this;
  if (e < 0) {
    base = RationalFunctionQ(1) / base;
    e = -e;
  }
  RationalFunctionQ acc(1);
  for (int i = 0; i < e; ++i) acc = acc * base;
  return acc;
}

bool RationalFunctionQ::operator<(const RationalFunctionQ& o) const {
  auto cmp_poly = [](const PolyZ& a, const PolyZ& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (int e = a.degree(); e >= 0; --e) {
      int c = mpz_cmp(a.coeff(e).get_mpz_t(), b.coeff(e).get_mpz_t());
      if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
  };
  int c = cmp_poly(num_, o.num_);
  if (c != 0) return c < 0;
  return cmp_poly(den_, o.den_) < 0;
}

std::string RationalFunctionQ::to_string() const {
  if (num_.is_zero()) return "0";
  if (den_ == PolyZ(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

std::complex<double> RationalFunctionQ::eval_complex(
    const std::complex<double>& q0) const {
  std::complex<double> d = den_.eval(q0);
  if (std::abs(d) <= 1e-12) throw Error("specialization at pole");
  return num_.eval(q0) / d;
}

mpq_class RationalFunctionQ::eval_rational(const mpq_class& q0) const {
  mpq_class d = den_.eval(q0);
  if (d == 0) throw Error("specialization at pole");
  mpq_class r = num_.eval(q0) / d;
  r.canonicalize();
  return r;
}

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& str) : s(str) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool peek(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++i;
      return true;
    }
    return false;
  }
  mpz_class parse_int() {
    skip_ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    size_t digits = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits) throw Error("parse: expected integer in '" + s + "'");
    return mpz_class(s.substr(start, i - start));
  }
  int parse_exponent() {
    mpz_class e = parse_int();
    if (e < 0 || e > 100000) throw Error("parse: exponent out of range");
    return static_cast<int>(e.get_si());
  }

  // term := INT ['*' 'q' ['^' INT]] | 'q' ['^' INT]; leading sign handled
  // by the caller.
  PolyZ parse_term(int sign) {
    skip_ws();
    mpz_class c(sign);
    bool have_coeff = false;
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])))) {
      c = sign * parse_int();
      have_coeff = true;
    }
    skip_ws();
    if (i < s.size() && s[i] == '*') {
      ++i;
      skip_ws();
    }
    if (i < s.size() && s[i] == 'q') {
      ++i;
      int e = 1;
      if (eat('^')) e = parse_exponent();
      return PolyZ::monomial(c, e);
    }
    if (!have_coeff) throw Error("parse: expected term in '" + s + "'");
    return PolyZ(c);
  }

  PolyZ parse_poly() {
    PolyZ p;
    int sign = 1;
    if (eat('-')) sign = -1;
    else eat('+');
    p = p + parse_term(sign);
    for (;;) {
      skip_ws();
      if (i >= s.size() || (s[i] != '+' && s[i] != '-')) break;
      sign = (s[i] == '-') ? -1 : 1;
      ++i;
      p = p + parse_term(sign);
    }
    return p;
  }
};

}  // namespace

RationalFunctionQ RationalFunctionQ::parse(const std::string& str) {
  // Locate a top-level '/'; parenthesized numerator/denominator optional.
  int depth = 0;
  size_t slash = std::string::npos;
  for (size_t i = 0; i < str.size(); ++i) {
    if (str[i] == '(') ++depth;
    else if (str[i] == ')') --depth;
    else if (str[i] == '/' && depth == 0) {
      if (slash != std::string::npos) throw Error("parse: multiple '/'");
      slash = i;
    }
  }
  auto strip = [](std::string t) {
    size_t a = t.find_first_not_of(" \t");
    size_t b = t.find_last_not_of(" \t");
    if (a == std::string::npos) throw Error("parse: empty expression");
    t = t.substr(a, b - a + 1);
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')') {
      int d = 0;
      bool wraps = true;
      for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] == '(') ++d;
        else if (t[i] == ')') {
          --d;
          if (d == 0 && i + 1 != t.size()) wraps = false;
        }
      }
      if (wraps) t = t.substr(1, t.size() - 2);
    }
    return t;
  };
  auto parse_side = [&](const std::string& t) {
    Parser p(t);
    PolyZ poly = p.parse_poly();
    p.skip_ws();
    if (p.i != t.size()) throw Error("parse: trailing characters in '" + t + "'");
    return poly;
  };
  if (slash == std::string::npos) {
    return RationalFunctionQ(parse_side(strip(str)), PolyZ(1));
  }
  PolyZ num = parse_side(strip(str.substr(0, slash)));
  PolyZ den = parse_side(strip(str.substr(slash + 1)));
  return RationalFunctionQ(std::move(num), std::move(den));
}

RationalFunctionQ ratq_arith(RatOp op, const RationalFunctionQ& x,
                             const RationalFunctionQ& y) {
  switch (op) {
    case RatOp::add: return x + y;
    case RatOp::mul: return x * y;
    case RatOp::div: return x / y;
    case RatOp::neg: return -x;
  }
  throw Error("ratq_arith: unknown op");
}

}  // namespace qdsr
