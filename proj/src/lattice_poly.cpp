#include "qdsr/lattice_poly.hpp"

#include <algorithm>

namespace qdsr {

std::string gen_name(GenId g) {
  static const char* names[] = {"a", "b", "c", "d", "lam", "t",
                                "nu", "ha", "hb", "hc", "hd"};
  return std::string(names[static_cast<int>(g.kind)]) + "_" +
         std::to_string(g.site);
}

LatticePolynomial LatticePolynomial::gen(GenId g, int exp) {
  LatticePolynomial p;
  if (exp < 0) throw Error("LatticePolynomial::gen: negative exponent");
  if (exp == 0) return LatticePolynomial(1);
  p.terms_[Monomial{{g, exp}}] = mpq_class(1);
  return p;
}

bool LatticePolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

mpq_class LatticePolynomial::constant_value() const {
  if (!is_constant()) throw Error("constant_value of non-constant polynomial");
  return terms_.empty() ? mpq_class(0) : terms_.begin()->second;
}

void LatticePolynomial::add_term(const Monomial& m, const mpq_class& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_[m] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LatticePolynomial LatticePolynomial::operator-() const {
  LatticePolynomial r;
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

LatticePolynomial LatticePolynomial::operator+(const LatticePolynomial& o) const {
  LatticePolynomial r(*this);
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

LatticePolynomial LatticePolynomial::operator-(const LatticePolynomial& o) const {
  LatticePolynomial r(*this);
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

namespace {

Monomial mono_mul(const Monomial& x, const Monomial& y) {
  Monomial r;
  r.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].first == y[j].first) {
      r.emplace_back(x[i].first, x[i].second + y[j].second);
      ++i;
      ++j;
    } else if (x[i].first < y[j].first) {
      r.push_back(x[i++]);
    } else {
      r.push_back(y[j++]);
    }
  }
  for (; i < x.size(); ++i) r.push_back(x[i]);
  for (; j < y.size(); ++j) r.push_back(y[j]);
  return r;
}

}  // namespace

LatticePolynomial LatticePolynomial::operator*(const LatticePolynomial& o) const {
  LatticePolynomial r;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      r.add_term(mono_mul(m1, m2), c1 * c2);
    }
  }
  return r;
}

LatticePolynomial LatticePolynomial::operator*(const mpq_class& c) const {
  LatticePolynomial r;
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

LatticePolynomial LatticePolynomial::derivative(GenId g) const {
  LatticePolynomial r;
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i].first != g) continue;
      Monomial d = m;
      mpq_class coef = c * m[i].second;
      if (d[i].second == 1) d.erase(d.begin() + i);
      else d[i].second -= 1;
      r.add_term(d, coef);
      break;
    }
  }
  return r;
}

int LatticePolynomial::degree_in(GenId g) const {
  int deg = 0;
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (const auto& [id, e] : m)
      if (id == g) deg = std::max(deg, e);
  }
  return deg;
}

std::vector<GenId> LatticePolynomial::support() const {
  std::vector<GenId> out;
  for (const auto& [m, c] : terms_) {
    (void)c;
    for (const auto& [id, e] : m) {
      (void)e;
      if (!std::binary_search(out.begin(), out.end(), id)) {
        out.insert(std::upper_bound(out.begin(), out.end(), id), id);
      }
    }
  }
  return out;
}

mpq_class LatticePolynomial::eval(
    const std::function<mpq_class(GenId)>& point) const {
  mpq_class acc(0);
  for (const auto& [m, c] : terms_) {
    mpq_class v = c;
    for (const auto& [id, e] : m) {
      mpq_class x = point(id);
      for (int k = 0; k < e; ++k) v *= x;
    }
    acc += v;
  }
  return acc;
}

std::string LatticePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string term = c.get_str();
    for (const auto& [id, e] : m) {
      term += "*" + gen_name(id);
      if (e != 1) term += "^" + std::to_string(e);
    }
    if (out.empty()) out = term;
    else if (term[0] == '-') out += term;
    else out += "+" + term;
  }
  return out;
}

RationalExpr::RationalExpr(LatticePolynomial n, LatticePolynomial d)
    : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw Error("rational expression with zero denominator");
  normalize();
}

void RationalExpr::normalize() {
  if (num_.is_zero()) {
    den_ = LatticePolynomial(1);
    return;
  }
  // Strip the common monomial factor (per-generator min exponent across both
  // numerator and denominator terms) and the common rational content.
  auto min_exps = [](const LatticePolynomial& p, std::map<GenId, int>& acc,
                     bool first_poly) {
    bool first = first_poly;
    for (const auto& [m, c] : p.terms()) {
      (void)c;
      std::map<GenId, int> cur;
      for (const auto& [id, e] : m) cur[id] = e;
      if (first) {
        acc = cur;
        first = false;
      } else {
        for (auto it = acc.begin(); it != acc.end();) {
          auto jt = cur.find(it->first);
          if (jt == cur.end()) it = acc.erase(it);
          else {
            it->second = std::min(it->second, jt->second);
            ++it;
          }
        }
      }
      if (acc.empty()) break;
    }
  };
  std::map<GenId, int> common;
  min_exps(num_, common, true);
  if (!common.empty()) {
    std::map<GenId, int> dc = common;
    min_exps(den_, dc, false);
    common = dc;
  } else {
    common.clear();
  }
  auto divide_mono = [](const LatticePolynomial& p,
                        const std::map<GenId, int>& f) {
    LatticePolynomial r;
    for (const auto& [m, c] : p.terms()) {
      Monomial d;
      for (const auto& [id, e] : m) {
        auto it = f.find(id);
        int drop = (it == f.end()) ? 0 : it->second;
        if (e - drop > 0) d.emplace_back(id, e - drop);
      }
      r += LatticePolynomial(c) * [&] {
        LatticePolynomial t(1);
        for (const auto& [id, e] : d) t *= LatticePolynomial::gen(id, e);
        return t;
      }();
    }
    return r;
  };
  if (!common.empty()) {
    num_ = divide_mono(num_, common);
    den_ = divide_mono(den_, common);
  }
  // Rational content: make the denominator's first term coefficient 1.
  mpq_class lead = den_.terms().begin()->second;
  if (lead != 1) {
    mpq_class inv = 1 / lead;
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalExpr RationalExpr::operator+(const RationalExpr& o) const {
  if (den_ == o.den_) return RationalExpr(num_ + o.num_, den_);
  return RationalExpr(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator-(const RationalExpr& o) const {
  if (den_ == o.den_) return RationalExpr(num_ - o.num_, den_);
  return RationalExpr(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
  return RationalExpr(num_ * o.num_, den_ * o.den_);
}

RationalExpr RationalExpr::operator/(const RationalExpr& o) const {
  if (o.is_zero()) throw Error("division by zero expression");
  return RationalExpr(num_ * o.den_, den_ * o.num_);
}

bool RationalExpr::operator==(const RationalExpr& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

RationalExpr RationalExpr::derivative(GenId g) const {
  return RationalExpr(num_.derivative(g) * den_ - num_ * den_.derivative(g),
                      den_ * den_);
}

mpq_class RationalExpr::eval(
    const std::function<mpq_class(GenId)>& point) const {
  mpq_class d = den_.eval(point);
  if (d == 0) throw Error("expression evaluation at pole");
  return num_.eval(point) / d;
}

std::string RationalExpr::to_string() const {
  if (den_ == LatticePolynomial(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RationalExpr substitute_gen(const LatticePolynomial& p, GenId g,
                            const RationalExpr& value) {
  // Collect p as a polynomial in g with polynomial coefficients, then apply
  // Horner's rule in the substituted value.
  int deg = p.degree_in(g);
  if (deg == 0) return RationalExpr(p);
  std::vector<LatticePolynomial> coef(deg + 1);
  for (const auto& [m, c] : p.terms()) {
    Monomial rest;
    int e_g = 0;
    for (const auto& [id, e] : m) {
      if (id == g) e_g = e;
      else rest.emplace_back(id, e);
    }
    LatticePolynomial t(c);
    for (const auto& [id, e] : rest) t *= LatticePolynomial::gen(id, e);
    coef[e_g] += t;
  }
  RationalExpr acc(coef[deg]);
  for (int k = deg - 1; k >= 0; --k) {
    acc = acc * value + RationalExpr(coef[k]);
  }
  return acc;
}

RationalExpr substitute_gen(const RationalExpr& p, GenId g,
                            const RationalExpr& value) {
  RationalExpr d = substitute_gen(p.den(), g, value);
  if (d.is_zero()) throw Error("substitution produced zero denominator");
  return substitute_gen(p.num(), g, value) / d;
}

}  // namespace qdsr
