#include "qdsr/laurent.hpp"

namespace qdsr {

int LaurentPoly::min_exp() const {
  if (c_.empty()) throw Error("min_exp of zero");
  return c_.begin()->first;
}

int LaurentPoly::max_exp() const {
  if (c_.empty()) throw Error("max_exp of zero");
  return c_.rbegin()->first;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [e, c] : c_) r.c_[e] = -c;
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r(*this);
  for (const auto& [e, c] : o.c_) {
    auto it = r.c_.find(e);
    if (it == r.c_.end()) {
      r.c_[e] = c;
    } else {
      it->second += c;
      if (it->second.is_zero()) r.c_.erase(it);
    }
  }
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  return *this + (-o);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (const auto& [e1, c1] : c_) {
    for (const auto& [e2, c2] : o.c_) {
      RatQ p = c1 * c2;
      if (p.is_zero()) continue;
      auto it = r.c_.find(e1 + e2);
      if (it == r.c_.end()) {
        r.c_[e1 + e2] = p;
      } else {
        it->second += p;
        if (it->second.is_zero()) r.c_.erase(it);
      }
    }
  }
  return r;
}

LaurentPoly LaurentPoly::operator*(const RatQ& c) const {
  LaurentPoly r;
  if (c.is_zero()) return r;
  for (const auto& [e, v] : c_) r.c_[e] = v * c;
  return r;
}

LaurentPoly LaurentPoly::shift(int k) const {
  LaurentPoly r;
  for (const auto& [e, c] : c_) r.c_[e] = c * RatQ::q_power(k * e);
  return r;
}

LaurentPoly LaurentPoly::invert() const {
  if (c_.size() != 1) throw Error("inverse not finitely supported");
  const auto& [e, c] = *c_.begin();
  return monomial(RatQ(1) / c, -e);
}

std::string LaurentPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : c_) {
    std::string term = "(" + c.to_string() + ")";
    if (e == 1) term += "*s";
    else if (e != 0) term += "*s^" + std::to_string(e);
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

}  // namespace qdsr
