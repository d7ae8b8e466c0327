#include "qdsr/kernel.hpp"

namespace qdsr {

void Kernel::add_lau(int a, const RatQ& c) {
  if (c.is_zero()) return;
  auto it = lau_.find(a);
  if (it == lau_.end()) {
    lau_[a] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) lau_.erase(it);
  }
}

Kernel Kernel::delta(int a, const RatQ& c) {
  Kernel k;
  k.add_lau(a, c);
  return k;
}

Kernel Kernel::phi_tilde() {
  // (1-u)/(1+u) = 2/(1+u) - 1.
  Kernel k;
  k.res_ = RatQ(2);
  k.add_lau(0, RatQ(-1));
  return k;
}

Kernel Kernel::res_part(const RatQ& c) {
  Kernel k;
  k.res_ = c;
  return k;
}

Kernel Kernel::operator-() const {
  Kernel k;
  for (const auto& [a, c] : lau_) k.lau_[a] = -c;
  k.res_ = -res_;
  return k;
}

Kernel Kernel::operator+(const Kernel& o) const {
  Kernel k(*this);
  for (const auto& [a, c] : o.lau_) k.add_lau(a, c);
  k.res_ += o.res_;
  return k;
}

Kernel Kernel::operator-(const Kernel& o) const { return *this + (-o); }

Kernel Kernel::operator*(const RatQ& c) const {
  Kernel k;
  if (c.is_zero()) return k;
  for (const auto& [a, v] : lau_) k.lau_[a] = v * c;
  k.res_ = res_ * c;
  return k;
}

namespace {

// Canonical form of c * u^a / (1+u), reduced with
//   u^a/(1+u)   = u^{a-1} - u^{a-1}/(1+u)   (a > 0)
//   u^a/(1+u)   = u^a     - u^{a+1}/(1+u)   (a < 0)
Kernel res_times_upow(const RatQ& c, int a) {
  Kernel out;
  RatQ cur = c;
  while (a > 0) {
    out += Kernel::delta(a - 1, cur);
    cur = -cur;
    --a;
  }
  while (a < 0) {
    out += Kernel::delta(a, cur);
    cur = -cur;
    ++a;
  }
  return out + Kernel::res_part(cur);
}

}  // namespace

Kernel Kernel::mul_u_pow(int k) const {
  Kernel out;
  for (const auto& [a, c] : lau_) out.add_lau(a + k, c);
  if (!res_.is_zero()) out += res_times_upow(res_, k);
  return out;
}

Kernel Kernel::operator*(const Kernel& o) const {
  if (!res_.is_zero() && !o.res_.is_zero())
    throw Error("kernel product leaves the canonical span");
  Kernel out;
  for (const auto& [a, c] : lau_) {
    for (const auto& [b, d] : o.lau_) out.add_lau(a + b, c * d);
  }
  if (!o.res_.is_zero()) {
    for (const auto& [a, c] : lau_) out += res_times_upow(c * o.res_, a);
  }
  if (!res_.is_zero()) {
    for (const auto& [b, d] : o.lau_) out += res_times_upow(res_ * d, b);
  }
  return out;
}

Kernel Kernel::subst_inv() const {
  Kernel out;
  for (const auto& [a, c] : lau_) out.add_lau(-a, c);
  // 1/(1+1/u) = u/(1+u) = 1 - 1/(1+u).
  if (!res_.is_zero()) {
    out.add_lau(0, res_);
    out.res_ -= res_;
  }
  return out;
}

RatQ Kernel::eval_at_qpow(int nu) const {
  RatQ acc(0);
  for (const auto& [a, c] : lau_) acc += c * RatQ::q_power(a * nu);
  if (!res_.is_zero()) acc += res_ / (RatQ(1) + RatQ::q_power(nu));
  return acc;
}

Kernel::PhiView Kernel::phi_view() const {
  PhiView v;
  RatQ half(mpq_class(1, 2));
  v.phi = res_ * half;
  v.delta = lau_;
  if (!v.phi.is_zero()) {
    auto it = v.delta.find(0);
    if (it == v.delta.end()) {
      v.delta[0] = v.phi;
    } else {
      it->second += v.phi;
      if (it->second.is_zero()) v.delta.erase(it);
    }
  }
  return v;
}

Kernel Kernel::from_phi_view(const PhiView& v) {
  Kernel out = phi_tilde() * v.phi;
  for (const auto& [a, c] : v.delta) out += delta(a, c);
  return out;
}

std::string Kernel::to_string() const {
  PhiView v = phi_view();
  std::string out;
  auto append = [&out](const std::string& term) {
    if (!out.empty()) out += " + ";
    out += term;
  };
  if (!v.phi.is_zero()) append("(" + v.phi.to_string() + ")*phi(u)");
  for (const auto& [a, c] : v.delta) {
    std::string t = "(" + c.to_string() + ")";
    if (a == 1) t += "*u";
    else if (a != 0) t += "*u^" + std::to_string(a);
    append(t);
  }
  return out.empty() ? "0" : out;
}

}  // namespace qdsr
