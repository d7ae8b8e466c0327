#pragma once

#include <map>
#include <string>

#include "qdsr/numeric.hpp"

namespace qdsr {

// Structure-constant kernel K(u) of a quadratic bracket: a rational
// function of u lying in the span of the Laurent monomials u^a and the
// simple pole 1/(1+u), with coefficients in Q(q). The bracket of two modes
// reads {x_n, y_m} = sum_nu K(q^nu) x_{n-nu} y_{m+nu}, so u plays the role
// of q^nu. The class keeps the unique decomposition
//   K(u) = sum_a lau[a] u^a + res/(1+u)
// under all operations; products that would leave this span throw.
class Kernel {
 public:
  Kernel() = default;

  // c * u^a.
  static Kernel delta(int a = 0, const RatQ& c = RatQ(1));
  // (1-u)/(1+u), the odd first-class kernel.
  static Kernel phi_tilde();
  // c/(1+u).
  static Kernel res_part(const RatQ& c);

  bool is_zero() const { return lau_.empty() && res_.is_zero(); }
  const std::map<int, RatQ>& laurent() const { return lau_; }
  const RatQ& residue() const { return res_; }

  Kernel operator-() const;
  Kernel operator+(const Kernel& o) const;
  Kernel operator-(const Kernel& o) const;
  Kernel operator*(const RatQ& c) const;
  // Partial product: defined unless both operands carry a 1/(1+u) part
  // (the result would acquire a double pole).
  Kernel operator*(const Kernel& o) const;
  Kernel& operator+=(const Kernel& o) { return *this = *this + o; }
  Kernel& operator-=(const Kernel& o) { return *this = *this - o; }
  bool operator==(const Kernel& o) const {
    return lau_ == o.lau_ && res_ == o.res_;
  }
  bool operator!=(const Kernel& o) const { return !(*this == o); }

  // K(u) * u^k, reduced back to canonical form.
  Kernel mul_u_pow(int k) const;
  // K(1/u).
  Kernel subst_inv() const;
  // -K(1/u); kernels of antisymmetric brackets are fixed by this map.
  Kernel reflect() const { return -subst_inv(); }

  // Exact value K(q^nu) as an element of Q(q).
  RatQ eval_at_qpow(int nu) const;

  // Decomposition K = phi * phi_tilde(u) + sum_a delta[a] u^a, matching the
  // printed form of the bracket rules.
  struct PhiView {
    RatQ phi;
    std::map<int, RatQ> delta;
  };
  PhiView phi_view() const;
  static Kernel from_phi_view(const PhiView& v);

  std::string to_string() const;

 private:
  void add_lau(int a, const RatQ& c);
  std::map<int, RatQ> lau_;
  RatQ res_;
};

}  // namespace qdsr
