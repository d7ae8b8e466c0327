#include "qdsr/rmatrix.hpp"

#include <algorithm>

namespace qdsr {

RatQ RMatrixSpec::phi_coeff(int n) const {
  switch (family_) {
    case Family::first_class:
      return RatQ(1) / (RatQ(1) + RatQ::q_power(n));
    case Family::standard_r0:
      if (n == 0) return RatQ(mpq_class(1, 2));
      return n > 0 ? RatQ(1) : RatQ(0);
  }
  throw Error("unknown r-matrix family");
}

bool RMatrixSpec::has_rational_kernel() const {
  return family_ == Family::first_class;
}

Kernel RMatrixSpec::kernel() const {
  if (!has_rational_kernel())
    throw Error("r-matrix profile has no rational kernel in u");
  return Kernel::res_part(RatQ(1));
}

std::map<int, RatQ> solve_first_class_loop(int range) {
  if (range < 0) throw Error("solver range must be nonnegative");
  std::map<int, RatQ> out;
  for (int m = 0; m <= range; ++m) {
    // Unknowns x = phi_m, y = phi_{-m}:
    //   (1+q^m) x - (1+q^{-m}) y = 0      (constraint closure at degree m)
    //   x + y = 1                          (normalization)
    RatQ a = RatQ(1) + RatQ::q_power(m);
    RatQ b = RatQ(1) + RatQ::q_power(-m);
    RatQ det = a + b;
    if (det.is_zero()) throw Error("first-class system is singular");
    RatQ x = b / det;
    RatQ y = a / det;
    out[m] = x;
    out[-m] = y;
  }
  return out;
}

RatQ constraint_bracket_coefficient(const RMatrixSpec& spec, int m) {
  RatQ pp = spec.phi_coeff(m);
  RatQ pm = spec.phi_coeff(-m);
  RatQ half(mpq_class(1, 2));
  return (pp - pm + pp * RatQ::q_power(m) - pm * RatQ::q_power(-m)) * half;
}

BracketTable derive_bracket_rule(const RMatrixSpec& spec) {
  return BracketTable::assemble(spec.kernel());
}

const LaurentPoly& LoopPoint::series(LoopGen g) const {
  switch (g) {
    case LoopGen::a: return a;
    case LoopGen::b: return b;
    case LoopGen::c: return c;
    case LoopGen::d: return d;
    case LoopGen::l: return l;
  }
  throw Error("unknown generator");
}

int LoopPoint::support_radius() const {
  int r = 0;
  for (LoopGen g : {LoopGen::a, LoopGen::b, LoopGen::c, LoopGen::d}) {
    const LaurentPoly& p = series(g);
    if (p.is_zero()) continue;
    r = std::max({r, std::abs(p.min_exp()), std::abs(p.max_exp())});
  }
  return r;
}

LoopPoint LoopPoint::random_unit(Rng& rng) {
  auto small = [&rng]() {
    LaurentPoly p;
    int terms = 1 + static_cast<int>(rng.below(2));
    for (int t = 0; t < terms; ++t) {
      p += LaurentPoly::monomial(RatQ(rng.range(-2, 2)),
                                 static_cast<int>(rng.range(-1, 1)));
    }
    return p;
  };
  LaurentPoly x = small(), y = small();
  RatQ dc(rng.nonzero(2));
  int dj = static_cast<int>(rng.range(-1, 1));
  LaurentPoly diag = LaurentPoly::monomial(dc, dj);
  LaurentPoly diag_inv = diag.invert();
  LoopPoint pt;
  pt.a = (LaurentPoly(1) + x * y) * diag;
  pt.b = x * diag_inv;
  pt.c = y * diag;
  pt.d = diag_inv;
  return pt;
}

namespace {

LaurentPoly laurent_pow(const LaurentPoly& base, int e) {
  if (e == 0) return LaurentPoly(1);
  LaurentPoly b = e > 0 ? base : base.invert();
  int n = std::abs(e);
  LaurentPoly acc(1);
  for (int i = 0; i < n; ++i) acc *= b;
  return acc;
}

LaurentPoly product_at_point(const FactorProd& facs, const LoopPoint& pt) {
  LaurentPoly acc(1);
  for (const auto& [f, e] : facs) {
    acc *= laurent_pow(pt.series(f.gen).shift(-f.shift), e);
    if (acc.is_zero()) return acc;
  }
  return acc;
}

}  // namespace

RatQ bracket_eval_terms(const TermList& terms, int n, int m,
                        const LoopPoint& pt) {
  RatQ acc(0);
  for (const auto& term : terms) {
    LaurentPoly zser = product_at_point(term.z, pt);
    if (zser.is_zero()) continue;
    LaurentPoly wser = product_at_point(term.w, pt);
    if (wser.is_zero()) continue;
    // z modes live where the kernel argument nu keeps n - nu inside the
    // support of the z product.
    for (int nu = n + zser.min_exp(); nu <= n + zser.max_exp(); ++nu) {
      RatQ zc = zser.mode_coeff(n - nu);
      if (zc.is_zero()) continue;
      RatQ wc = wser.mode_coeff(m + nu);
      if (wc.is_zero()) continue;
      acc += term.k.eval_at_qpow(nu) * zc * wc;
    }
  }
  return acc;
}

RatQ bracket_eval(const BracketTable& table, LoopGen x, int n, LoopGen y,
                  int m, const LoopPoint& pt) {
  return bracket_eval_terms(rule_terms(table, x, y), n, m, pt);
}

GradientMatrix loop_gradient(LoopGen x, GradientSide side) {
  using G = LoopGen;
  const RatQ h(mpq_class(1, 2));
  const RatQ mh = -h;
  GradientMatrix g{};
  auto put = [&g](int r, int c, RatQ co, G gen) {
    g[r][c].push_back({co, gen});
  };
  if (side == GradientSide::left) {
    switch (x) {
      case G::a: put(0, 0, h, G::a); put(1, 0, RatQ(1), G::c); put(1, 1, mh, G::a); break;
      case G::b: put(0, 0, h, G::b); put(1, 0, RatQ(1), G::d); put(1, 1, mh, G::b); break;
      case G::c: put(0, 0, mh, G::c); put(0, 1, RatQ(1), G::a); put(1, 1, h, G::c); break;
      case G::d: put(0, 0, mh, G::d); put(0, 1, RatQ(1), G::b); put(1, 1, h, G::d); break;
      default: throw Error("gradient defined for the matrix entries only");
    }
  } else {
    switch (x) {
      case G::a: put(0, 0, h, G::a); put(0, 1, RatQ(1), G::b); put(1, 1, mh, G::a); break;
      case G::b: put(0, 0, mh, G::b); put(1, 0, RatQ(1), G::a); put(1, 1, h, G::b); break;
      case G::c: put(0, 0, h, G::c); put(0, 1, RatQ(1), G::d); put(1, 1, mh, G::c); break;
      case G::d: put(0, 0, mh, G::d); put(1, 0, RatQ(1), G::c); put(1, 1, h, G::d); break;
      default: throw Error("gradient defined for the matrix entries only");
    }
  }
  return g;
}

std::array<std::array<LaurentPoly, 2>, 2> gradient_at_point(
    LoopGen x, int m, GradientSide side, const LoopPoint& pt) {
  GradientMatrix g = loop_gradient(x, side);
  LaurentPoly sm = LaurentPoly::monomial(RatQ(1), m);
  std::array<std::array<LaurentPoly, 2>, 2> out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      LaurentPoly acc;
      for (const auto& [co, gen] : g[r][c]) acc += pt.series(gen) * co;
      out[r][c] = acc * sm;
    }
  }
  return out;
}

RatQ trace_pairing(const std::array<std::array<LaurentPoly, 2>, 2>& m1,
                   const std::array<std::array<LaurentPoly, 2>, 2>& m2) {
  LaurentPoly tr;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) tr += m1[i][k] * m2[k][i];
  return tr.coeff(0);
}

namespace {

// 4 x 4 coefficient kernels of the exchange matrices in the tensor basis
// (00, 01, 10, 11) x (00, 01, 10, 11), as functions of u = q^nu.
Kernel r_entry(int i, int j) {
  const Kernel phi = Kernel::res_part(RatQ(mpq_class(1, 2)));
  if (i == j) {
    if (i == 0 || i == 3) return phi;
    return -phi;
  }
  if (i == 1 && j == 2) return Kernel::delta(0);
  return Kernel();
}

Kernel rminus_entry(int i, int j) {
  const Kernel ht = Kernel::phi_tilde() * RatQ(mpq_class(1, 2));
  if (i == j) {
    if (i == 0 || i == 3) return ht;
    return -ht;
  }
  if (i == 1 && j == 2) return Kernel::delta(0);
  if (i == 2 && j == 1) return Kernel::delta(0, RatQ(-1));
  return Kernel();
}

int swap_leg(int i) {
  static const int s[] = {0, 2, 1, 3};
  return s[i];
}

struct RllPiece {
  Kernel k;
  LoopGen zgen, wgen;
};

LoopGen entry_gen(int r, int c) {
  static const LoopGen g[2][2] = {{LoopGen::a, LoopGen::b},
                                  {LoopGen::c, LoopGen::d}};
  return g[r][c];
}

}  // namespace

RatQ rll_bracket_eval(int i, int j, int al, int be, int mz, int mw,
                      const LoopPoint& pt) {
  const RatQ half(mpq_class(1, 2));
  std::vector<RllPiece> pieces;
  auto add = [&pieces](Kernel k, LoopGen zg, LoopGen wg) {
    if (!k.is_zero()) pieces.push_back({std::move(k), zg, wg});
  };
  for (int k = 0; k < 2; ++k) {
    for (int g = 0; g < 2; ++g) {
      // (1/2) r^- L1 L2 and (1/2) L1 L2 r^-.
      add(rminus_entry(2 * i + al, 2 * k + g) * half, entry_gen(k, j),
          entry_gen(g, be));
      add(rminus_entry(2 * k + g, 2 * j + be) * half, entry_gen(i, k),
          entry_gen(al, g));
      // - L1 r(w q / z) L2: the shift multiplies the coefficient at nu
      // by q^nu.
      add(-(r_entry(2 * k + al, 2 * j + g).mul_u_pow(1)), entry_gen(i, k),
          entry_gen(g, be));
      // + L2 sigma(r)(z q / w) L1: leg swap, then the coefficient at
      // (w/z)^nu is the swapped kernel at -nu times q^{-nu}.
      add(r_entry(swap_leg(2 * i + g), swap_leg(2 * k + be))
              .subst_inv()
              .mul_u_pow(-1),
          entry_gen(k, j), entry_gen(al, g));
    }
  }
  RatQ acc(0);
  for (const auto& piece : pieces) {
    const LaurentPoly& zser = pt.series(piece.zgen);
    const LaurentPoly& wser = pt.series(piece.wgen);
    if (zser.is_zero() || wser.is_zero()) continue;
    for (int nu = mz + zser.min_exp(); nu <= mz + zser.max_exp(); ++nu) {
      RatQ zc = zser.mode_coeff(mz - nu);
      if (zc.is_zero()) continue;
      RatQ wc = wser.mode_coeff(mw + nu);
      if (wc.is_zero()) continue;
      acc += piece.k.eval_at_qpow(nu) * zc * wc;
    }
  }
  return acc;
}

NormalForm reduced_tilde_bracket(const BracketTable& table) {
  ProductSum tw = tilde_t_encoding();
  return normalize(sub_b(sub_c(bracket_products(table, tw, tw))));
}

namespace {

TermList quadratic_rule_terms(const ProductSum& comps) {
  const Kernel pt = Kernel::phi_tilde();
  TermList out;
  for (const auto& [ci, pi] : comps) {
    for (const auto& [cj, pj] : comps) {
      out.push_back({pt * (ci * cj), pi, pj});
    }
  }
  return out;
}

void append_central_column(TermList& terms) {
  terms.push_back({Kernel::delta(1), {}, {}});
  terms.push_back({Kernel::delta(-1, RatQ(-1)), {}, {}});
}

}  // namespace

NormalForm reduced_rule_expected() {
  TermList terms = quadratic_rule_terms(reduced_t_encoding());
  append_central_column(terms);
  return normalize(terms);
}

NormalForm constraint_pair_bracket(const BracketTable& table) {
  return normalize(
      sub_b(sub_c(bracket_products(table, tilde_t_encoding(), c_encoding()))));
}

RatQ reduced_rule_value(const LaurentPoly& image, int n, int m) {
  RatQ acc(0);
  if (!image.is_zero()) {
    const Kernel pt = Kernel::phi_tilde();
    for (int nu = n + image.min_exp(); nu <= n + image.max_exp(); ++nu) {
      RatQ zc = image.mode_coeff(n - nu);
      if (zc.is_zero()) continue;
      RatQ wc = image.mode_coeff(m + nu);
      if (wc.is_zero()) continue;
      acc += pt.eval_at_qpow(nu) * zc * wc;
    }
  }
  if (n + m == 0) acc += RatQ::q_power(n) - RatQ::q_power(-n);
  return acc;
}

bool miura_kernel_identity() {
  BracketTable table = BracketTable::reference();  // unused by l-l atoms
  ProductSum img = miura_image_encoding();
  NormalForm lhs = normalize(bracket_products(table, img, img));
  TermList expected = quadratic_rule_terms(img);
  append_central_column(expected);
  return lhs == normalize(expected);
}

bool miura_point_check(int j, const RatQ& c, int window) {
  if (c.is_zero()) throw Error("free-field point must be invertible");
  LaurentPoly lam = LaurentPoly::monomial(c, -j);
  LaurentPoly image = lam.invert() + lam.shift(1);
  const Kernel pt = Kernel::phi_tilde();
  RatQ c2 = c * c;
  RatQ cinv2 = RatQ(1) / c2;
  for (int n = -window; n <= window; ++n) {
    // dT_n / dLam_p at the monomial point.
    std::map<int, RatQ> dn;
    dn[n + 2 * j] -= cinv2;
    dn[n] += RatQ::q_power(-n);
    for (int m = -window; m <= window; ++m) {
      std::map<int, RatQ> dm;
      dm[m + 2 * j] -= cinv2;
      dm[m] += RatQ::q_power(-m);
      RatQ chain(0);
      for (const auto& [p, cp] : dn) {
        if (cp.is_zero()) continue;
        int r = 2 * j - p;
        auto it = dm.find(r);
        if (it == dm.end() || it->second.is_zero()) continue;
        chain += cp * it->second * pt.eval_at_qpow(p - j) * c2;
      }
      if (chain != reduced_rule_value(image, n, m)) return false;
    }
  }
  return true;
}

namespace {

void check_w_indices(int n, int i, int j) {
  if (n < 2) throw Error("rule family needs n >= 2");
  if (i > j)
    throw Error("entry (i, j) with i > j follows from antisymmetry");
  if (i < 1 || j > n - 1)
    throw Error("density indices must satisfy 1 <= i <= j <= n-1");
}

}  // namespace

RatQ w_phi_coeff(int n, int i, int j, int m) {
  check_w_indices(n, i, j);
  if (m == 0) return RatQ(0);
  RatQ one(1);
  return (one - RatQ::q_power(i * m)) * (one - RatQ::q_power(m * (n - j))) /
         (one - RatQ::q_power(m * n));
}

RatQ w_boundary_phi_first(int n, int m) {
  if (m == 0) return RatQ(0);
  RatQ one(1);
  return (one - RatQ::q_power(m)) * (one - RatQ::q_power(m * (n - 1))) /
         (one - RatQ::q_power(m * n));
}

RatQ w_boundary_phi_second(int n, int m) {
  if (m == 0) return RatQ(0);
  RatQ one(1);
  RatQ d = one - RatQ::q_power(m);
  return -RatQ::q_power((n - 1) * m) * d * d / (one - RatQ::q_power(m * n));
}

WRule w_structure(int n, int i, int j) {
  check_w_indices(n, i, j);
  WRule rule{n, i, j, {}};
  int rmax = std::min(i, n - j);
  for (int r = 1; r <= rmax; ++r) {
    rule.delta_terms.push_back({r, 1, j + r, i - r});
    rule.delta_terms.push_back({-(j - i + r), -1, i - r, j + r});
  }
  return rule;
}

namespace {

// One of the three cyclic contractions, localized by the finite support
// of the point.
RatQ jacobi_cyc(const BracketTable& table, const LoopPoint& pt, int S,
                LoopGen x, int n, LoopGen y, int m, LoopGen z, int k) {
  RatQ acc(0);
  for (const auto& [key, ker] : table.entry(y, z)) {
    const auto [u, v] = key;
    const LaurentPoly& user = pt.series(u);
    const LaurentPoly& vser = pt.series(v);
    // {x_n, u_{m-nu}} v_{k+nu}: the bracket needs |n + m - nu| <= 2S, the
    // point mode needs |k + nu| <= S.
    if (!vser.is_zero()) {
      int lo = std::max(-S - k, n + m - 2 * S);
      int hi = std::min(S - k, n + m + 2 * S);
      for (int nu = lo; nu <= hi; ++nu) {
        RatQ vv = vser.mode_coeff(k + nu);
        if (vv.is_zero()) continue;
        RatQ bv = bracket_eval(table, x, n, u, m - nu, pt);
        if (bv.is_zero()) continue;
        acc += ker.eval_at_qpow(nu) * bv * vv;
      }
    }
    // u_{m-nu} {x_n, v_{k+nu}}.
    if (!user.is_zero()) {
      int lo = std::max(m - S, -2 * S - n - k);
      int hi = std::min(m + S, 2 * S - n - k);
      for (int nu = lo; nu <= hi; ++nu) {
        RatQ uu = user.mode_coeff(m - nu);
        if (uu.is_zero()) continue;
        RatQ bv = bracket_eval(table, x, n, v, k + nu, pt);
        if (bv.is_zero()) continue;
        acc += ker.eval_at_qpow(nu) * uu * bv;
      }
    }
  }
  return acc;
}

}  // namespace

RatQ jacobi_sample(const BracketTable& table, const LoopPoint& pt,
                   LoopGen x, int n, LoopGen y, int m, LoopGen z, int k) {
  int S = pt.support_radius();
  return jacobi_cyc(table, pt, S, x, n, y, m, z, k) +
         jacobi_cyc(table, pt, S, y, m, z, k, x, n) +
         jacobi_cyc(table, pt, S, z, k, x, n, y, m);
}

}  // namespace qdsr
