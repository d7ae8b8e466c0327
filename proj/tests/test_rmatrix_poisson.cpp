#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdsr/rmatrix.hpp"

using namespace qdsr;

namespace {

RatQ half() { return RatQ(1) / RatQ(2); }

Kernel random_kernel(Rng& rng, bool allow_res) {
  Kernel k;
  int terms = 1 + static_cast<int>(rng.below(3));
  for (int t = 0; t < terms; ++t) {
    int a = static_cast<int>(rng.range(-3, 3));
    k += Kernel::delta(a, RatQ(rng.nonzero(3)));
  }
  if (allow_res && (rng.next() & 1))
    k += Kernel::res_part(RatQ(rng.nonzero(2)));
  return k;
}

LoopGen entry_gen(int r, int c) {
  static const LoopGen g[2][2] = {{LoopGen::a, LoopGen::b},
                                  {LoopGen::c, LoopGen::d}};
  return g[r][c];
}

using Mat2 = std::array<std::array<LaurentPoly, 2>, 2>;

Mat2 point_matrix(const LoopPoint& pt) {
  return {{{pt.a, pt.b}, {pt.c, pt.d}}};
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i][j] += x[i][k] * y[k][j];
  return out;
}

// sl2 basis elements times s^k.
Mat2 basis_matrix(int which, int k) {
  LaurentPoly sk = LaurentPoly::monomial(RatQ(1), k);
  Mat2 m;
  switch (which) {
    case 0: m[0][1] = sk; break;            // E
    case 1: m[0][0] = sk; m[1][1] = -sk; break;  // H
    default: m[1][0] = sk; break;           // F
  }
  return m;
}

}  // namespace

TEST_CASE("kernel canonical form") {
  Kernel pt = Kernel::phi_tilde();
  CHECK(pt.residue() == RatQ(2));
  REQUIRE(pt.laurent().size() == 1);
  CHECK(pt.laurent().at(0) == RatQ(-1));

  for (int nu = -4; nu <= 4; ++nu) {
    RatQ u = RatQ::q_power(nu);
    CHECK(pt.eval_at_qpow(nu) == (RatQ(1) - u) / (RatQ(1) + u));
    CHECK(Kernel::res_part(RatQ(1)).eval_at_qpow(nu) ==
          RatQ(1) / (RatQ(1) + u));
    CHECK(Kernel::delta(2, RatQ(3)).eval_at_qpow(nu) == RatQ(3) * u * u);
  }

  // u^a/(1+u) reductions stay in the canonical span.
  Kernel r = Kernel::res_part(RatQ(1));
  for (int a : {-2, -1, 1, 2}) {
    Kernel moved = r.mul_u_pow(a);
    for (int nu = -3; nu <= 3; ++nu) {
      RatQ u = RatQ::q_power(nu);
      CHECK(moved.eval_at_qpow(nu) == u.pow(a) / (RatQ(1) + u));
    }
  }

  CHECK(Kernel::delta(1, RatQ(2)) * Kernel::delta(-3, half()) ==
        Kernel::delta(-2, RatQ(1)));
  CHECK_THROWS_AS(r * r, Error);
  CHECK_NOTHROW(r * Kernel::delta(2));
}

TEST_CASE("kernel substitution and reflection") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    Kernel k = random_kernel(rng, true);
    Kernel inv = k.subst_inv();
    int p = static_cast<int>(rng.range(-3, 3));
    Kernel moved = k.mul_u_pow(p);
    for (int nu = -3; nu <= 3; ++nu) {
      CHECK(inv.eval_at_qpow(nu) == k.eval_at_qpow(-nu));
      CHECK(moved.eval_at_qpow(nu) ==
            k.eval_at_qpow(nu) * RatQ::q_power(p * nu));
    }
    CHECK(k.subst_inv().subst_inv() == k);
    CHECK(Kernel::from_phi_view(k.phi_view()) == k);
  }
  // The odd first-class kernel is fixed by reflection.
  CHECK(Kernel::phi_tilde().reflect() == Kernel::phi_tilde());
  // Its phi-view is pure phi with no delta column.
  auto view = Kernel::phi_tilde().phi_view();
  CHECK(view.phi == RatQ(1));
  CHECK(view.delta.empty());
}

TEST_CASE("first-class weight solver") {
  RMatrixSpec spec = RMatrixSpec::first_class();
  auto phi = solve_first_class_loop(8);
  for (int m = -8; m <= 8; ++m) {
    CHECK(phi.at(m) == RatQ(1) / (RatQ(1) + RatQ::q_power(m)));
    CHECK(phi.at(m) == spec.phi_coeff(m));
    CHECK(phi.at(m) + phi.at(-m) == RatQ(1));
    CHECK(spec.kernel().eval_at_qpow(m) == phi.at(m));
    CHECK(constraint_bracket_coefficient(spec, m) == RatQ(0));
  }

  RMatrixSpec r0 = RMatrixSpec::standard_r0();
  CHECK(!r0.has_rational_kernel());
  CHECK_THROWS_AS(r0.kernel(), Error);
  CHECK(constraint_bracket_coefficient(r0, 1) ==
        (RatQ(1) + RatQ::q()) * half());
  CHECK(constraint_bracket_coefficient(r0, 0) == RatQ(0));
}

TEST_CASE("derived rule matches the reference table") {
  BracketTable derived = derive_bracket_rule(RMatrixSpec::first_class());
  BracketTable ref = BracketTable::reference();
  CHECK(derived.rule_equal(ref));
  CHECK(ref.rule_equal(derived));

  // Reference spot entries.
  auto key = [](LoopGen x, LoopGen y) { return std::make_pair(x, y); };
  CHECK(ref.entry(LoopGen::a, LoopGen::a) ==
        BracketTable::Entry{{key(LoopGen::a, LoopGen::a), Kernel::phi_tilde()}});
  CHECK(ref.entry(LoopGen::b, LoopGen::b).empty());
  CHECK(ref.entry(LoopGen::c, LoopGen::c).empty());
  CHECK(ref.entry(LoopGen::b, LoopGen::c) ==
        BracketTable::Entry{{key(LoopGen::a, LoopGen::d), Kernel::delta(0)},
                            {key(LoopGen::a, LoopGen::a), Kernel::delta(1, RatQ(-1))}});
  CHECK(ref.entry(LoopGen::c, LoopGen::d) ==
        BracketTable::Entry{{key(LoopGen::a, LoopGen::c), Kernel::delta(-1)}});
  // Transposed half follows from antisymmetry: legs swapped, kernel
  // reflected.
  CHECK(ref.entry(LoopGen::c, LoopGen::b) ==
        BracketTable::Entry{{key(LoopGen::d, LoopGen::a), Kernel::delta(0, RatQ(-1))},
                            {key(LoopGen::a, LoopGen::a), Kernel::delta(-1)}});
}

TEST_CASE("mode values at a simple point") {
  // a(s) = 1 + s has a_0 = a_{-1} = 1 and nothing else.
  LoopPoint pt;
  pt.a = LaurentPoly(1) + LaurentPoly::s();
  BracketTable ref = BracketTable::reference();
  RatQ expect = (RatQ(1) - RatQ::q()) / (RatQ(1) + RatQ::q());
  CHECK(bracket_eval(ref, LoopGen::a, 0, LoopGen::a, -1, pt) == expect);
  CHECK(bracket_eval(ref, LoopGen::a, -1, LoopGen::a, 0, pt) == -expect);
  CHECK(bracket_eval(ref, LoopGen::a, 0, LoopGen::a, 0, pt) == RatQ(0));
}

TEST_CASE("central column evaluates to q^n - q^-n on shell") {
  TermList central;
  central.push_back({Kernel::delta(1), {}, {}});
  central.push_back({Kernel::delta(-1, RatQ(-1)), {}, {}});
  LoopPoint pt;  // unused by factorless terms
  for (int n = -3; n <= 3; ++n) {
    for (int m = -3; m <= 3; ++m) {
      RatQ expect = n + m == 0 ? RatQ::q_power(n) - RatQ::q_power(-n) : RatQ(0);
      CHECK(bracket_eval_terms(central, n, m, pt) == expect);
    }
  }
}

TEST_CASE("dilated factors carry mode weights") {
  BracketTable ref = BracketTable::reference();
  Rng rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    LoopGen x = static_cast<LoopGen>(rng.below(4));
    LoopGen y = static_cast<LoopGen>(rng.below(4));
    int s1 = static_cast<int>(rng.range(-2, 2));
    int s2 = static_cast<int>(rng.range(-2, 2));
    int n = static_cast<int>(rng.range(-3, 3));
    int m = static_cast<int>(rng.range(-3, 3));
    TermList dressed = atom_terms(ref, LoopFactor{x, s1}, LoopFactor{y, s2});
    RatQ lhs = bracket_eval_terms(dressed, n, m, pt);
    RatQ rhs = RatQ::q_power(s1 * n) * RatQ::q_power(s2 * m) *
               bracket_eval(ref, x, n, y, m, pt);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("product rule against mode convolution") {
  BracketTable ref = BracketTable::reference();
  Rng rng(303);
  for (int trial = 0; trial < 12; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    LoopGen f = static_cast<LoopGen>(rng.below(4));
    LoopGen g = static_cast<LoopGen>(rng.below(4));
    LoopGen h = static_cast<LoopGen>(rng.below(4));
    int n = static_cast<int>(rng.range(-2, 2));
    int m = static_cast<int>(rng.range(-2, 2));

    FactorProd prod = fmul(fmul({}, LoopFactor{f, 0}), LoopFactor{g, 0});
    TermList terms = leibniz(ref, prod, {{LoopFactor{h, 0}, 1}});
    RatQ lhs = bracket_eval_terms(terms, n, m, pt);

    // {(f g)_n, h_m} = sum_j f_j {g_{n-j}, h_m} + {f_{n-j}, h_m} g_j.
    RatQ rhs(0);
    const LaurentPoly& fs = pt.series(f);
    const LaurentPoly& gs = pt.series(g);
    if (!fs.is_zero()) {
      for (int e = fs.min_exp(); e <= fs.max_exp(); ++e) {
        RatQ cf = fs.coeff(e);
        if (!cf.is_zero())
          rhs += cf * bracket_eval(ref, g, n + e, h, m, pt);
      }
    }
    if (!gs.is_zero()) {
      for (int e = gs.min_exp(); e <= gs.max_exp(); ++e) {
        RatQ cg = gs.coeff(e);
        if (!cg.is_zero())
          rhs += cg * bracket_eval(ref, f, n + e, h, m, pt);
      }
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("matrix-form oracle agrees with the table rule") {
  BracketTable derived = derive_bracket_rule(RMatrixSpec::first_class());
  BracketTable ref = BracketTable::reference();
  Rng rng(404);
  for (int trial = 0; trial < 6; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int al = 0; al < 2; ++al)
          for (int be = 0; be < 2; ++be)
            for (int mz = -1; mz <= 1; ++mz)
              for (int mw = -1; mw <= 1; ++mw) {
                RatQ oracle = rll_bracket_eval(i, j, al, be, mz, mw, pt);
                LoopGen x = entry_gen(i, j);
                LoopGen y = entry_gen(al, be);
                CHECK(bracket_eval(ref, x, mz, y, mw, pt) == oracle);
                CHECK(bracket_eval(derived, x, mz, y, mw, pt) == oracle);
              }
  }
}

TEST_CASE("bracket values are antisymmetric") {
  BracketTable ref = BracketTable::reference();
  Rng rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    LoopGen x = static_cast<LoopGen>(rng.below(4));
    LoopGen y = static_cast<LoopGen>(rng.below(4));
    int n = static_cast<int>(rng.range(-3, 3));
    int m = static_cast<int>(rng.range(-3, 3));
    CHECK(bracket_eval(ref, x, n, y, m, pt) ==
          -bracket_eval(ref, y, m, x, n, pt));
  }
}

TEST_CASE("gradients match multiplicative perturbations") {
  Rng rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    Mat2 M = point_matrix(pt);
    for (int which = 0; which < 3; ++which) {
      for (int k = -2; k <= 2; ++k) {
        Mat2 X = basis_matrix(which, k);
        Mat2 dleft = mat_mul(X, M);
        Mat2 dright = mat_mul(M, X);
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            LoopGen x = entry_gen(r, c);
            for (int m = -2; m <= 2; ++m) {
              CHECK(trace_pairing(gradient_at_point(x, m, GradientSide::left, pt), X) ==
                    dleft[r][c].mode_coeff(m));
              CHECK(trace_pairing(gradient_at_point(x, m, GradientSide::right, pt), X) ==
                    dright[r][c].mode_coeff(m));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("reduced coordinate closes on the odd kernel with center") {
  BracketTable ref = BracketTable::reference();
  BracketTable derived = derive_bracket_rule(RMatrixSpec::first_class());
  NormalForm expected = reduced_rule_expected();
  CHECK(reduced_tilde_bracket(ref) == expected);
  CHECK(reduced_tilde_bracket(derived) == expected);
  CHECK(constraint_pair_bracket(ref).is_zero());
  CHECK(constraint_pair_bracket(derived).is_zero());
  CHECK(!expected.is_zero());
}

TEST_CASE("reduced rule worked value") {
  // Free-field image of l = s^{-1}: T(s) = s + q^{-1} s^{-1}.
  LaurentPoly lam = LaurentPoly::monomial(RatQ(1), -1);
  LaurentPoly image = lam.invert() + lam.shift(1);
  CHECK(image.mode_coeff(-1) == RatQ(1));
  CHECK(image.mode_coeff(1) == RatQ::q_power(-1));
  RatQ q = RatQ::q();
  CHECK(reduced_rule_value(image, 1, -1) ==
        (q * q * q - q) / (RatQ(1) + q * q));
  CHECK(reduced_rule_value(image, -1, 1) ==
        -(q * q * q - q) / (RatQ(1) + q * q));
  // Off shell and with no matching modes the value drops to the central
  // column alone, which vanishes off shell.
  CHECK(reduced_rule_value(image, 2, -1) == RatQ(0));
  CHECK(reduced_rule_value(LaurentPoly(), 2, -2) ==
        RatQ::q_power(2) - RatQ::q_power(-2));
}

TEST_CASE("factorization identity at the kernel level") {
  CHECK(miura_kernel_identity());
}

TEST_CASE("factorization checks at monomial points") {
  for (int j = -2; j <= 2; ++j) {
    CHECK(miura_point_check(j, RatQ(1), 3));
    CHECK(miura_point_check(j, RatQ(2), 3));
    CHECK(miura_point_check(j, RatQ(1) + RatQ::q(), 3));
  }
  CHECK_THROWS_AS(miura_point_check(0, RatQ(0), 1), Error);
}

TEST_CASE("higher-rule coefficients") {
  RatQ one(1);
  for (int m = -16; m <= 16; ++m) {
    if (m == 0) {
      CHECK(w_phi_coeff(2, 1, 1, 0) == RatQ(0));
      continue;
    }
    RatQ expect = (one - RatQ::q_power(m)) / (one + RatQ::q_power(m));
    CHECK(w_phi_coeff(2, 1, 1, m) == expect);
    CHECK(w_boundary_phi_first(2, m) == expect);
    CHECK(w_boundary_phi_second(2, m) ==
          -RatQ::q_power(m) * (one - RatQ::q_power(m)) /
              (one + RatQ::q_power(m)));
  }
  for (int n : {3, 4, 5}) {
    for (int m = -6; m <= 6; ++m) {
      CHECK(w_boundary_phi_first(n, m) == w_phi_coeff(n, 1, 1, m));
      // Diagonal entries carry odd kernels.
      for (int i = 1; i <= n - 1; ++i)
        CHECK(w_phi_coeff(n, i, i, -m) == -w_phi_coeff(n, i, i, m));
    }
  }

  WRule r22 = w_structure(2, 1, 1);
  REQUIRE(r22.delta_terms.size() == 2);
  CHECK(r22.delta_terms[0].power == 1);
  CHECK(r22.delta_terms[0].sign == 1);
  CHECK(r22.delta_terms[0].left_index == 2);
  CHECK(r22.delta_terms[0].right_index == 0);
  CHECK(r22.delta_terms[1].power == -1);
  CHECK(r22.delta_terms[1].sign == -1);
  CHECK(r22.delta_terms[1].left_index == 0);
  CHECK(r22.delta_terms[1].right_index == 2);

  WRule r312 = w_structure(3, 1, 2);
  REQUIRE(r312.delta_terms.size() == 2);
  CHECK(r312.delta_terms[0].power == 1);
  CHECK(r312.delta_terms[0].left_index == 3);
  CHECK(r312.delta_terms[0].right_index == 0);
  CHECK(r312.delta_terms[1].power == -2);
  CHECK(r312.delta_terms[1].sign == -1);

  CHECK_THROWS_AS(w_structure(3, 2, 1), Error);
  CHECK_THROWS_AS(w_structure(3, 0, 2), Error);
  CHECK_THROWS_AS(w_structure(3, 1, 3), Error);
  CHECK_THROWS_AS(w_phi_coeff(3, 2, 1, 1), Error);
}

TEST_CASE("jacobi samples vanish") {
  BracketTable ref = BracketTable::reference();
  Rng rng(707);
  for (int trial = 0; trial < 12; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    LoopGen x = static_cast<LoopGen>(rng.below(4));
    LoopGen y = static_cast<LoopGen>(rng.below(4));
    LoopGen z = static_cast<LoopGen>(rng.below(4));
    int n = static_cast<int>(rng.range(-2, 2));
    int m = static_cast<int>(rng.range(-2, 2));
    int k = static_cast<int>(rng.range(-2, 2));
    CHECK(jacobi_sample(ref, pt, x, n, y, m, z, k) == RatQ(0));
  }
}

TEST_CASE("random points have unit determinant") {
  Rng rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    LoopPoint pt = LoopPoint::random_unit(rng);
    CHECK(pt.a * pt.d - pt.b * pt.c == LaurentPoly(1));
    CHECK(pt.support_radius() <= 4);
  }
}
