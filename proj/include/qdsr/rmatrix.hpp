#pragma once

#include <array>
#include <map>
#include <vector>

#include "qdsr/laurent.hpp"
#include "qdsr/loop_engine.hpp"
#include "qdsr/rng.hpp"

namespace qdsr {

// Coefficient profile of a classical r-matrix on the loop algebra: the
// diagonal weights phi_n attached to the Cartan part at loop degree n.
class RMatrixSpec {
 public:
  enum class Family { first_class, standard_r0 };

  static RMatrixSpec first_class() { return RMatrixSpec(Family::first_class); }
  static RMatrixSpec standard_r0() { return RMatrixSpec(Family::standard_r0); }

  Family family() const { return family_; }
  // The weight phi_n.
  RatQ phi_coeff(int n) const;
  // Whether the weights assemble into a rational kernel in u = q^nu.
  bool has_rational_kernel() const;
  // That kernel; throws for profiles without one.
  Kernel kernel() const;

 private:
  explicit RMatrixSpec(Family f) : family_(f) {}
  Family family_;
};

// Solves, degree by degree, the two-equation system expressing that the
// constraint column of the bracket closes (first-class condition) together
// with the normalization phi_m + phi_{-m} = 1. Returns phi_m for |m| <=
// range; throws if any degree system were singular.
std::map<int, RatQ> solve_first_class_loop(int range);

// The coefficient multiplying the constraint in the bracket of two
// constraint modes: (phi_m - phi_{-m} + phi_m q^m - phi_{-m} q^{-m}) / 2.
// Zero exactly when the profile is first class at degree m.
RatQ constraint_bracket_coefficient(const RMatrixSpec& spec, int m);

// Generator bracket table induced by the r-matrix profile (graded channel
// assembly with the twist). Requires a rational kernel.
BracketTable derive_bracket_rule(const RMatrixSpec& spec);

// A finitely supported point of the loop matrix group plus an optional
// invertible free-field value.
struct LoopPoint {
  LaurentPoly a, b, c, d;
  LaurentPoly l;

  const LaurentPoly& series(LoopGen g) const;
  // Largest |exponent| appearing in the four matrix entries.
  int support_radius() const;
  // Unit-determinant point with small integer data: an upper times lower
  // unipotent times a diagonal monomial.
  static LoopPoint random_unit(Rng& rng);
};

// Value of a bilinear term list at modes (n, m) of the two slots.
RatQ bracket_eval_terms(const TermList& terms, int n, int m,
                        const LoopPoint& pt);
// Value of the table rule {x_n, y_m} at a point.
RatQ bracket_eval(const BracketTable& table, LoopGen x, int n, LoopGen y,
                  int m, const LoopPoint& pt);

// Gradient data of the four entry series with respect to the trace form:
// 2 x 2 matrices of generator combinations, carrying an s^m prefactor for
// the m-th mode. side selects the two one-sided gradients.
enum class GradientSide { left, right };
using GradientMatrix = std::array<std::array<std::vector<std::pair<RatQ, LoopGen>>, 2>, 2>;
GradientMatrix loop_gradient(LoopGen x, GradientSide side);

// The gradient evaluated at a point, including the s^m prefactor.
std::array<std::array<LaurentPoly, 2>, 2> gradient_at_point(
    LoopGen x, int m, GradientSide side, const LoopPoint& pt);

// Constant term in s of tr(M1 M2), the invariant pairing.
RatQ trace_pairing(const std::array<std::array<LaurentPoly, 2>, 2>& m1,
                   const std::array<std::array<LaurentPoly, 2>, 2>& m2);

// Independent oracle: the matrix bracket evaluated from its two-row form
// (half-difference of dressed kernels on both sides, minus the twisted
// exchange block). Entry indices i, j, al, be in {0, 1} select
// {L_ij(z)_mz, L_albe(w)_mw}.
RatQ rll_bracket_eval(int i, int j, int al, int be, int mz, int mw,
                      const LoopPoint& pt);

// {t~(z), t~(w)} after the constraint substitutions, normalized.
NormalForm reduced_tilde_bracket(const BracketTable& table);
// The expected reduced rule: odd first-class kernel on the reduced
// coordinate plus the central column q^n - q^{-n} at n + m = 0.
NormalForm reduced_rule_expected();
// {t~(z), c(w)} after the constraint substitutions; vanishes when the
// constraints are first class.
NormalForm constraint_pair_bracket(const BracketTable& table);

// Direct value of the reduced rule at modes (n, m) for a given image
// series: sum_nu phi~(q^nu) T_{n-nu} T_{m+nu} plus the central column.
RatQ reduced_rule_value(const LaurentPoly& image, int n, int m);

// Kernel-level factorization identity: the bracket of the free-field image
// l(s)^{-1} + l(sq) with itself equals the reduced rule on that image.
bool miura_kernel_identity();

// Point-level factorization check at the monomial free field l = c s^{-j}:
// compares the chain-rule pushforward against the direct reduced-rule
// value for all modes |n|, |m| <= window.
bool miura_point_check(int j, const RatQ& c, int window);

// Quadratic-rule coefficient of the higher conserved densities: the
// phi-part of the (i, j) entry at degree m (zero at m = 0) and the two
// boundary closed forms.
RatQ w_phi_coeff(int n, int i, int j, int m);
RatQ w_boundary_phi_first(int n, int m);
RatQ w_boundary_phi_second(int n, int m);

// Delta column of the (i, j) entry: signed shifts with the two partner
// densities and their leg assignment.
struct WDeltaTerm {
  int power;       // kernel u^power
  int sign;        // +1 or -1
  int left_index;  // density index on the z leg
  int right_index; // density index on the w leg
};
struct WRule {
  int n, i, j;
  std::vector<WDeltaTerm> delta_terms;
};
WRule w_structure(int n, int i, int j);

// One sampled Jacobi contraction {x_n, {y_m, z_k}} + cyclic at a point,
// localized through the finite support of the point. Exact; zero iff the
// sample passes.
RatQ jacobi_sample(const BracketTable& table, const LoopPoint& pt,
                   LoopGen x, int n, LoopGen y, int m, LoopGen z, int k);

}  // namespace qdsr
