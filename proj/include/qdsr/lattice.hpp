#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qdsr/lattice_poly.hpp"
#include "qdsr/rng.hpp"

namespace qdsr {

// ---- cyclic weight system ----

// Solves the cyclic closure system phi_{k-1} + 2 phi_k + phi_{k+1} =
// 2 delta_{k,0} + 2 delta_{(k+1) mod N, 0} together with the normalization
// phi_0 = 1, by exact elimination. Returns phi_0 .. phi_{N-1}; throws if
// the combined system were singular or inconsistent.
std::vector<mpq_class> solve_lattice_phi(int N);

// Closed form on representatives {0 .. N-1}: (-1)^k for odd N,
// (-1)^k (1 - 2k/N) for even N.
mpq_class lattice_phi_closed_form(int N, int k);

// Both defining invariants of a weight vector: the pairing
// phi_k + phi_{(N-k) mod N} = 2 delta_{k,0} and the closure recurrence.
bool lattice_phi_invariants(const std::vector<mpq_class>& phi);

// Antisymmetrized weight (phi_k - phi_{-k}) / 2 with cyclic indices.
mpq_class lattice_phihat(const std::vector<mpq_class>& phi, int k);

// ---- exchange tensor and its Yang-Baxter residual ----

// Residual of [r12, r13] + [r12, r23] + [r13, r23] for the tensor
// r = sum_j E_j x F_j + 1/4 sum_{j,l} phi_{j-l} H_j x H_l on N sites.
// Basis indices are site*3 + {0:E, 1:H, 2:F}; keys of the result are the
// basis triples with nonzero coefficient, so an empty map means the
// equation holds. Throws when N exceeds the size bound.
std::map<std::array<int, 3>, mpq_class> cybe_residual(
    int N, const std::vector<mpq_class>& phi, int bound = 7);

// Whether the tensor is invariant under the simultaneous site shift
// (it depends on site differences only).
bool lattice_r_shift_invariant(int N, const std::vector<mpq_class>& phi);

// ---- generator bracket tables ----

// twisted: the shifted structure the chain reduction lives on.
// sklyanin: the unshifted difference structure carried by the gauge group.
enum class LatticeFamily { twisted, sklyanin };

// Quadratic bracket table over the matrix-entry coordinates of N sites.
// base selects the variable namespace: GenKind::a for the chain copy,
// GenKind::ha for the gauge copy used in the covariance oracle.
class LatticeTable {
 public:
  static LatticeTable build(int N, LatticeFamily fam,
                            GenKind base = GenKind::a);

  int sites() const { return N_; }
  LatticeFamily family() const { return fam_; }
  GenKind base() const { return base_; }
  // {x_n, y_m}; both generators must lie in this table's namespace.
  const LatticePolynomial& entry(GenId x, GenId y) const;

 private:
  LatticeTable() = default;
  int N_ = 0;
  LatticeFamily fam_ = LatticeFamily::twisted;
  GenKind base_ = GenKind::a;
  std::map<std::pair<GenId, GenId>, LatticePolynomial> entries_;
};

// Generator pair rule for derivation-expanded brackets.
using PairRule = std::function<LatticePolynomial(GenId, GenId)>;

PairRule table_rule(const LatticeTable& table);
// Chain table on a..d plus gauge table on ha..hd with zero cross brackets.
PairRule merged_rule(const LatticeTable& chain, const LatticeTable& gauge);
// Free-field rule {lam_n, lam_m} = phihat_{n-m} lam_n lam_m.
PairRule free_field_rule(int N);
// Closed reduced rule on the t generators:
// {t_n, t_m} = phihat_{n-m} t_n t_m + delta_{n,m+1} - delta_{n+1,m}.
PairRule reduced_t_rule(int N);
// Closed rule on the nu generators:
// {nu_n, nu_m} = (delta_{n+1,m} - delta_{n,m+1}) nu_n nu_m.
PairRule nu_product_rule(int N);

// {f, g} = sum_{x,y} (df/dx)(dg/dy) rule(x, y).
LatticePolynomial poisson_bracket(const LatticePolynomial& f,
                                  const LatticePolynomial& g,
                                  const PairRule& rule);
RationalExpr poisson_bracket(const RationalExpr& f, const RationalExpr& g,
                             const PairRule& rule);

// All site indices advanced by delta mod N.
LatticePolynomial rotate_sites(const LatticePolynomial& p, int N, int delta);

// ---- chain reduction ----

// The gauge invariant t~_n = a_n c_{n+1} + d_{n+1} c_n.
LatticePolynomial lattice_tilde_t(int N, int n);

// The closed reduced table materialized on the t generators.
std::map<std::pair<int, int>, LatticePolynomial> reduced_lattice_table(int N);

struct LatticeReduction {
  bool invariant_rule_ok;   // {t~_n, t~_m} closed form modulo the det relation
  bool constraint_pair_ok;  // {t~_n, c_m} = 0 modulo the det relation
  bool constraint_ok;       // {c_n, c_m} = 0 identically
  bool reduced_rule_ok;     // constrained bracket equals the closed t-rule
  std::map<std::pair<int, int>, LatticePolynomial> table;
};
// Full symbolic reduction for odd N >= 3; throws on even N.
LatticeReduction reduce_discrete_virasoro(int N);

struct LatticeMiura {
  bool ok;  // chain rule from the free-field rule reproduces the t-rule
  std::map<std::pair<int, int>, LatticePolynomial> table;
};
// t_n = lam_n + lam_{n+1}^{-1} pushes the free-field rule to the reduced
// rule; odd N >= 3.
LatticeMiura discrete_miura_check(int N);

// Free-field expressions of the reduced and intermediate variables.
RationalExpr lattice_lam_t(int N, int n);   // lam_n + lam_{n+1}^{-1}
RationalExpr lattice_lam_nu(int N, int n);  // lam_n lam_{n+1}

struct FtvChain {
  bool pair_rule_ok;   // {t2_n, t2_m} closed form including the tail terms
  bool variable_ok;    // t_n t_{n+1} = (1 + nu_n)(1 + nu_{n+1}^{-1})
  bool via_t_ok;       // closed local rule from the reduced-rule route
  bool via_nu_ok;      // closed local rule from the nu-product route
};
// The local variable chain s_n = 1/(t_n t_{n+1}); odd N >= 5 only.
FtvChain ftv_chain(int N);

// ---- root-of-unity regularization ----

// (1/N) sum_i ((1 - eps^i)/(1 + eps^i)) eps^{k i} with eps = exp(2 pi i/N).
// Odd N only (even N hits the pole at -1). Matches the antisymmetrized
// weight at index -k to floating accuracy.
std::complex<double> root_unity_phi(int N, int k);

// ---- sampled oracles ----

// Unit-determinant rational values for the four kinds starting at base,
// every site: (a, b, c, (1 + b c)/a) with small random entries.
std::map<GenId, mpq_class> random_unit_sites(int N, GenKind base, Rng& rng);

// {x, {y, z}} + cyclic for coordinate generators under the table rule.
LatticePolynomial lattice_jacobi_poly(const LatticeTable& table, GenId x,
                                      GenId y, GenId z);
mpq_class lattice_jacobi_sample(const LatticeTable& table, GenId x, GenId y,
                                GenId z,
                                const std::function<mpq_class(GenId)>& point);

// Poisson-map property of the dressing action m(h, x)_i =
// h_{i+shift} x_i h_i^{-1}: the pulled-back bracket of the product
// structure (gauge factor with the plain table, chain factor with the
// twisted table) equals the twisted bracket of the image, evaluated at
// random unit-determinant points.
bool check_gauge_covariance(int N, int shift, int points, Rng& rng);

}  // namespace qdsr
