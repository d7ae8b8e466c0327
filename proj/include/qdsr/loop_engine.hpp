#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdsr/kernel.hpp"

namespace qdsr {

// Generators of the loop-matrix coordinate ring (the four entry series)
// plus the invertible free-field series used by the factorization map.
enum class LoopGen : int { a, b, c, d, l };

char loop_gen_name(LoopGen g);

// A dilated generator series: shift sigma means the series g(s q^{-sigma}),
// so its n-th mode carries the weight q^{sigma n} relative to g_n.
struct LoopFactor {
  LoopGen gen;
  int shift;
  auto operator<=>(const LoopFactor&) const = default;
};

// Sorted product of factor powers; exponents are nonzero and may be
// negative (the free field is invertible).
using FactorProd = std::vector<std::pair<LoopFactor, int>>;

FactorProd fmul(const FactorProd& facs, LoopFactor f, int exp = 1);
FactorProd fjoin(const FactorProd& f1, const FactorProd& f2);
std::string factor_prod_to_string(const FactorProd& facs);

// One bilinear term of a bracket value: kernel times a product attached to
// the first slot (z) and a product attached to the second slot (w).
struct BracketTerm {
  Kernel k;
  FactorProd z, w;
};

using TermList = std::vector<BracketTerm>;

// Formal sum of coefficient * factor-product, the argument format for
// bracketing composite expressions.
using ProductSum = std::vector<std::pair<RatQ, FactorProd>>;

// Bracket rule for the four generator series: for each ordered generator
// pair, a kernel-weighted list of output generator pairs. Entries are
// patterns at shift 0; the atom map dresses them with the input shifts.
class BracketTable {
 public:
  using Entry = std::map<std::pair<LoopGen, LoopGen>, Kernel>;

  // Structure-derived table: graded channel assembly over the two Borel
  // gradients with twist kernel u and the given first-class kernel phi
  // (the full phi, e.g. 1/(1+u); the channels take half of it).
  static BracketTable assemble(const Kernel& phi);
  // Reference table entered literally, with the transposed half filled in
  // through antisymmetry.
  static BracketTable reference();

  const Entry& entry(LoopGen x, LoopGen y) const;
  // Equality of the rules as normalized bilinear expressions (entries may
  // differ superficially and still define the same bracket).
  bool rule_equal(const BracketTable& o) const;

 private:
  std::map<std::pair<LoopGen, LoopGen>, Entry> entries_;
};

// A table entry as a term list (patterns at shift 0).
TermList rule_terms(const BracketTable& table, LoopGen x, LoopGen y);

// Bracket of two dressed factors. Free-field pairs (l, l) use the fixed
// phi-tilde kernel; pairs mixing l with matrix entries are rejected.
TermList atom_terms(const BracketTable& table, LoopFactor x, LoopFactor y);

// Bracket of two factor products via the product rule; exponents enter as
// multiplicative derivative weights.
TermList leibniz(const BracketTable& table, const FactorProd& zprod,
                 const FactorProd& wprod);

// Bracket of two formal sums of products.
TermList bracket_products(const BracketTable& table, const ProductSum& zsum,
                          const ProductSum& wsum);

// Normal form of a term list: the 1/(1+u) parts keyed by untouched
// (z, w) products, and each Laurent kernel monomial u^a keyed by the joint
// product after the z side is rebased to the w slot at z = q^a w.
struct NormalForm {
  std::map<std::pair<FactorProd, FactorProd>, RatQ> res;
  std::map<std::pair<int, FactorProd>, RatQ> delta;

  bool is_zero() const { return res.empty() && delta.empty(); }
  bool operator==(const NormalForm& o) const {
    return res == o.res && delta == o.delta;
  }
};

NormalForm normalize(const TermList& terms);

// Constraint substitutions for the reduction to the canonical slice:
// sub_c sets the lower-left entry to the constant -1, sub_b eliminates b
// through the unit-determinant relation b = 1 - a d (valid after sub_c).
TermList sub_c(const TermList& terms);
TermList sub_b(const TermList& terms);

// The invariant product a(s) c(sq) + d(sq) c(s) of the canonicalization.
ProductSum tilde_t_encoding();
// The single constraint generator c(s).
ProductSum c_encoding();
// The reduced canonical coordinate a(s) + d(sq).
ProductSum reduced_t_encoding();
// The factorization image l(s)^{-1} + l(sq).
ProductSum miura_image_encoding();

}  // namespace qdsr
