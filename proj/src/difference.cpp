#include "qdsr/difference.hpp"

#include <algorithm>

namespace qdsr {

const LaurentPoly& RElem::laurent() const {
  if (!is_laurent()) throw Error("ring element is not a Laurent polynomial");
  return std::get<LaurentPoly>(v_);
}

const std::vector<mpq_class>& RElem::sites() const {
  if (is_laurent()) throw Error("ring element is not a site tuple");
  return std::get<std::vector<mpq_class>>(v_);
}

bool RElem::is_zero() const {
  if (is_laurent()) return laurent().is_zero();
  for (const auto& x : sites())
    if (x != 0) return false;
  return true;
}

RElem RElem::operator-() const {
  if (is_laurent()) return RElem(-laurent());
  std::vector<mpq_class> r = sites();
  for (auto& x : r) x = -x;
  return RElem(std::move(r));
}

namespace {

void check_match(const RElem& a, const RElem& b) {
  if (a.is_laurent() != b.is_laurent())
    throw Error("ring element variant mismatch");
  if (!a.is_laurent() && a.sites().size() != b.sites().size())
    throw Error("site tuple length mismatch");
}

}  // namespace

RElem RElem::operator+(const RElem& o) const {
  check_match(*this, o);
  if (is_laurent()) return RElem(laurent() + o.laurent());
  std::vector<mpq_class> r = sites();
  for (size_t i = 0; i < r.size(); ++i) r[i] += o.sites()[i];
  return RElem(std::move(r));
}

RElem RElem::operator-(const RElem& o) const { return *this + (-o); }

RElem RElem::operator*(const RElem& o) const {
  check_match(*this, o);
  if (is_laurent()) return RElem(laurent() * o.laurent());
  std::vector<mpq_class> r = sites();
  for (size_t i = 0; i < r.size(); ++i) r[i] *= o.sites()[i];
  return RElem(std::move(r));
}

bool RElem::operator==(const RElem& o) const {
  check_match(*this, o);
  if (is_laurent()) return laurent() == o.laurent();
  return sites() == o.sites();
}

std::string RElem::to_string() const {
  if (is_laurent()) return laurent().to_string();
  std::string out = "[";
  for (size_t i = 0; i < sites().size(); ++i) {
    if (i) out += ", ";
    out += sites()[i].get_str();
  }
  return out + "]";
}

DifferenceRing DifferenceRing::lattice(int sites) {
  if (sites < 1) throw Error("chain ring needs at least one site");
  return DifferenceRing(Variant::lattice, sites);
}

RElem DifferenceRing::zero() const {
  if (variant_ == Variant::lattice)
    return RElem(std::vector<mpq_class>(sites_, mpq_class(0)));
  return RElem(LaurentPoly());
}

RElem DifferenceRing::one() const {
  if (variant_ == Variant::lattice)
    return RElem(std::vector<mpq_class>(sites_, mpq_class(1)));
  return RElem(LaurentPoly(1));
}

RElem DifferenceRing::minus_one() const { return -one(); }

RElem DifferenceRing::from_rational(const RatQ& c) const {
  if (variant_ == Variant::lattice)
    throw Error("rational-function constants live in the loop rings");
  return RElem(LaurentPoly(c));
}

RElem DifferenceRing::from_laurent(const LaurentPoly& p) const {
  if (variant_ == Variant::lattice)
    throw Error("Laurent elements live in the loop rings");
  return RElem(p);
}

RElem DifferenceRing::from_sites(std::vector<mpq_class> v) const {
  if (variant_ != Variant::lattice)
    throw Error("site tuples live in the chain ring");
  if (static_cast<int>(v.size()) != sites_)
    throw Error("site tuple length mismatch");
  return RElem(std::move(v));
}

RElem DifferenceRing::tau(const RElem& x, int power) const {
  switch (variant_) {
    case Variant::constant:
      return x;
    case Variant::loop:
      return RElem(x.laurent().shift(power));
    case Variant::lattice: {
      const auto& v = x.sites();
      int n = sites_;
      std::vector<mpq_class> r(v.size());
      for (int i = 0; i < n; ++i) {
        int j = ((i + power) % n + n) % n;
        r[i] = v[j];
      }
      return RElem(std::move(r));
    }
  }
  throw Error("unknown ring variant");
}

MatrixOp::MatrixOp(DifferenceRing ring, int n) : ring_(ring), n_(n) {
  if (n < 1) throw Error("matrix size must be positive");
  e_.assign(static_cast<size_t>(n) * n, ring_.zero());
}

MatrixOp MatrixOp::identity(const DifferenceRing& ring, int n) {
  MatrixOp m(ring, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = ring.one();
  return m;
}

MatrixOp MatrixOp::operator+(const MatrixOp& o) const {
  if (n_ != o.n_) throw Error("matrix size mismatch");
  MatrixOp r(*this);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

MatrixOp MatrixOp::operator-(const MatrixOp& o) const {
  if (n_ != o.n_) throw Error("matrix size mismatch");
  MatrixOp r(*this);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

MatrixOp MatrixOp::operator*(const MatrixOp& o) const {
  if (n_ != o.n_) throw Error("matrix size mismatch");
  MatrixOp r(ring_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      RElem acc = ring_.zero();
      for (int k = 0; k < n_; ++k) acc += at(i, k) * o.at(k, j);
      r.at(i, j) = acc;
    }
  }
  return r;
}

bool MatrixOp::operator==(const MatrixOp& o) const {
  return n_ == o.n_ && e_ == o.e_;
}

namespace {

RElem det_rec(const MatrixOp& m, std::vector<int> rows, std::vector<int> cols) {
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  RElem acc = m.ring().zero();
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (size_t k = 0; k < cols.size(); ++k) {
    const RElem& pivot = m.at(rows[0], cols[k]);
    if (pivot.is_zero()) continue;
    std::vector<int> sub_cols;
    for (size_t j = 0; j < cols.size(); ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    RElem minor = det_rec(m, sub_rows, sub_cols);
    RElem term = pivot * minor;
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

RElem MatrixOp::det() const {
  std::vector<int> idx(n_);
  for (int i = 0; i < n_; ++i) idx[i] = i;
  return det_rec(*this, idx, idx);
}

MatrixOp tau_matrix(const MatrixOp& m, int power) {
  MatrixOp r = m;
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) r.at(i, j) = m.ring().tau(m.at(i, j), power);
  return r;
}

bool is_unipotent_upper(const MatrixOp& g) {
  const RElem one = g.ring().one();
  for (int i = 0; i < g.n(); ++i) {
    if (g.at(i, i) != one) return false;
    for (int j = 0; j < i; ++j)
      if (!g.at(i, j).is_zero()) return false;
  }
  return true;
}

MatrixOp unipotent_inverse(const MatrixOp& g) {
  if (!is_unipotent_upper(g))
    throw Error("inverse implemented for unipotent upper-triangular only");
  int n = g.n();
  MatrixOp nil = g - MatrixOp::identity(g.ring(), n);
  MatrixOp acc = MatrixOp::identity(g.ring(), n);
  MatrixOp power = MatrixOp::identity(g.ring(), n);
  for (int k = 1; k < n; ++k) {
    power = power * nil;
    acc = (k % 2 == 1) ? acc - power : acc + power;
  }
  return acc;
}

MatrixOp gauge_apply(const MatrixOp& g, const MatrixOp& m) {
  if (g.n() != m.n()) throw Error("matrix size mismatch");
  return tau_matrix(g) * m * unipotent_inverse(g);
}

bool is_MJ_member(const MatrixOp& m) {
  const RElem minus_one = m.ring().minus_one();
  for (int i = 1; i < m.n(); ++i) {
    if (m.at(i, i - 1) != minus_one) return false;
    for (int j = 0; j < i - 1; ++j)
      if (!m.at(i, j).is_zero()) return false;
  }
  return true;
}

MatrixOp canonical_embed(const DifferenceRing& ring,
                         const std::vector<RElem>& t) {
  int n = static_cast<int>(t.size()) + 1;
  if (n < 2) throw Error("canonical form needs at least one coefficient");
  MatrixOp m(ring, n);
  for (int j = 0; j + 1 < n; ++j) m.at(0, j) = t[j];
  m.at(0, n - 1) = ring.one();
  for (int i = 1; i < n; ++i) m.at(i, i - 1) = ring.minus_one();
  return m;
}

CanonicalForm canonicalize(const MatrixOp& m) {
  if (!is_MJ_member(m))
    throw Error("matrix is outside the canonicalization domain");
  const DifferenceRing& ring = m.ring();
  int n = m.n();
  MatrixOp a = m;
  MatrixOp g_total = MatrixOp::identity(ring, n);
  // Clear rows from the bottom up. Zeroing entry (alpha, j) uses the gauge
  // step I + x e_{alpha-1, j}, which acts as a column operation on column j
  // (through the -1 pivot at (alpha, alpha-1)) and a row operation on row
  // alpha - 1, which is cleaned in a later pass.
  for (int alpha = n - 1; alpha >= 1; --alpha) {
    for (int j = n - 1; j >= alpha; --j) {
      if (a.at(alpha, j).is_zero()) continue;
      RElem x = -a.at(alpha, j);
      RElem tx = ring.tau(x);
      for (int c = 0; c < n; ++c)
        a.at(alpha - 1, c) += tx * a.at(j, c);
      for (int r = 0; r < n; ++r)
        a.at(r, j) = a.at(r, j) - a.at(r, alpha - 1) * x;
      MatrixOp g_step = MatrixOp::identity(ring, n);
      g_step.at(alpha - 1, j) = x;
      g_total = g_step * g_total;
    }
  }
  if (a.at(0, n - 1) != ring.one())
    throw Error("canonical corner is not 1; the determinant must be 1");
  CanonicalForm out{std::vector<RElem>(), g_total};
  for (int j = 0; j + 1 < n; ++j) out.t.push_back(a.at(0, j));
  return out;
}

std::string ScalarDifferenceOp::to_string() const {
  std::string out;
  int n = order();
  for (int k = 0; k <= n; ++k) {
    if (!out.empty()) out += " + ";
    std::string c = "(" + coeffs[k].to_string() + ")";
    if (k == n) out += c;
    else if (k == n - 1) out += c + "*D";
    else out += c + "*D^" + std::to_string(n - k);
  }
  return out;
}

ScalarDifferenceOp extract_scalar(const DifferenceRing& ring,
                                  const std::vector<RElem>& t) {
  ScalarDifferenceOp op{ring, {}};
  op.coeffs.push_back(ring.one());
  for (const auto& ti : t) op.coeffs.push_back(ti);
  op.coeffs.push_back(ring.one());
  return op;
}

std::vector<RElem> shift_operator_product(const DifferenceRing& ring,
                                          const std::vector<RElem>& mu) {
  // acc[p] holds the coefficient of D^p. Multiplying by (D + m) on the
  // right sends c D^p to c D^{p+1} + c tau^p(m) D^p.
  std::vector<RElem> acc{ring.one()};
  for (const auto& m : mu) {
    std::vector<RElem> next(acc.size() + 1, ring.zero());
    for (size_t p = 0; p < acc.size(); ++p) {
      next[p + 1] += acc[p];
      next[p] += acc[p] * ring.tau(m, static_cast<int>(p));
    }
    acc = std::move(next);
  }
  // Reorder to descending powers of D.
  std::vector<RElem> out(acc.rbegin(), acc.rend());
  return out;
}

std::vector<RElem> miura_compose(const DifferenceRing& ring,
                                 const std::vector<RElem>& lambda) {
  int n = static_cast<int>(lambda.size());
  if (n < 1) throw Error("free-field composition needs at least one factor");
  if (n > 20) throw Error("free-field composition size limit exceeded");
  std::vector<RElem> t(n + 1, ring.zero());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    RElem prod = ring.one();
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      prod = prod * ring.tau(lambda[j], -pos);
      ++pos;
    }
    t[pos] += prod;
  }
  return std::vector<RElem>(t.begin() + 1, t.end());
}

std::vector<RElem> fundamental_characters(const MatrixOp& m) {
  int n = m.n();
  std::vector<RElem> chi(n, m.ring().zero());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    chi[idx.size() - 1] += det_rec(m, idx, idx);
  }
  return chi;
}

}  // namespace qdsr
