#include "qdsr/loop_engine.hpp"

#include <algorithm>

namespace qdsr {

char loop_gen_name(LoopGen g) {
  static const char names[] = {'a', 'b', 'c', 'd', 'l'};
  return names[static_cast<int>(g)];
}

FactorProd fmul(const FactorProd& facs, LoopFactor f, int exp) {
  FactorProd out;
  out.reserve(facs.size() + 1);
  bool placed = false;
  for (const auto& [g, e] : facs) {
    if (g == f) {
      int ne = e + exp;
      if (ne != 0) out.emplace_back(g, ne);
      placed = true;
    } else {
      if (!placed && f < g) {
        if (exp != 0) out.emplace_back(f, exp);
        placed = true;
      }
      out.emplace_back(g, e);
    }
  }
  if (!placed && exp != 0) out.emplace_back(f, exp);
  return out;
}

FactorProd fjoin(const FactorProd& f1, const FactorProd& f2) {
  FactorProd out;
  out.reserve(f1.size() + f2.size());
  size_t i = 0, j = 0;
  while (i < f1.size() && j < f2.size()) {
    if (f1[i].first == f2[j].first) {
      int e = f1[i].second + f2[j].second;
      if (e != 0) out.emplace_back(f1[i].first, e);
      ++i;
      ++j;
    } else if (f1[i].first < f2[j].first) {
      out.push_back(f1[i++]);
    } else {
      out.push_back(f2[j++]);
    }
  }
  for (; i < f1.size(); ++i) out.push_back(f1[i]);
  for (; j < f2.size(); ++j) out.push_back(f2[j]);
  return out;
}

std::string factor_prod_to_string(const FactorProd& facs) {
  if (facs.empty()) return "1";
  std::string out;
  for (const auto& [f, e] : facs) {
    if (!out.empty()) out += "*";
    out += loop_gen_name(f.gen);
    if (f.shift != 0) out += "{" + std::to_string(f.shift) + "}";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

namespace {

// Graded components of the two one-sided gradients: for each generator,
// the lists of (coefficient, partner generator) attached to the raising,
// diagonal, and lowering directions.
struct GradEntry {
  std::vector<std::pair<int, LoopGen>> E, H, F;
};

using GradTable = std::map<LoopGen, GradEntry>;

const GradTable& grad_left() {
  static const GradTable t = {
      {LoopGen::a, {{{1, LoopGen::c}}, {{1, LoopGen::a}}, {}}},
      {LoopGen::b, {{{1, LoopGen::d}}, {{1, LoopGen::b}}, {}}},
      {LoopGen::c, {{}, {{-1, LoopGen::c}}, {{1, LoopGen::a}}}},
      {LoopGen::d, {{}, {{-1, LoopGen::d}}, {{1, LoopGen::b}}}},
  };
  return t;
}

const GradTable& grad_right() {
  static const GradTable t = {
      {LoopGen::a, {{}, {{1, LoopGen::a}}, {{1, LoopGen::b}}}},
      {LoopGen::b, {{{1, LoopGen::a}}, {{-1, LoopGen::b}}, {}}},
      {LoopGen::c, {{}, {{1, LoopGen::c}}, {{1, LoopGen::d}}}},
      {LoopGen::d, {{{1, LoopGen::c}}, {{-1, LoopGen::d}}, {}}},
  };
  return t;
}

using Entry = BracketTable::Entry;

void entry_add(Entry& ent, LoopGen ff, LoopGen fg, const Kernel& k) {
  auto key = std::make_pair(ff, fg);
  auto it = ent.find(key);
  if (it == ent.end()) {
    if (!k.is_zero()) ent[key] = k;
  } else {
    it->second += k;
    if (it->second.is_zero()) ent.erase(it);
  }
}

Entry channel(const GradEntry& gf, const GradEntry& gg, const Kernel& kEF,
              const Kernel& kHH) {
  Entry out;
  for (const auto& [cf, ff] : gf.E) {
    for (const auto& [cg, fg] : gg.F) {
      entry_add(out, ff, fg, kEF * RatQ(cf * cg));
    }
  }
  for (const auto& [cf, ff] : gf.H) {
    for (const auto& [cg, fg] : gg.H) {
      entry_add(out, ff, fg, kHH * RatQ(cf * cg));
    }
  }
  return out;
}

Entry swap_pattern(const Entry& e) {
  Entry out;
  for (const auto& [key, k] : e) {
    entry_add(out, key.second, key.first, k.subst_inv());
  }
  return out;
}

void entry_merge(Entry& acc, const Entry& e, const RatQ& scale) {
  for (const auto& [key, k] : e) {
    entry_add(acc, key.first, key.second, k * scale);
  }
}

const std::array<LoopGen, 4> kMatrixGens = {LoopGen::a, LoopGen::b,
                                            LoopGen::c, LoopGen::d};

}  // namespace

BracketTable BracketTable::assemble(const Kernel& phi) {
  BracketTable t;
  const RatQ half(mpq_class(1, 2));
  const Kernel kHH = phi * half;
  const Kernel kEF = Kernel::delta(0);
  const Kernel twEF = Kernel::delta(1);
  const Kernel twHH = kHH.mul_u_pow(1);
  const GradTable& L = grad_left();
  const GradTable& R = grad_right();
  for (LoopGen x : kMatrixGens) {
    for (LoopGen y : kMatrixGens) {
      Entry sym;
      entry_merge(sym, channel(L.at(x), L.at(y), kEF, kHH), RatQ(1));
      entry_merge(sym, swap_pattern(channel(L.at(y), L.at(x), kEF, kHH)),
                  RatQ(-1));
      entry_merge(sym, channel(R.at(x), R.at(y), kEF, kHH), RatQ(1));
      entry_merge(sym, swap_pattern(channel(R.at(y), R.at(x), kEF, kHH)),
                  RatQ(-1));
      Entry ent;
      entry_merge(ent, sym, half);
      entry_merge(ent, channel(R.at(x), L.at(y), twEF, twHH), RatQ(-1));
      entry_merge(ent, swap_pattern(channel(R.at(y), L.at(x), twEF, twHH)),
                  RatQ(1));
      t.entries_[{x, y}] = std::move(ent);
    }
  }
  return t;
}

BracketTable BracketTable::reference() {
  using G = LoopGen;
  const Kernel pt = Kernel::phi_tilde();
  BracketTable t;
  auto set = [&t](G x, G y, Entry e) { t.entries_[{x, y}] = std::move(e); };
  set(G::a, G::a, {{{G::a, G::a}, pt}});
  set(G::a, G::b, {{{G::a, G::b}, Kernel::delta(0, RatQ(-1))}});
  set(G::a, G::c, {{{G::a, G::c}, Kernel::delta(0)}});
  set(G::a, G::d, {{{G::a, G::d}, -pt}});
  set(G::b, G::b, {});
  set(G::b, G::c,
      {{{G::a, G::d}, Kernel::delta(0)}, {{G::a, G::a}, Kernel::delta(1, RatQ(-1))}});
  set(G::b, G::d, {{{G::a, G::b}, Kernel::delta(1, RatQ(-1))}});
  set(G::c, G::c, {});
  set(G::c, G::d, {{{G::a, G::c}, Kernel::delta(-1)}});
  set(G::d, G::d,
      {{{G::d, G::d}, pt},
       {{G::c, G::b}, Kernel::delta(1, RatQ(-1))},
       {{G::b, G::c}, Kernel::delta(-1)}});
  // Antisymmetry fills the transposed half: swap the legs and apply
  // K(u) -> -K(1/u).
  for (int xi = 0; xi < 4; ++xi) {
    for (int yi = 0; yi < xi; ++yi) {
      G x = kMatrixGens[xi], y = kMatrixGens[yi];
      Entry e;
      for (const auto& [key, k] : t.entries_.at({y, x})) {
        entry_add(e, key.second, key.first, k.reflect());
      }
      set(x, y, std::move(e));
    }
  }
  return t;
}

const BracketTable::Entry& BracketTable::entry(LoopGen x, LoopGen y) const {
  auto it = entries_.find({x, y});
  if (it == entries_.end())
    throw Error("bracket rule has no entry for this generator pair");
  return it->second;
}

TermList rule_terms(const BracketTable& table, LoopGen x, LoopGen y) {
  TermList out;
  for (const auto& [key, k] : table.entry(x, y)) {
    out.push_back({k,
                   FactorProd{{LoopFactor{key.first, 0}, 1}},
                   FactorProd{{LoopFactor{key.second, 0}, 1}}});
  }
  return out;
}

bool BracketTable::rule_equal(const BracketTable& o) const {
  for (LoopGen x : kMatrixGens) {
    for (LoopGen y : kMatrixGens) {
      if (!(normalize(rule_terms(*this, x, y)) ==
            normalize(rule_terms(o, x, y))))
        return false;
    }
  }
  return true;
}

TermList atom_terms(const BracketTable& table, LoopFactor x, LoopFactor y) {
  TermList out;
  const int rel = x.shift - y.shift;
  if (x.gen == LoopGen::l && y.gen == LoopGen::l) {
    out.push_back({Kernel::phi_tilde().mul_u_pow(rel),
                   FactorProd{{x, 1}},
                   FactorProd{{y, 1}}});
    return out;
  }
  if (x.gen == LoopGen::l || y.gen == LoopGen::l)
    throw Error("no bracket rule couples the free field to matrix entries");
  for (const auto& [key, k] : table.entry(x.gen, y.gen)) {
    out.push_back({k.mul_u_pow(rel),
                   FactorProd{{LoopFactor{key.first, x.shift}, 1}},
                   FactorProd{{LoopFactor{key.second, y.shift}, 1}}});
  }
  return out;
}

TermList leibniz(const BracketTable& table, const FactorProd& zprod,
                 const FactorProd& wprod) {
  TermList out;
  for (const auto& [fx, ex] : zprod) {
    for (const auto& [fy, ey] : wprod) {
      FactorProd restz = fmul(zprod, fx, -1);
      FactorProd restw = fmul(wprod, fy, -1);
      RatQ weight(static_cast<long>(ex) * ey);
      for (auto& term : atom_terms(table, fx, fy)) {
        out.push_back({term.k * weight, fjoin(restz, term.z),
                       fjoin(restw, term.w)});
      }
    }
  }
  return out;
}

TermList bracket_products(const BracketTable& table, const ProductSum& zsum,
                          const ProductSum& wsum) {
  TermList out;
  for (const auto& [cz, zp] : zsum) {
    for (const auto& [cw, wp] : wsum) {
      for (auto& term : leibniz(table, zp, wp)) {
        out.push_back({term.k * (cz * cw), term.z, term.w});
      }
    }
  }
  return out;
}

namespace {

FactorProd shift_to_w(const FactorProd& facs, int a) {
  FactorProd out;
  out.reserve(facs.size());
  for (const auto& [f, e] : facs)
    out.emplace_back(LoopFactor{f.gen, f.shift - a}, e);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

NormalForm normalize(const TermList& terms) {
  NormalForm nf;
  for (const auto& term : terms) {
    if (!term.k.residue().is_zero()) {
      auto key = std::make_pair(term.z, term.w);
      auto it = nf.res.find(key);
      if (it == nf.res.end()) {
        nf.res[key] = term.k.residue();
      } else {
        it->second += term.k.residue();
        if (it->second.is_zero()) nf.res.erase(it);
      }
    }
    for (const auto& [a, c] : term.k.laurent()) {
      auto key = std::make_pair(a, fjoin(shift_to_w(term.z, a), term.w));
      auto it = nf.delta.find(key);
      if (it == nf.delta.end()) {
        nf.delta[key] = c;
      } else {
        it->second += c;
        if (it->second.is_zero()) nf.delta.erase(it);
      }
    }
  }
  return nf;
}

TermList sub_c(const TermList& terms) {
  TermList out;
  out.reserve(terms.size());
  for (const auto& term : terms) {
    bool flip = false;
    FactorProd nz, nw;
    for (const auto& [f, e] : term.z) {
      if (f.gen == LoopGen::c) flip ^= (e % 2 != 0);
      else nz.emplace_back(f, e);
    }
    for (const auto& [f, e] : term.w) {
      if (f.gen == LoopGen::c) flip ^= (e % 2 != 0);
      else nw.emplace_back(f, e);
    }
    out.push_back({flip ? -term.k : term.k, std::move(nz), std::move(nw)});
  }
  return out;
}

TermList sub_b(const TermList& terms) {
  TermList out = terms;
  bool changed = true;
  while (changed) {
    changed = false;
    TermList next;
    for (const auto& term : out) {
      int side = -1;
      int shift = 0;
      for (const auto& [f, e] : term.z) {
        (void)e;
        if (f.gen == LoopGen::b) {
          side = 0;
          shift = f.shift;
          break;
        }
      }
      if (side < 0) {
        for (const auto& [f, e] : term.w) {
          (void)e;
          if (f.gen == LoopGen::b) {
            side = 1;
            shift = f.shift;
            break;
          }
        }
      }
      if (side < 0) {
        next.push_back(term);
        continue;
      }
      changed = true;
      LoopFactor b{LoopGen::b, shift};
      LoopFactor a{LoopGen::a, shift};
      LoopFactor d{LoopGen::d, shift};
      if (side == 0) {
        FactorProd base = fmul(term.z, b, -1);
        next.push_back({term.k, base, term.w});
        next.push_back({-term.k, fmul(fmul(base, a), d), term.w});
      } else {
        FactorProd base = fmul(term.w, b, -1);
        next.push_back({term.k, term.z, base});
        next.push_back({-term.k, term.z, fmul(fmul(base, a), d)});
      }
    }
    out = std::move(next);
  }
  return out;
}

ProductSum tilde_t_encoding() {
  return {{RatQ(1),
           {{LoopFactor{LoopGen::a, 0}, 1}, {LoopFactor{LoopGen::c, -1}, 1}}},
          {RatQ(1),
           {{LoopFactor{LoopGen::c, 0}, 1}, {LoopFactor{LoopGen::d, -1}, 1}}}};
}

ProductSum c_encoding() {
  return {{RatQ(1), {{LoopFactor{LoopGen::c, 0}, 1}}}};
}

ProductSum reduced_t_encoding() {
  return {{RatQ(1), {{LoopFactor{LoopGen::a, 0}, 1}}},
          {RatQ(1), {{LoopFactor{LoopGen::d, -1}, 1}}}};
}

ProductSum miura_image_encoding() {
  return {{RatQ(1), {{LoopFactor{LoopGen::l, 0}, -1}}},
          {RatQ(1), {{LoopFactor{LoopGen::l, -1}, 1}}}};
}

}  // namespace qdsr
