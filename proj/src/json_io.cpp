#include "qdsr/json_io.hpp"

#include <fstream>

namespace qdsr {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error("malformed input: " + what);
}

int require_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) malformed(what + " must be an integer");
  return j.get<int>();
}

std::string require_string(const Json& j, const std::string& what) {
  if (!j.is_string()) malformed(what + " must be a string");
  return j.get<std::string>();
}

}  // namespace

std::string rational_to_string(const mpq_class& v) { return v.get_str(); }

mpq_class rational_from_string(const std::string& s) {
  mpq_class v;
  if (v.set_str(s, 10) != 0) malformed("bad rational literal '" + s + "'");
  if (v.get_den() == 0) malformed("zero denominator in '" + s + "'");
  v.canonicalize();
  return v;
}

Json laurent_to_json(const LaurentPoly& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.terms())
    out.push_back(Json::array({e, c.to_string()}));
  return out;
}

LaurentPoly laurent_from_json(const Json& j) {
  if (!j.is_array()) malformed("element must be an array of pairs");
  LaurentPoly p;
  for (const Json& term : j) {
    if (!term.is_array() || term.size() != 2)
      malformed("element term must be [exponent, coefficient]");
    int e = require_int(term[0], "exponent");
    RatQ c = RatQ::parse(require_string(term[1], "coefficient"));
    p += LaurentPoly::monomial(c, e);
  }
  return p;
}

Json relem_to_json(const RElem& x) {
  if (x.is_laurent()) return laurent_to_json(x.laurent());
  Json out = Json::array();
  const auto& sites = x.sites();
  for (size_t i = 0; i < sites.size(); ++i)
    if (sites[i] != 0)
      out.push_back(
          Json::array({static_cast<int>(i), rational_to_string(sites[i])}));
  return out;
}

RElem relem_from_json(const Json& j, const DifferenceRing& ring) {
  if (ring.variant() != DifferenceRing::Variant::lattice)
    return ring.from_laurent(laurent_from_json(j));
  if (!j.is_array()) malformed("element must be an array of pairs");
  std::vector<mpq_class> sites(ring.sites(), mpq_class(0));
  for (const Json& term : j) {
    if (!term.is_array() || term.size() != 2)
      malformed("element term must be [site, value]");
    int k = require_int(term[0], "site");
    if (k < 0 || k >= ring.sites()) malformed("site index out of range");
    sites[k] = rational_from_string(require_string(term[1], "value"));
  }
  return ring.from_sites(std::move(sites));
}

Json ring_to_json(const DifferenceRing& ring) {
  Json out = Json::object();
  switch (ring.variant()) {
    case DifferenceRing::Variant::loop:
      out["variant"] = "q_shift";
      break;
    case DifferenceRing::Variant::lattice:
      out["variant"] = "lattice_shift";
      out["N"] = ring.sites();
      break;
    case DifferenceRing::Variant::constant:
      out["variant"] = "identity";
      break;
  }
  return out;
}

DifferenceRing ring_from_json(const Json& j) {
  if (!j.is_object()) malformed("ring must be an object");
  std::string variant = require_string(j.value("variant", Json()), "variant");
  if (variant == "q_shift") return DifferenceRing::loop();
  if (variant == "identity") return DifferenceRing::constants();
  if (variant == "lattice_shift") {
    if (!j.contains("N")) malformed("lattice_shift ring needs N");
    int N = require_int(j["N"], "N");
    if (N < 1) malformed("N must be positive");
    return DifferenceRing::lattice(N);
  }
  malformed("unknown ring variant '" + variant + "'");
}

Json matrixop_to_json(const MatrixOp& m) {
  Json out = Json::object();
  out["n"] = m.n();
  out["ring"] = ring_to_json(m.ring());
  Json rows = Json::array();
  for (int i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.n(); ++j) row.push_back(relem_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  out["entries"] = std::move(rows);
  return out;
}

MatrixOp matrixop_from_json(const Json& j) {
  if (!j.is_object()) malformed("matrix document must be an object");
  if (!j.contains("n") || !j.contains("ring") || !j.contains("entries"))
    malformed("matrix document needs n, ring, entries");
  int n = require_int(j["n"], "n");
  if (n < 1) malformed("n must be positive");
  DifferenceRing ring = ring_from_json(j["ring"]);
  const Json& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    malformed("entries must be an n x n array");
  MatrixOp m(ring, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
      malformed("entries must be an n x n array");
    for (int c = 0; c < n; ++c) m.at(i, c) = relem_from_json(rows[i][c], ring);
  }
  return m;
}

Json canonical_to_json(const CanonicalForm& cf) {
  Json out = Json::object();
  Json t = Json::array();
  for (const RElem& x : cf.t) t.push_back(relem_to_json(x));
  out["t"] = std::move(t);
  Json g = Json::array();
  for (int i = 0; i < cf.gauge.n(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < cf.gauge.n(); ++j)
      row.push_back(relem_to_json(cf.gauge.at(i, j)));
    g.push_back(std::move(row));
  }
  out["gauge"] = std::move(g);
  return out;
}

Json lattice_config_to_json(int N, const std::map<GenId, mpq_class>& point) {
  Json out = Json::object();
  out["N"] = N;
  Json sites = Json::array();
  static const char* names[4] = {"a", "b", "c", "d"};
  for (int i = 0; i < N; ++i) {
    Json site = Json::object();
    for (int l = 0; l < 4; ++l) {
      GenId g{static_cast<GenKind>(l), i};
      auto it = point.find(g);
      site[names[l]] =
          rational_to_string(it == point.end() ? mpq_class(0) : it->second);
    }
    sites.push_back(std::move(site));
  }
  out["sites"] = std::move(sites);
  return out;
}

std::map<GenId, mpq_class> lattice_config_from_json(const Json& j, int& N) {
  if (!j.is_object() || !j.contains("N") || !j.contains("sites"))
    malformed("lattice document needs N and sites");
  N = require_int(j["N"], "N");
  if (N < 1) malformed("N must be positive");
  const Json& sites = j["sites"];
  if (!sites.is_array() || static_cast<int>(sites.size()) != N)
    malformed("sites must list N site objects");
  static const char* names[4] = {"a", "b", "c", "d"};
  std::map<GenId, mpq_class> point;
  for (int i = 0; i < N; ++i) {
    if (!sites[i].is_object()) malformed("each site must be an object");
    for (int l = 0; l < 4; ++l) {
      if (!sites[i].contains(names[l]))
        malformed(std::string("site missing entry ") + names[l]);
      point[{static_cast<GenKind>(l), i}] = rational_from_string(
          require_string(sites[i][names[l]], "site entry"));
    }
  }
  return point;
}

Json normal_form_to_json(const NormalForm& nf) {
  Json out = Json::object();
  Json series = Json::array();
  for (const auto& [key, coeff] : nf.res) {
    Json item = Json::object();
    item["left"] = factor_prod_to_string(key.first);
    item["right"] = factor_prod_to_string(key.second);
    item["coeff"] = coeff.to_string();
    series.push_back(std::move(item));
  }
  out["series"] = std::move(series);
  Json delta = Json::array();
  for (const auto& [key, coeff] : nf.delta) {
    Json item = Json::object();
    item["shift"] = key.first;
    item["factors"] = factor_prod_to_string(key.second);
    item["coeff"] = coeff.to_string();
    delta.push_back(std::move(item));
  }
  out["delta"] = std::move(delta);
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path);
}

}  // namespace qdsr
