#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "qdsr/difference.hpp"
#include "qdsr/lattice_poly.hpp"
#include "qdsr/laurent.hpp"
#include "qdsr/loop_engine.hpp"

namespace qdsr {

// All documents preserve insertion order so emission is byte-stable.
using Json = nlohmann::ordered_json;

// Canonical rational string: "p" or "p/q" in lowest terms.
std::string rational_to_string(const mpq_class& v);
mpq_class rational_from_string(const std::string& s);

// Laurent polynomial as [[exponent, "coefficient"], ...] with ascending
// exponents; coefficients use the rational-function string format.
Json laurent_to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const Json& j);

// Ring element: same pair encoding; for the chain ring the first slot is
// the site index and the coefficient a plain rational.
Json relem_to_json(const RElem& x);
RElem relem_from_json(const Json& j, const DifferenceRing& ring);

// {"variant": "q_shift" | "lattice_shift" | "identity", "N": int?}
Json ring_to_json(const DifferenceRing& ring);
DifferenceRing ring_from_json(const Json& j);

// {"n": int, "ring": {...}, "entries": [[element, ...], ...]}
Json matrixop_to_json(const MatrixOp& m);
MatrixOp matrixop_from_json(const Json& j);

// {"t": [element, ...], "gauge": [[element, ...], ...]}
Json canonical_to_json(const CanonicalForm& cf);

// {"N": int, "sites": [{"a": "r", "b": "r", "c": "r", "d": "r"}, ...]}
Json lattice_config_to_json(int N, const std::map<GenId, mpq_class>& point);
std::map<GenId, mpq_class> lattice_config_from_json(const Json& j, int& N);

// Rule normal form for golden-file comparison: the series part keyed by
// the two factor products, the delta part by shift and factor product.
Json normal_form_to_json(const NormalForm& nf);

// File helpers. Parsing failures surface as Error.
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qdsr
