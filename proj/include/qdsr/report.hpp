#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdsr/json_io.hpp"

namespace qdsr {

// Batch-verification configuration. Suites: loop, miura, lattice, ftv, all.
// N drives the chain suites, mode_range and points the loop suites; the
// optional q specialization adds a numeric rendering of exact residuals.
struct SuiteConfig {
  std::string suite = "all";
  int N = 3;
  int mode_range = 8;
  int points = 100;
  uint64_t seed = 42;
  std::string format = "json";
  bool timings = false;
  std::optional<std::string> q_specialization;
};

// Empty when the configuration is valid, else a usage message.
std::string validate_config(const SuiteConfig& cfg);

struct CheckResult {
  std::string id;
  std::string anchor;    // key into docs/identities.md
  std::string status;    // pass | fail | skipped
  std::string residual;  // exact string, or float with its tolerance
  std::string details;
  double elapsed_ms = 0.0;  // emitted only when timings are requested
};

// Runs every check of the selected suite. Deterministic for a fixed
// (config, seed): each check draws from its own stream derived from the
// seed and the check id, and results are sorted by id.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

bool any_failure(const std::vector<CheckResult>& results);

// Byte-stable report emission.
std::string emit_report_json(const SuiteConfig& cfg,
                             const std::vector<CheckResult>& results);
std::string emit_report_markdown(const SuiteConfig& cfg,
                                 const std::vector<CheckResult>& results);

// Rebuilds (config, results) from a JSON report document, for re-rendering.
std::vector<CheckResult> checks_from_report_json(const Json& doc,
                                                 SuiteConfig& cfg);

// Registry section for an anchor, mirroring docs/identities.md.
std::string anchor_section(const std::string& anchor);

}  // namespace qdsr
