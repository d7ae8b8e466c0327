#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "qdsr/difference.hpp"
#include "qdsr/json_io.hpp"
#include "qdsr/lattice.hpp"
#include "qdsr/report.hpp"
#include "qdsr/rmatrix.hpp"

namespace {

// Output resolution: explicit path, else QDSR_OUTPUT_DIR joined with the
// subcommand's default name, else stdout (empty path).
std::string resolve_output(const std::string& cli_path,
                           const std::string& default_name) {
  if (!cli_path.empty()) return cli_path;
  const char* dir = std::getenv("QDSR_OUTPUT_DIR");
  if (dir != nullptr && *dir != '\0')
    return std::string(dir) + "/" + default_name;
  return "";
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  qdsr::write_text_file(path, text);
}

int run_canonicalize(const std::string& input, const std::string& output) {
  qdsr::Json doc = qdsr::load_json_file(input);
  qdsr::MatrixOp m = qdsr::matrixop_from_json(doc);
  qdsr::CanonicalForm cf = qdsr::canonicalize(m);
  emit(qdsr::canonical_to_json(cf).dump(2) + "\n",
       resolve_output(output, "canonical.json"));
  return 0;
}

int run_solve_phi(const std::string& which, int range, int N,
                  const std::string& output) {
  qdsr::Json doc = qdsr::Json::object();
  qdsr::Json weights = qdsr::Json::array();
  if (which == "loop") {
    doc["case"] = "loop";
    doc["range"] = range;
    for (const auto& [mode, value] : qdsr::solve_first_class_loop(range)) {
      qdsr::Json item = qdsr::Json::object();
      item["mode"] = mode;
      item["value"] = value.to_string();
      weights.push_back(std::move(item));
    }
  } else if (which == "lattice") {
    doc["case"] = "lattice";
    doc["N"] = N;
    auto phi = qdsr::solve_lattice_phi(N);
    for (int k = 0; k < N; ++k) {
      qdsr::Json item = qdsr::Json::object();
      item["index"] = k;
      item["value"] = qdsr::rational_to_string(phi[k]);
      weights.push_back(std::move(item));
    }
  } else {
    std::cerr << "error: unknown case '" << which
              << "' (expected loop or lattice)\n";
    return 2;
  }
  doc["weights"] = std::move(weights);
  emit(doc.dump(2) + "\n",
       resolve_output(output, "phi_" + which + ".json"));
  return 0;
}

int run_verify(qdsr::SuiteConfig cfg, const std::string& output) {
  if (cfg.format == "markdown") cfg.format = "md";
  std::string msg = qdsr::validate_config(cfg);
  if (!msg.empty()) {
    std::cerr << "error: " << msg << "\n";
    return 2;
  }
  std::vector<qdsr::CheckResult> results = qdsr::run_suite(cfg);
  std::string text = cfg.format == "json"
                         ? qdsr::emit_report_json(cfg, results)
                         : qdsr::emit_report_markdown(cfg, results);
  std::string ext = cfg.format == "json" ? ".json" : ".md";
  emit(text, resolve_output(output, "report_" + cfg.suite + ext));
  return qdsr::any_failure(results) ? 1 : 0;
}

int run_report(const std::string& input, std::string format,
               const std::string& output) {
  if (format == "markdown") format = "md";
  if (format != "json" && format != "md") {
    std::cerr << "error: unknown format '" << format
              << "' (expected json or md)\n";
    return 2;
  }
  qdsr::Json doc = qdsr::load_json_file(input);
  qdsr::SuiteConfig cfg;
  std::vector<qdsr::CheckResult> results =
      qdsr::checks_from_report_json(doc, cfg);
  std::string text = format == "json"
                         ? qdsr::emit_report_json(cfg, results)
                         : qdsr::emit_report_markdown(cfg, results);
  std::string ext = format == "json" ? ".json" : ".md";
  emit(text, resolve_output(output, "report" + ext));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact toolkit for q-difference and lattice bracket structures: "
      "canonical forms, weight solvers, and verification reports."};
  app.require_subcommand(1);

  CLI::App* canon = app.add_subcommand(
      "canonicalize", "Reduce a matrix difference operator to its "
                      "companion-shaped canonical form");
  std::string canon_input, canon_output;
  canon->add_option("--input", canon_input, "operator JSON file")
      ->required();
  canon->add_option("--output", canon_output,
                    "destination file (stdout when omitted)");

  CLI::App* phi = app.add_subcommand(
      "solve-phi", "Solve a first-class weight system");
  std::string phi_case, phi_output;
  int phi_range = 8;
  int phi_N = 3;
  phi->add_option("--case", phi_case, "loop or lattice")->required();
  phi->add_option("--range", phi_range, "mode range for the loop case");
  phi->add_option("--N", phi_N, "site count for the lattice case");
  phi->add_option("--output", phi_output,
                  "destination file (stdout when omitted)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run a verification suite and emit a report");
  qdsr::SuiteConfig cfg;
  std::string verify_output, verify_q;
  verify->add_option("--suite", cfg.suite,
                     "loop, miura, lattice, ftv, or all");
  verify->add_option("--N", cfg.N, "site count for the lattice suites");
  verify->add_option("--mode-range", cfg.mode_range,
                     "mode window for the loop suites");
  verify->add_option("--points", cfg.points, "random sample count");
  verify->add_option("--seed", cfg.seed, "base seed for the check streams");
  verify->add_option("--q", verify_q,
                     "rational q specialization appended to exact residuals");
  verify->add_option("--format", cfg.format, "json or md");
  verify->add_flag("--timings", cfg.timings, "include per-check timings");
  verify->add_option("--output", verify_output,
                     "destination file (stdout when omitted)");

  CLI::App* report = app.add_subcommand(
      "report", "Re-render a JSON report");
  std::string report_input, report_format = "md", report_output;
  report->add_option("--input", report_input, "report JSON file")
      ->required();
  report->add_option("--format", report_format, "json or md");
  report->add_option("--output", report_output,
                     "destination file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (canon->parsed()) return run_canonicalize(canon_input, canon_output);
    if (phi->parsed())
      return run_solve_phi(phi_case, phi_range, phi_N, phi_output);
    if (verify->parsed()) {
      if (!verify_q.empty()) cfg.q_specialization = verify_q;
      return run_verify(cfg, verify_output);
    }
    if (report->parsed())
      return run_report(report_input, report_format, report_output);
  } catch (const qdsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
