#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qdsr/difference.hpp"
#include "qdsr/json_io.hpp"
#include "qdsr/lattice.hpp"
#include "qdsr/report.hpp"
#include "qdsr/rmatrix.hpp"

using namespace qdsr;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_path(const std::string& rel) {
  return std::string(QDSR_DATA_DIR) + "/" + rel;
}

std::string tmp_path(const std::string& name) {
  return "/tmp/qdsr_test_" + std::to_string(getpid()) + "_" + name;
}

// Runs the CLI binary with the given argument string; returns its exit code.
int run_cli(const std::string& args) {
  std::string cmd = std::string(QDSR_CLI_PATH) + " " + args;
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

SuiteConfig lattice3_config() {
  SuiteConfig cfg;
  cfg.suite = "lattice";
  cfg.N = 3;
  cfg.points = 100;
  cfg.seed = 42;
  cfg.format = "json";
  return cfg;
}

const CheckResult* find_check(const std::vector<CheckResult>& rs,
                              const std::string& id) {
  for (const CheckResult& r : rs)
    if (r.id == id) return &r;
  return nullptr;
}

LaurentPoly mono(int e, long c) { return LaurentPoly::monomial(RatQ(c), e); }

}  // namespace

TEST_CASE("configuration validation catches usage errors") {
  SuiteConfig cfg;
  CHECK(validate_config(cfg).empty());
  cfg.suite = "nosuch";
  CHECK(!validate_config(cfg).empty());
  cfg.suite = "loop";
  cfg.points = 0;
  CHECK(!validate_config(cfg).empty());
  cfg.points = 1;
  cfg.format = "xml";
  CHECK(!validate_config(cfg).empty());
  cfg.format = "markdown";
  CHECK(validate_config(cfg).empty());
  cfg.format = "json";
  cfg.q_specialization = "3/5";
  CHECK(validate_config(cfg).empty());
  cfg.q_specialization = "0";
  CHECK(!validate_config(cfg).empty());
  cfg.q_specialization = "not a number";
  CHECK(!validate_config(cfg).empty());
  cfg.q_specialization.reset();
  cfg.N = 0;
  CHECK(!validate_config(cfg).empty());
}

TEST_CASE("suite runs are deterministic and sorted by id") {
  SuiteConfig cfg;
  cfg.suite = "loop";
  cfg.points = 5;
  std::vector<CheckResult> a = run_suite(cfg);
  std::vector<CheckResult> b = run_suite(cfg);
  CHECK(emit_report_json(cfg, a) == emit_report_json(cfg, b));
  REQUIRE(!a.empty());
  for (size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].id < a[i].id);

  cfg.seed = 43;
  std::vector<CheckResult> c = run_suite(cfg);
  // A different seed still passes everything; only sampled points differ.
  CHECK(!any_failure(c));
}

TEST_CASE("even site counts skip the odd-only checks with a reason") {
  SuiteConfig cfg;
  cfg.suite = "lattice";
  cfg.N = 4;
  cfg.points = 5;
  std::vector<CheckResult> rs = run_suite(cfg);
  for (const char* id : {"ftv.pair-rule", "ftv.variable-change", "ftv.via-t",
                         "ftv.via-nu", "lattice.reduction", "lattice.miura",
                         "lattice.root-unity"}) {
    const CheckResult* r = find_check(rs, id);
    REQUIRE(r != nullptr);
    CHECK(r->status == "skipped");
    CHECK(r->details == "odd N required");
  }
  // The parity-free checks still run and pass at N = 4.
  const CheckResult* cybe = find_check(rs, "lattice.cybe");
  REQUIRE(cybe != nullptr);
  CHECK(cybe->status == "pass");
  CHECK(!any_failure(rs));

  cfg.N = 3;
  rs = run_suite(cfg);
  const CheckResult* pair = find_check(rs, "ftv.pair-rule");
  REQUIRE(pair != nullptr);
  CHECK(pair->status == "skipped");
  CHECK(pair->details == "N >= 5 required");
  const CheckResult* red = find_check(rs, "lattice.reduction");
  REQUIRE(red != nullptr);
  CHECK(red->status == "pass");
}

TEST_CASE("negative controls pass by failing") {
  SuiteConfig cfg;
  cfg.suite = "loop";
  cfg.points = 2;
  std::vector<CheckResult> rs = run_suite(cfg);
  const CheckResult* ctl = find_check(rs, "loop.constraint-control");
  REQUIRE(ctl != nullptr);
  CHECK(ctl->status == "pass");
  CHECK(ctl->residual == "(1+q)/(2)");

  cfg = lattice3_config();
  cfg.points = 2;
  rs = run_suite(cfg);
  const CheckResult* cybe = find_check(rs, "lattice.cybe-control");
  REQUIRE(cybe != nullptr);
  CHECK(cybe->status == "pass");
  CHECK(cybe->residual.find("nonzero coefficients") != std::string::npos);
}

TEST_CASE("q specialization annotates exact nonzero residuals") {
  SuiteConfig cfg;
  cfg.suite = "loop";
  cfg.points = 2;
  cfg.q_specialization = "3/5";
  std::vector<CheckResult> rs = run_suite(cfg);
  const CheckResult* ctl = find_check(rs, "loop.constraint-control");
  REQUIRE(ctl != nullptr);
  CHECK(ctl->residual == "(1+q)/(2) [q=3/5: 4/5]");
}

TEST_CASE("empty result lists produce a zero summary") {
  SuiteConfig cfg;
  std::string doc = emit_report_json(cfg, {});
  Json parsed = Json::parse(doc);
  CHECK(parsed["summary"]["pass"] == 0);
  CHECK(parsed["summary"]["fail"] == 0);
  CHECK(parsed["summary"]["skipped"] == 0);
  CHECK(parsed["checks"].empty());
}

TEST_CASE("markdown groups by registry section in registry order") {
  SuiteConfig cfg = lattice3_config();
  cfg.points = 2;
  std::vector<CheckResult> rs = run_suite(cfg);
  std::string md = emit_report_markdown(cfg, rs);
  CHECK(md == emit_report_markdown(cfg, run_suite(cfg)));
  size_t w = md.find("## Lattice weights");
  size_t x = md.find("## Lattice exchange tensor");
  size_t t = md.find("## Lattice bracket tables");
  size_t r = md.find("## Lattice reduction");
  size_t l = md.find("## Local chain variables");
  size_t g = md.find("## Group action");
  size_t s = md.find("## Summary");
  REQUIRE(w != std::string::npos);
  REQUIRE(x != std::string::npos);
  REQUIRE(t != std::string::npos);
  REQUIRE(r != std::string::npos);
  REQUIRE(l != std::string::npos);
  REQUIRE(g != std::string::npos);
  REQUIRE(s != std::string::npos);
  CHECK(w < x);
  CHECK(x < t);
  CHECK(t < r);
  CHECK(r < l);
  CHECK(l < g);
  CHECK(g < s);
  // No loop sections in a lattice run.
  CHECK(md.find("## Loop") == std::string::npos);
}

TEST_CASE("anchor sections cover the registry") {
  CHECK(anchor_section("first-class-weights") ==
        "Loop weights and constraints");
  CHECK(anchor_section("central-term") == "Loop reduction");
  CHECK(anchor_section("exchange-control") == "Lattice exchange tensor");
  CHECK(anchor_section("action-covariance") == "Group action");
  CHECK(anchor_section("unheard-of") == "Other");
}

TEST_CASE("json reports round-trip through the re-renderer") {
  SuiteConfig cfg = lattice3_config();
  cfg.points = 2;
  std::vector<CheckResult> rs = run_suite(cfg);
  std::string doc = emit_report_json(cfg, rs);
  SuiteConfig back;
  std::vector<CheckResult> parsed =
      checks_from_report_json(Json::parse(doc), back);
  CHECK(emit_report_json(back, parsed) == doc);
  CHECK(emit_report_markdown(back, parsed) == emit_report_markdown(cfg, rs));
}

TEST_CASE("library run matches the stored golden report") {
  SuiteConfig cfg = lattice3_config();
  std::string doc = emit_report_json(cfg, run_suite(cfg));
  CHECK(doc == slurp(data_path("golden/lattice_n3.json")));
}

TEST_CASE("reduced-rule normal form matches its golden serialization") {
  std::string doc = normal_form_to_json(reduced_rule_expected()).dump(2) + "\n";
  CHECK(doc == slurp(data_path("golden/reduced_rule.json")));
}

TEST_CASE("rational and laurent serialization round-trips") {
  for (const char* s : {"0", "1", "-7", "3/5", "-22/7"}) {
    mpq_class v = rational_from_string(s);
    CHECK(rational_to_string(v) == s);
  }
  CHECK(rational_from_string("4/6") == mpq_class(2, 3));
  CHECK_THROWS_AS((void)rational_from_string("1/0"), Error);
  CHECK_THROWS_AS((void)rational_from_string("x"), Error);

  LaurentPoly p = mono(-2, 3) + mono(1, -1);
  CHECK(laurent_from_json(laurent_to_json(p)) == p);
  CHECK(laurent_from_json(Json::array()) == LaurentPoly());
  CHECK_THROWS_AS((void)laurent_from_json(Json::parse("[[1]]")), Error);
}

TEST_CASE("matrix operators and lattice configs round-trip") {
  DifferenceRing ring = DifferenceRing::loop();
  MatrixOp m(ring, 2);
  m.at(0, 0) = ring.from_laurent(mono(1, 1));
  m.at(0, 1) = ring.zero();
  m.at(1, 0) = ring.minus_one();
  m.at(1, 1) = ring.from_laurent(mono(-1, 1));
  Json j = matrixop_to_json(m);
  CHECK(matrixop_from_json(j) == m);

  DifferenceRing chain = DifferenceRing::lattice(3);
  MatrixOp c(chain, 2);
  c.at(0, 0) = chain.from_sites({1, 2, 3});
  c.at(0, 1) = chain.zero();
  c.at(1, 0) = chain.one();
  c.at(1, 1) = chain.from_sites({mpq_class(1, 2), 0, 1});
  CHECK(matrixop_from_json(matrixop_to_json(c)) == c);

  CHECK_THROWS_AS((void)matrixop_from_json(Json::parse("{}")), Error);
  CHECK_THROWS_AS(
      (void)matrixop_from_json(Json::parse(
          R"({"n":2,"ring":{"variant":"nosuch"},"entries":[[[],[]],[[],[]]]})")),
      Error);

  Rng rng(5);
  auto pt = random_unit_sites(3, GenKind::a, rng);
  int N = 0;
  auto back = lattice_config_from_json(lattice_config_to_json(3, pt), N);
  CHECK(N == 3);
  CHECK(back == pt);
}

TEST_CASE("cli verify reproduces the golden report byte for byte") {
  std::string out = tmp_path("golden.json");
  int rc = run_cli(
      "verify --suite lattice --N 3 --points 100 --seed 42 --format json "
      "--output " +
      out);
  CHECK(rc == 0);
  CHECK(slurp(out) == slurp(data_path("golden/lattice_n3.json")));
  std::remove(out.c_str());
}

TEST_CASE("cli canonicalize matches the library on a companion example") {
  DifferenceRing ring = DifferenceRing::loop();
  MatrixOp m(ring, 2);
  m.at(0, 0) = ring.from_laurent(mono(1, 1));
  m.at(0, 1) = ring.zero();
  m.at(1, 0) = ring.minus_one();
  m.at(1, 1) = ring.from_laurent(mono(-1, 1));

  std::string in = tmp_path("op.json");
  std::string out = tmp_path("canon.json");
  write_text_file(in, matrixop_to_json(m).dump(2) + "\n");
  int rc = run_cli("canonicalize --input " + in + " --output " + out);
  CHECK(rc == 0);
  std::string expected = canonical_to_json(canonicalize(m)).dump(2) + "\n";
  CHECK(slurp(out) == expected);
  std::remove(in.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli exit codes distinguish failure kinds") {
  CHECK(run_cli("verify --suite nosuch 2>/dev/null") == 2);
  CHECK(run_cli("verify --suite lattice --points 0 2>/dev/null") == 2);
  CHECK(run_cli("canonicalize --input /nonexistent.json 2>/dev/null") == 2);
  CHECK(run_cli("nosuchcommand 2>/dev/null") == 2);
  CHECK(run_cli("solve-phi --case nosuch 2>/dev/null") == 2);
  CHECK(run_cli("solve-phi --case lattice --N 3 >/dev/null") == 0);
  CHECK(run_cli("verify --suite ftv --N 5 --points 2 >/dev/null") == 0);
  CHECK(run_cli("--help >/dev/null") == 0);
}

TEST_CASE("cli honors the output directory environment variable") {
  std::string dir = tmp_path("outdir");
  std::string cmd = "mkdir -p " + dir;
  REQUIRE(std::system(cmd.c_str()) == 0);
  setenv("QDSR_OUTPUT_DIR", dir.c_str(), 1);
  int rc = run_cli("verify --suite ftv --N 5 --points 2");
  unsetenv("QDSR_OUTPUT_DIR");
  CHECK(rc == 0);
  std::string doc = slurp(dir + "/report_ftv.json");
  Json parsed = Json::parse(doc);
  CHECK(parsed["summary"]["fail"] == 0);
  cmd = "rm -rf " + dir;
  CHECK(std::system(cmd.c_str()) == 0);
}

TEST_CASE("cli report re-renders a stored json report as markdown") {
  std::string out = tmp_path("render.md");
  int rc = run_cli("report --input " + data_path("golden/lattice_n3.json") +
                   " --format md --output " + out);
  CHECK(rc == 0);
  std::string md = slurp(out);
  SuiteConfig cfg = lattice3_config();
  CHECK(md == emit_report_markdown(cfg, run_suite(cfg)));
  std::remove(out.c_str());
}
