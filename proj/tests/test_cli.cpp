#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "numfunnel/study_kit.hpp"
#include "support.hpp"

#ifdef NUMFUNNEL_CLI_PATH

using namespace numfunnel;
using testsupport::TempDir;
using testsupport::run_cli;

namespace {

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

std::string reference_cohort_csv(const TempDir& dir) {
  const auto path = dir.file("responses.csv");
  std::ostringstream out;
  write_responses_csv(out, testsupport::reference_cohort());
  testsupport::write_file(path, out.str());
  return path;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("gen-numbers enumerates ranges and expands patterns") {
  const auto range = run_cli("gen-numbers --seed-number 9810000000 --count 5");
  CHECK(range.code == 0);
  CHECK(line_count(range.output) == 5);
  CHECK(range.output.substr(0, 14) == "+919810000000\n");

  const auto expanded =
      run_cli("gen-numbers --pattern xx-85-85-85-xx --mobile-only");
  CHECK(expanded.code == 0);
  CHECK(line_count(expanded.output) == 4000);

  const auto capped = run_cli("gen-numbers --pattern 99999xxxxx --limit 10");
  CHECK(capped.code == 0);
  CHECK(line_count(capped.output) == 10);

  TempDir dir;
  const auto to_file = run_cli("gen-numbers --pattern 99999xxxxx --limit 10 --out " +
                               dir.file("pool.txt"));
  CHECK(to_file.code == 0);
  CHECK(to_file.output.find("10 numbers ->") != std::string::npos);
  CHECK(line_count(testsupport::read_file(dir.file("pool.txt"))) == 10);
}

TEST_CASE("usage problems exit with 2") {
  CHECK(run_cli("gen-numbers --pattern not-a-pattern").code == 2);
  CHECK(run_cli("gen-numbers").code == 2);  // nothing to generate
  CHECK(run_cli("gen-numbers --seed-number 9999999999 --count 5").code == 2);
  CHECK(run_cli("gen-numbers --no-such-flag").code == 2);
  CHECK(run_cli("").code == 2);  // a subcommand is required
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("run-funnel").code == 2);  // --pool is required
}

TEST_CASE("study-analyze reproduces the cohort summary") {
  TempDir dir;
  const auto csv = reference_cohort_csv(dir);
  const auto out_json = dir.file("summary.json");
  const auto r = run_cli("study-analyze --responses " + csv + " --out " + out_json);
  CHECK(r.code == 0);
  CHECK(r.output.find("34.5%") != std::string::npos);
  CHECK(r.output.find("54.3%") != std::string::npos);
  CHECK(r.output.find("69.2%") != std::string::npos);
  CHECK(r.output.find("460 responses") != std::string::npos);

  const auto j = nlohmann::json::parse(testsupport::read_file(out_json));
  CHECK(j["e1"]["vulnerable"] == 37);
  CHECK(j["e1"]["analyzed"] == 107);
  CHECK(j["e2"]["success_rate"] == 54.3);
  CHECK(j["e3"]["analyzed"] == 104);
  CHECK(j["totals"]["analyzed"] == 314);
}

TEST_CASE("study-analyze distinguishes bad data from empty data") {
  TempDir dir;
  const auto bad = dir.file("bad.csv");
  testsupport::write_file(
      bad,
      "participant_id,experiment,briefing_answers_correct,prob,legit\n"
      "p1,e1,true,click,reply\n"
      "p2,e1,true,clik,reply\n");
  const auto bad_run = run_cli("study-analyze --responses " + bad);
  CHECK(bad_run.code == 2);
  CHECK(bad_run.output.find("line 3") != std::string::npos);

  const auto empty = dir.file("empty.csv");
  testsupport::write_file(
      empty,
      "participant_id,experiment,briefing_answers_correct,prob,legit\n"
      "p1,e1,false,,\n");
  const auto empty_run = run_cli("study-analyze --responses " + empty);
  CHECK(empty_run.code == 1);

  CHECK(run_cli("study-analyze --responses " + dir.file("missing.csv")).code ==
        2);
}

TEST_CASE("run-funnel writes a report and checks expectations") {
  TempDir dir;
  const auto report_path = dir.file("report.json");
  const auto r = run_cli("run-funnel --pool 9810000000:500 --report " +
                         report_path);
  CHECK(r.code == 0);
  CHECK(r.output.find("funnel over 500 numbers") != std::string::npos);
  const auto j = nlohmann::json::parse(testsupport::read_file(report_path));
  CHECK(j["stages"]["pool"] == 500);
  CHECK(j["run"]["seed"] == 42);

  const auto expect_path = dir.file("expect.json");
  testsupport::write_file(expect_path, R"({
    "checks": [{"name": "hits", "numerator": "stages.lookup_hits",
                "denominator": "stages.pool", "target": 0.99}]})");
  const auto miss = run_cli("run-funnel --pool 9810000000:500 --expect " +
                            expect_path);
  CHECK(miss.code == 1);
  CHECK(miss.output.find("MISS") != std::string::npos);
  const auto wide = run_cli("run-funnel --pool 9810000000:500 --tolerance 1.0 "
                            "--expect " + expect_path);
  CHECK(wide.code == 0);
}

TEST_CASE("run-funnel takes its pool from a generated file") {
  TempDir dir;
  const auto pool_path = dir.file("pool.txt");
  REQUIRE(run_cli("gen-numbers --seed-number 9893000000 --count 200 --out " +
                  pool_path).code == 0);
  const auto r = run_cli("run-funnel --pool " + pool_path);
  CHECK(r.code == 0);
  CHECK(r.output.find("funnel over 200 numbers") != std::string::npos);
}

TEST_CASE("serial and parallel runs agree across processes") {
  TempDir dir;
  const auto serial_report = dir.file("serial.json");
  const auto kernel_report = dir.file("kernel.json");
  const auto serial_dossiers = dir.file("serial.jsonl");
  const auto kernel_dossiers = dir.file("kernel.jsonl");
  REQUIRE(run_cli("run-funnel --pool 9810000000:400 --serial --credentials 2 "
                  "--rate-max 50 --report " + serial_report +
                  " --dossiers " + serial_dossiers).code == 0);
  REQUIRE(run_cli("run-funnel --pool 9810000000:400 --workers 4 --credentials 2 "
                  "--rate-max 50 --report " + kernel_report +
                  " --dossiers " + kernel_dossiers).code == 0);
  CHECK(testsupport::read_file(serial_report) ==
        testsupport::read_file(kernel_report));
  CHECK(testsupport::read_file(serial_dossiers) ==
        testsupport::read_file(kernel_dossiers));
}

TEST_CASE("the seed comes from the flag, the environment, or the default") {
  TempDir dir;
  const auto report_path = dir.file("report.json");
  const auto seed_of = [&](const std::string& prefix,
                           const std::string& extra) -> std::uint64_t {
    const auto r = testsupport::run_command(
        prefix + std::string(NUMFUNNEL_CLI_PATH) +
        " run-funnel --pool 9810000000:10 " + extra + " --report " +
        report_path);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(testsupport::read_file(report_path))["run"]
        ["seed"].get<std::uint64_t>();
  };
  CHECK(seed_of("", "") == 42);
  CHECK(seed_of("NUMFUNNEL_SEED=7 ", "") == 7);
  CHECK(seed_of("NUMFUNNEL_SEED=7 ", "--seed 9") == 9);
  const auto bad_env = testsupport::run_command(
      std::string("NUMFUNNEL_SEED=7q ") + NUMFUNNEL_CLI_PATH +
      " run-funnel --pool 9810000000:10");
  CHECK(bad_env.code == 2);
}

TEST_CASE("registry claims persist and spoofed calls get flagged") {
  TempDir dir;
  const auto registry = dir.file("registry.json");
  const auto add = run_cli("registry-add --registry " + registry +
                           " --number 9899000001 --name 'Acme Power Board'");
  CHECK(add.code == 0);
  CHECK(add.output.find("+919899000001") != std::string::npos);

  const auto spoofed = run_cli("call-demo --registry " + registry +
                               " --true-source 9812345678 --claim 9899000001");
  CHECK(spoofed.code == 0);
  CHECK(spoofed.output.find("+919899000001") != std::string::npos);
  CHECK(spoofed.output.find("Acme Power Board") != std::string::npos);
  CHECK(spoofed.output.find("SPOOFED") != std::string::npos);

  const auto genuine = run_cli("call-demo --registry " + registry +
                               " --true-source 9899000001");
  CHECK(genuine.code == 0);
  CHECK(genuine.output.find("genuine source number") != std::string::npos);
  CHECK(genuine.output.find("Acme Power Board") != std::string::npos);

  const auto unknown = run_cli("call-demo --registry " + registry +
                               " --true-source 9812345678");
  CHECK(unknown.code == 0);
  CHECK(unknown.output.find("(no caller id)") != std::string::npos);

  testsupport::write_file(registry, "{broken");
  CHECK(run_cli("call-demo --registry " + registry +
                " --true-source 9812345678").code == 2);
}

TEST_SUITE_END();

#endif  // NUMFUNNEL_CLI_PATH
