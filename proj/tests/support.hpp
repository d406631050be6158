#pragma once

// Shared helpers for the test binaries: temp dirs, CLI invocation, and
// the reference study cohort.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "numfunnel/study_kit.hpp"

namespace testsupport {

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "numfunnel-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) {
      throw std::runtime_error("mkdtemp failed");
    }
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

inline CliResult run_command(const std::string& command) {
  const std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + command);
  CliResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

#ifdef NUMFUNNEL_CLI_PATH
inline CliResult run_cli(const std::string& args) {
  return run_command(std::string(NUMFUNNEL_CLI_PATH) + " " + args);
}
#endif

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// The published classification grid: engagement combinations per
// experiment with their participant counts, plus the briefing failures.
inline std::vector<numfunnel::ParticipantResponse> reference_cohort() {
  using namespace numfunnel;
  std::vector<ParticipantResponse> out;
  int id = 0;
  const auto add = [&](ExperimentKind e, int n, bool briefing_ok, bool p,
                       bool l, bool f) {
    for (int i = 0; i < n; ++i) {
      ParticipantResponse r;
      char buf[16];
      std::snprintf(buf, sizeof buf, "p%03d", ++id);
      r.participant_id = buf;
      r.experiment = e;
      r.briefing_answers_correct = briefing_ok;
      if (briefing_ok) {
        const Action engage = i % 2 ? Action::reply : Action::click;
        const Action pass = i % 2 ? Action::nothing : Action::erase;
        r.actions[Scenario::prob] = p ? engage : pass;
        r.actions[Scenario::legit] = l ? engage : pass;
        if (e == ExperimentKind::e3) r.actions[Scenario::phish] = f ? engage : pass;
      }
      out.push_back(std::move(r));
    }
  };
  using K = numfunnel::ExperimentKind;
  add(K::e1, 37, true, true, true, false);
  add(K::e1, 24, true, false, true, false);
  add(K::e1, 46, true, false, false, false);
  add(K::e1, 7, true, true, false, false);
  add(K::e1, 43, false, false, false, false);
  add(K::e2, 56, true, true, true, false);
  add(K::e2, 19, true, false, true, false);
  add(K::e2, 28, true, false, false, false);
  add(K::e2, 4, true, true, false, false);
  add(K::e2, 43, false, false, false, false);
  add(K::e3, 54, true, true, true, true);
  add(K::e3, 9, true, true, true, false);
  add(K::e3, 9, true, false, true, true);
  add(K::e3, 12, true, false, true, false);
  add(K::e3, 20, true, false, false, false);
  add(K::e3, 2, true, true, false, false);
  add(K::e3, 1, true, false, false, true);
  add(K::e3, 3, true, true, false, true);
  add(K::e3, 43, false, false, false, false);
  return out;
}

}  // namespace testsupport
