#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "numfunnel/attack_planner.hpp"
#include "numfunnel/config_io.hpp"
#include "numfunnel/correlator.hpp"
#include "numfunnel/errors.hpp"
#include "numfunnel/funnel.hpp"
#include "numfunnel/number_space.hpp"
#include "numfunnel/service_clients.hpp"
#include "numfunnel/study_kit.hpp"
#include "numfunnel/synth_world.hpp"

namespace {

using namespace numfunnel;

constexpr int kExitOk = 0;
constexpr int kExitAnalytic = 1;
constexpr int kExitUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NUMFUNNEL_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const std::uint64_t v = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ConfigInvalid(std::string("NUMFUNNEL_SEED is not a number: \"") +
                          env + "\"");
    }
  }
  return 42;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigInvalid("cannot write to " + path);
  return out;
}

// "<number>:<count>" is an enumeration spec; anything else is a file of
// numbers, one per line.
std::vector<PhoneNumber> load_pool(const std::string& spec, int country_code) {
  const auto colon = spec.rfind(':');
  if (colon != std::string::npos) {
    try {
      NumberRange range;
      range.seed = parse_number(spec.substr(0, colon), country_code);
      const std::string count = spec.substr(colon + 1);
      std::size_t used = 0;
      range.count = std::stoull(count, &used);
      if (used != count.size()) throw std::invalid_argument(count);
      return enumerate_from_seed(range);
    } catch (const MalformedNumber&) {
      // fall through to the file reader
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  return read_number_list_file(spec, country_code);
}

struct GenNumbersArgs {
  std::string seed_number;
  std::uint64_t count = 0;
  std::string vanity_file;
  std::vector<std::string> patterns;
  bool mobile_only = false;
  std::uint64_t limit = 0;  // 0 = unlimited, applied per pattern
  int country_code = 91;
  std::string out_path;
};

int run_gen_numbers(const GenNumbersArgs& args) {
  std::vector<PhoneNumber> numbers;
  if (!args.seed_number.empty()) {
    NumberRange range;
    range.seed = parse_number(args.seed_number, args.country_code);
    range.count = args.count;
    numbers = enumerate_from_seed(range);
  } else {
    std::vector<VanityPattern> patterns;
    if (!args.vanity_file.empty()) patterns = load_pattern_file(args.vanity_file);
    for (const auto& p : args.patterns) {
      patterns.push_back(VanityPattern::parse(p));
    }
    if (patterns.empty()) {
      throw ConfigInvalid("nothing to generate: give --seed-number or patterns");
    }
    std::set<PhoneNumber> merged;
    for (const auto& p : patterns) {
      const auto limit = args.limit == 0
                             ? std::nullopt
                             : std::optional<std::uint64_t>(args.limit);
      for (auto& n : expand_vanity_pattern(p, args.mobile_only, limit,
                                           args.country_code)) {
        merged.insert(std::move(n));
      }
    }
    numbers.assign(merged.begin(), merged.end());
  }
  if (args.out_path.empty()) {
    write_number_list(std::cout, numbers);
  } else {
    auto out = open_out(args.out_path);
    write_number_list(out, numbers);
    std::cout << numbers.size() << " numbers -> " << args.out_path << '\n';
  }
  return kExitOk;
}

struct RunFunnelArgs {
  std::string world_config;
  std::optional<std::uint64_t> seed;
  std::string pool_spec;
  int workers = 1;
  std::size_t credentials = 3;
  int rate_max = 3000;
  std::int64_t rate_window_ms = 60'000;
  std::string patterns_file;
  std::string report_path;
  std::string dossiers_path;
  bool hash_ids = false;
  std::string expect_path;
  std::optional<double> tolerance;
  bool serial = false;
};

int run_run_funnel(const RunFunnelArgs& args) {
  WorldConfig world_cfg;
  if (!args.world_config.empty()) {
    world_cfg = load_world_config_file(args.world_config);
  }
  world_cfg.seed = args.seed ? *args.seed : (args.world_config.empty()
                                                 ? default_seed()
                                                 : world_cfg.seed);

  RunConfig run_cfg;
  run_cfg.workers = args.workers;
  run_cfg.credential_limit = args.credentials;
  run_cfg.rate_policy.max_requests = args.rate_max;
  run_cfg.rate_policy.window_ms = args.rate_window_ms;
  run_cfg.hash_ids = args.hash_ids;
  if (!args.patterns_file.empty()) {
    run_cfg.vanity_patterns = load_pattern_file(args.patterns_file);
  }

  const auto pool = load_pool(args.pool_spec, world_cfg.country_code);

  std::vector<std::string> dossier_lines;
  std::vector<std::string>* lines_out =
      args.dossiers_path.empty() ? nullptr : &dossier_lines;

  const auto started = std::chrono::steady_clock::now();
  const FunnelReport report =
      args.serial ? run_funnel_serial(world_cfg, pool, run_cfg, lines_out)
                  : run_funnel(world_cfg, pool, run_cfg, lines_out);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  std::cout << report.to_table();
  std::cout << "processed in " << elapsed << " ms wall time\n";

  if (!args.report_path.empty()) {
    auto out = open_out(args.report_path);
    out << report.to_json().dump(2) << '\n';
  }
  if (!args.dossiers_path.empty()) {
    auto out = open_out(args.dossiers_path);
    for (const auto& line : dossier_lines) out << line << '\n';
  }
  if (!args.expect_path.empty()) {
    const Expectations expected = Expectations::load_file(args.expect_path);
    const CompareOutcome outcome =
        compare_report(report.to_json(), expected, args.tolerance);
    std::cout << outcome.to_table();
    if (!outcome.pass) return kExitAnalytic;
  }
  return kExitOk;
}

struct StudyArgs {
  std::string responses_path;
  std::string out_path;
};

int run_study_analyze(const StudyArgs& args) {
  const auto responses = load_responses_file(args.responses_path);
  const StudySummary summary = summarize(responses);
  std::cout << summary.to_table();
  if (!args.out_path.empty()) {
    auto out = open_out(args.out_path);
    out << summary.to_json().dump(2) << '\n';
  }
  return kExitOk;
}

struct RegistryAddArgs {
  std::string registry_path = "numfunnel_registry.json";
  std::string number;
  std::string name;
  std::string linked_social;
};

CallerRegistry load_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw CorruptFixture("registry file is not valid JSON: " + path);
  }
  return CallerRegistry::from_json(j);
}

int run_registry_add(const RegistryAddArgs& args) {
  CallerRegistry registry = load_registry(args.registry_path);
  VirtualClock clock;
  const auto entry = registry.register_caller_profile(
      parse_number(args.number), args.name,
      args.linked_social.empty() ? std::nullopt
                                 : std::optional<std::string>(args.linked_social),
      clock);
  auto out = open_out(args.registry_path);
  out << registry.to_json().dump(2) << '\n';
  std::cout << "registered " << entry.number.canonical() << " as \""
            << entry.display_name << "\" (" << registry.size()
            << " entries)\n";
  return kExitOk;
}

struct CallDemoArgs {
  std::string registry_path = "numfunnel_registry.json";
  std::string true_source;
  std::string claim;
  std::string world_config;
};

int run_call_demo(const CallDemoArgs& args) {
  const CallerRegistry registry = load_registry(args.registry_path);
  std::optional<GenerativeWorld> world;
  if (!args.world_config.empty()) {
    world.emplace(load_world_config_file(args.world_config));
  }
  const PhoneNumber true_source = parse_number(args.true_source);
  const std::optional<PhoneNumber> claimed =
      args.claim.empty() ? std::nullopt
                         : std::optional<PhoneNumber>(parse_number(args.claim));
  const CallPresentation shown =
      present_call(true_source, claimed, registry, world ? &*world : nullptr);
  std::cout << "incoming call\n"
            << "  number " << shown.displayed_number << '\n'
            << "  name   "
            << (shown.displayed_name.empty() ? "(no caller id)"
                                             : shown.displayed_name)
            << '\n'
            << "  " << (shown.spoofed ? "SPOOFED: displayed number differs from the true source"
                                      : "genuine source number")
            << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale simulator of a phone-number attack funnel"};
  app.require_subcommand(1);

  GenNumbersArgs gen_args;
  auto* gen = app.add_subcommand("gen-numbers",
                                 "enumerate number pools or expand patterns");
  gen->add_option("--seed-number", gen_args.seed_number,
                  "first number of a consecutive range");
  gen->add_option("--count", gen_args.count, "how many consecutive numbers");
  gen->add_option("--vanity-file", gen_args.vanity_file,
                  "file of digit patterns, one per line");
  gen->add_option("--pattern", gen_args.patterns,
                  "digit pattern such as xx858585xx (repeatable)");
  gen->add_flag("--mobile-only", gen_args.mobile_only,
                "keep numbers with a mobile leading digit");
  gen->add_option("--limit", gen_args.limit, "cap per pattern expansion");
  gen->add_option("--country-code", gen_args.country_code, "default 91");
  gen->add_option("--out", gen_args.out_path, "output file (default stdout)");

  RunFunnelArgs funnel_args;
  auto* funnel = app.add_subcommand("run-funnel",
                                    "run the enumeration-to-dossier pipeline");
  funnel->add_option("--world-config", funnel_args.world_config,
                     "key=value world description");
  funnel->add_option("--seed", funnel_args.seed,
                     "world seed (overrides config and NUMFUNNEL_SEED)");
  funnel->add_option("--pool", funnel_args.pool_spec,
                     "\"<number>:<count>\" or a file of numbers")
      ->required();
  funnel->add_option("--workers", funnel_args.workers, "parallel workers");
  funnel->add_option("--credentials", funnel_args.credentials,
                     "lookup credentials to rotate through");
  funnel->add_option("--rate-max", funnel_args.rate_max,
                     "requests per window per credential");
  funnel->add_option("--rate-window-ms", funnel_args.rate_window_ms,
                     "rate window length");
  funnel->add_option("--patterns", funnel_args.patterns_file,
                     "vanity patterns for the run (default: world's)");
  funnel->add_option("--report", funnel_args.report_path, "write JSON report");
  funnel->add_option("--dossiers", funnel_args.dossiers_path,
                     "write per-number dossiers as JSONL");
  funnel->add_flag("--hash-ids", funnel_args.hash_ids,
                   "hash numbers and social ids in dossier output");
  funnel->add_option("--expect", funnel_args.expect_path,
                     "expectations JSON to compare the report against");
  funnel->add_option("--tolerance", funnel_args.tolerance,
                     "absolute per-stage tolerance override");
  funnel->add_flag("--serial", funnel_args.serial,
                   "use the serial reference implementation");

  StudyArgs study_args;
  auto* study = app.add_subcommand("study-analyze",
                                   "classify participant responses");
  study->add_option("--responses", study_args.responses_path,
                    ".csv or .jsonl responses")
      ->required();
  study->add_option("--out", study_args.out_path, "write JSON summary");

  RegistryAddArgs registry_args;
  auto* registry = app.add_subcommand("registry-add",
                                      "claim a caller name for a number");
  registry->add_option("--registry", registry_args.registry_path,
                       "registry state file");
  registry->add_option("--number", registry_args.number, "number to claim")
      ->required();
  registry->add_option("--name", registry_args.name, "display name")
      ->required();
  registry->add_option("--linked-social", registry_args.linked_social,
                       "social id to attach");

  CallDemoArgs call_args;
  auto* call = app.add_subcommand("call-demo",
                                  "show what a callee's screen displays");
  call->add_option("--registry", call_args.registry_path, "registry state file");
  call->add_option("--true-source", call_args.true_source,
                   "number actually placing the call")
      ->required();
  call->add_option("--claim", call_args.claim,
                   "number presented instead (spoof)");
  call->add_option("--world-config", call_args.world_config,
                   "world for directory name fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen_numbers(gen_args);
    if (funnel->parsed()) return run_run_funnel(funnel_args);
    if (study->parsed()) return run_study_analyze(study_args);
    if (registry->parsed()) return run_registry_add(registry_args);
    if (call->parsed()) return run_call_demo(call_args);
  } catch (const EmptyCohort& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAnalytic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
