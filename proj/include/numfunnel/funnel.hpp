#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "numfunnel/correlator.hpp"
#include "numfunnel/number_space.hpp"
#include "numfunnel/phone_number.hpp"
#include "numfunnel/service_clients.hpp"
#include "numfunnel/synth_world.hpp"

namespace numfunnel {

struct RunConfig {
  int workers = 1;
  std::size_t credential_limit = 3;
  RateLimitPolicy rate_policy;
  std::vector<VanityPattern> vanity_patterns;
  bool hash_ids = false;

  void validate() const;
};

// Per-stage tallies. All counters are integral, so merging per-thread
// partials is order-independent.
struct StageCounts {
  std::uint64_t pool = 0;
  std::uint64_t lookup_hits = 0;
  std::uint64_t named = 0;
  std::uint64_t named_only = 0;       // hit but no social link
  std::uint64_t social_linked = 0;
  std::uint64_t friends_resolved = 0;
  std::uint64_t friends_via_friendlist = 0;
  std::uint64_t friends_via_public_sources = 0;
  std::uint64_t email_found = 0;
  std::uint64_t ott_present = 0;
  std::uint64_t ott_social_linked = 0;
  std::uint64_t ott_named_only = 0;
  std::array<std::uint64_t, 4> overlap_buckets{};  // gt95, 90to95, 85to90, lt85
  std::uint64_t overlap_analyzed = 0;
  std::map<std::string, std::uint64_t> attribute_coverage;
  // Rows: social, spear, nontargeted, plus the whaling overlay (whaling
  // targets are counted again in their base row). Columns: channels.
  // "disjoint" assigns each victim its single priority channel;
  // "overlapping" counts every reachable channel.
  std::array<std::array<std::uint64_t, 4>, 4> classes_disjoint{};
  std::array<std::array<std::uint64_t, 4>, 4> classes_overlapping{};

  void merge(const StageCounts& other);
};

struct FunnelReport {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::uint64_t pool_size = 0;
  int workers = 1;
  std::int64_t virtual_ms = 0;
  std::uint64_t windows_used = 0;
  std::uint64_t credentials_used = 0;
  StageCounts all;
  StageCounts vanity;  // sub-funnel over the numbers tagged memorable
  std::vector<std::string> notes;

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

// Reference implementation: one metered dossier at a time, budget spent
// through the same client path an interactive caller would use.
FunnelReport run_funnel_serial(const WorldConfig& world_cfg,
                               const std::vector<PhoneNumber>& pool,
                               const RunConfig& run_cfg,
                               std::vector<std::string>* dossier_lines = nullptr);

// Production kernel: budget is metered up front (same policy, same
// limiter), then the per-number pipeline fans out across OpenMP workers.
// Byte-identical output to the serial reference for any worker count.
FunnelReport run_funnel(const WorldConfig& world_cfg,
                        const std::vector<PhoneNumber>& pool,
                        const RunConfig& run_cfg,
                        std::vector<std::string>* dossier_lines = nullptr);

struct ExpectationCheck {
  std::string name;
  std::string numerator;    // dotted path into the report JSON
  std::string denominator;  // dotted path, or "" for an absolute count
  double target = 0.0;
};

struct Expectations {
  double tolerance = 0.015;  // absolute deviation allowed per stage
  std::vector<ExpectationCheck> checks;

  static Expectations load(std::istream& in);  // throws ConfigInvalid
  static Expectations load_file(const std::string& path);
};

struct Deviation {
  std::string name;
  double actual = 0.0;
  double target = 0.0;
  double delta = 0.0;
  bool ok = false;
};

struct CompareOutcome {
  bool pass = true;
  std::vector<Deviation> deviations;

  std::string to_table() const;
};

CompareOutcome compare_report(const nlohmann::json& report,
                              const Expectations& expected,
                              std::optional<double> tolerance_override =
                                  std::nullopt);

}  // namespace numfunnel
