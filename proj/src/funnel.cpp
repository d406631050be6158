#include "numfunnel/funnel.hpp"

#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "numfunnel/attack_planner.hpp"
#include "numfunnel/errors.hpp"
#include "numfunnel/rng.hpp"

namespace numfunnel {

namespace {

constexpr const char* kBucketKeys[4] = {"gt95", "90to95", "85to90", "lt85"};
constexpr const char* kClassRows[4] = {"social", "spear", "nontargeted",
                                       "whaling"};
constexpr Channel kChannels[4] = {Channel::ott, Channel::email, Channel::sms,
                                  Channel::voice};

int class_row(AttackBase base) {
  switch (base) {
    case AttackBase::social: return 0;
    case AttackBase::spear: return 1;
    case AttackBase::nontargeted: return 2;
  }
  return 2;
}

int channel_col(Channel c) {
  switch (c) {
    case Channel::ott: return 0;
    case Channel::email: return 1;
    case Channel::sms: return 2;
    case Channel::voice: return 3;
  }
  return 3;
}

struct NumberFindings {
  VictimDossier dossier;
  bool ott = false;
  std::optional<OverlapResult> overlap;
};

// Checks shared by the serial reference and the parallel kernel, built
// only from client responses so the two paths cannot diverge: messenger
// presence, plus the friend-door overlap when both doors are open.
NumberFindings finish_findings(VictimDossier d, const SocialClient& social,
                               const OttClient& ott) {
  NumberFindings f;
  f.ott = ott.present(d.number);
  d.channels_checked[Channel::ott] = f.ott;
  if (d.social_id) {
    auto fl = social.fetch_friends(*d.social_id, FriendQuery::friendlist);
    auto ps = social.fetch_friends(*d.social_id, FriendQuery::public_sources);
    if (fl.status == FriendsStatus::ok && !fl.friends.empty() &&
        !ps.friends.empty()) {
      f.overlap = overlap_analysis(ps.friends, fl.friends);
    }
  }
  f.dossier = std::move(d);
  return f;
}

void tally(StageCounts& s, const NumberFindings& f) {
  const VictimDossier& d = f.dossier;
  s.pool += 1;
  if (!d.name) return;
  s.lookup_hits += 1;
  s.named += 1;
  if (d.social_id) {
    s.social_linked += 1;
    if (f.ott) s.ott_social_linked += 1;
  } else {
    s.named_only += 1;
    if (f.ott) s.ott_named_only += 1;
  }
  switch (d.friends.source) {
    case FriendOrigin::friendlist:
      s.friends_resolved += 1;
      s.friends_via_friendlist += 1;
      break;
    case FriendOrigin::public_sources:
      s.friends_resolved += 1;
      s.friends_via_public_sources += 1;
      break;
    case FriendOrigin::none:
      break;
  }
  if (d.email) s.email_found += 1;
  if (f.ott) s.ott_present += 1;
  for (const auto& [attr, value] : d.attributes) {
    s.attribute_coverage[attr] += 1;
  }
  if (f.overlap) {
    s.overlap_analyzed += 1;
    s.overlap_buckets[static_cast<int>(f.overlap->bucket)] += 1;
  }
  const AttackClass cls = classify_attack(d);
  const auto channels = reachable_channels(d, f.ott);
  const int row = class_row(cls.base);
  const int pri = channel_col(priority_channel(channels));
  s.classes_disjoint[row][pri] += 1;
  if (cls.whaling) s.classes_disjoint[3][pri] += 1;
  for (Channel c : channels) {
    s.classes_overlapping[row][channel_col(c)] += 1;
    if (cls.whaling) s.classes_overlapping[3][channel_col(c)] += 1;
  }
}

// Spend one directory token per pool entry, rotating credentials and
// jumping to the next window when the whole pool is out of budget. This
// is the exact policy the serial reference enacts through build_dossier.
void meter_pool_budget(std::size_t n, RateLimiter& limiter,
                       const CredentialPool& creds, VirtualClock& clock) {
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      bool granted = false;
      for (const auto& cred : creds.credentials()) {
        if (limiter.try_consume(cred.id, clock)) {
          granted = true;
          break;
        }
      }
      if (granted) break;
      clock.advance_to_next_window(limiter.policy().window_ms);
    }
  }
}

nlohmann::ordered_json stage_json(const StageCounts& s) {
  nlohmann::ordered_json j;
  j["pool"] = s.pool;
  j["lookup_hits"] = s.lookup_hits;
  j["named"] = s.named;
  j["named_only"] = s.named_only;
  j["social_linked"] = s.social_linked;
  j["friends_resolved"] = s.friends_resolved;
  j["friends_via_friendlist"] = s.friends_via_friendlist;
  j["friends_via_public_sources"] = s.friends_via_public_sources;
  j["email_found"] = s.email_found;
  j["ott_present"] = s.ott_present;
  j["ott_social_linked"] = s.ott_social_linked;
  j["ott_named_only"] = s.ott_named_only;
  nlohmann::ordered_json buckets;
  for (int i = 0; i < 4; ++i) buckets[kBucketKeys[i]] = s.overlap_buckets[i];
  buckets["analyzed"] = s.overlap_analyzed;
  j["overlap_buckets"] = std::move(buckets);
  j["attribute_coverage"] = s.attribute_coverage;
  const auto matrix_json = [](const auto& m) {
    nlohmann::ordered_json out;
    for (int r = 0; r < 4; ++r) {
      nlohmann::ordered_json row;
      for (int c = 0; c < 4; ++c) row[channel_name(kChannels[c])] = m[r][c];
      out[kClassRows[r]] = std::move(row);
    }
    return out;
  };
  j["classes_disjoint"] = matrix_json(s.classes_disjoint);
  j["classes_overlapping"] = matrix_json(s.classes_overlapping);
  return j;
}

std::vector<std::string> report_notes() {
  return {
      "bystander mix below the 85 percent bucket is a synthetic construction, "
      "not an observed quantity",
      "overlap buckets are per-victim counts; totals from the two friend "
      "doors are not comparable set sizes",
      "classes_disjoint assigns each victim its single priority channel; "
      "classes_overlapping counts every reachable channel",
  };
}

FunnelReport run_impl(const WorldConfig& world_cfg,
                      const std::vector<PhoneNumber>& pool,
                      const RunConfig& run_cfg,
                      std::vector<std::string>* dossier_lines, bool parallel) {
  world_cfg.validate();
  run_cfg.validate();

  GenerativeWorld world(world_cfg);
  VirtualClock clock;
  DirectoryClient directory(world, run_cfg.rate_policy, clock);
  SocialClient social(world);
  OttClient ott(world);

  CredentialPool creds(run_cfg.credential_limit);
  if (!pool.empty()) {
    for (std::size_t i = 0; i < run_cfg.credential_limit; ++i) {
      creds.acquire(clock);
    }
    if (creds.size() == 0) {
      throw PoolExhausted("funnel needs at least one credential");
    }
  }

  // Full per-run pattern list: the world's own tagging plus any extra
  // run-side patterns.
  const std::vector<VanityPattern>& patterns =
      run_cfg.vanity_patterns.empty() ? world_cfg.vanity_patterns
                                      : run_cfg.vanity_patterns;

  StageCounts all, vanity;
  for (const auto& [attr, rate] : world_cfg.attribute_rates) {
    all.attribute_coverage[attr] = 0;
    vanity.attribute_coverage[attr] = 0;
  }
  if (dossier_lines) dossier_lines->assign(pool.size(), {});

  if (parallel) {
    meter_pool_budget(pool.size(), directory.limiter(), creds, clock);
    const std::int64_t n = static_cast<std::int64_t>(pool.size());
#ifdef _OPENMP
#pragma omp parallel num_threads(run_cfg.workers)
#endif
    {
      StageCounts local_all, local_vanity;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
      for (std::int64_t i = 0; i < n; ++i) {
        const auto record = directory.lookup_unmetered(pool[i]);
        const NumberFindings f = finish_findings(
            assemble_dossier(pool[i], record, social, patterns), social, ott);
        tally(local_all, f);
        if (f.dossier.is_vanity) tally(local_vanity, f);
        if (dossier_lines) {
          (*dossier_lines)[i] =
              dossier_to_json(f.dossier, run_cfg.hash_ids).dump();
        }
      }
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        all.merge(local_all);
        vanity.merge(local_vanity);
      }
    }
  } else {
    Services services{&directory, &social, &ott, &patterns};
    for (std::size_t i = 0; i < pool.size(); ++i) {
      VictimDossier d;
      for (;;) {
        try {
          d = build_dossier(pool[i], services, creds);
          break;
        } catch (const RateLimitedError&) {
          clock.advance_to_next_window(run_cfg.rate_policy.window_ms);
        }
      }
      const NumberFindings f = finish_findings(std::move(d), social, ott);
      tally(all, f);
      if (f.dossier.is_vanity) tally(vanity, f);
      if (dossier_lines) {
        (*dossier_lines)[i] = dossier_to_json(f.dossier, run_cfg.hash_ids).dump();
      }
    }
  }

  FunnelReport report;
  report.seed = world_cfg.seed;
  report.config_digest = world_cfg.digest();
  report.pool_size = pool.size();
  report.workers = run_cfg.workers;
  report.virtual_ms = clock.now_ms();
  report.windows_used = directory.limiter().windows_touched();
  report.credentials_used = directory.limiter().credentials_granted();
  report.all = std::move(all);
  report.vanity = std::move(vanity);
  report.notes = report_notes();
  return report;
}

double resolve_path(const nlohmann::json& report, const std::string& path) {
  const nlohmann::json* node = &report;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto dot = path.find('.', start);
    const std::string key =
        path.substr(start, dot == std::string::npos ? std::string::npos
                                                    : dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw ConfigInvalid("report has no field at \"" + path + "\"");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_number()) {
    throw ConfigInvalid("\"" + path + "\" is not a number");
  }
  return node->get<double>();
}

}  // namespace

void RunConfig::validate() const {
  if (workers < 1) throw ConfigInvalid("workers must be >= 1");
  rate_policy.validate();
}

void StageCounts::merge(const StageCounts& other) {
  pool += other.pool;
  lookup_hits += other.lookup_hits;
  named += other.named;
  named_only += other.named_only;
  social_linked += other.social_linked;
  friends_resolved += other.friends_resolved;
  friends_via_friendlist += other.friends_via_friendlist;
  friends_via_public_sources += other.friends_via_public_sources;
  email_found += other.email_found;
  ott_present += other.ott_present;
  ott_social_linked += other.ott_social_linked;
  ott_named_only += other.ott_named_only;
  for (int i = 0; i < 4; ++i) overlap_buckets[i] += other.overlap_buckets[i];
  overlap_analyzed += other.overlap_analyzed;
  for (const auto& [attr, count] : other.attribute_coverage) {
    attribute_coverage[attr] += count;
  }
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      classes_disjoint[r][c] += other.classes_disjoint[r][c];
      classes_overlapping[r][c] += other.classes_overlapping[r][c];
    }
  }
}

nlohmann::ordered_json FunnelReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json run;
  run["seed"] = seed;
  run["config_digest"] = config_digest;
  run["pool_size"] = pool_size;
  run["virtual_ms"] = virtual_ms;
  run["windows_used"] = windows_used;
  run["credentials_used"] = credentials_used;
  j["run"] = std::move(run);
  j["stages"] = stage_json(all);
  j["vanity"] = stage_json(vanity);
  j["notes"] = notes;
  return j;
}

std::string FunnelReport::to_table() const {
  std::ostringstream os;
  const auto line = [&](const char* label, std::uint64_t v, std::uint64_t base) {
    os << "  " << label;
    for (std::size_t i = std::string(label).size(); i < 28; ++i) os << ' ';
    os << v;
    if (base > 0) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "  (%.2f%%)",
                    100.0 * static_cast<double>(v) / static_cast<double>(base));
      os << buf;
    }
    os << '\n';
  };
  os << "funnel over " << pool_size << " numbers (seed " << seed << ")\n";
  line("lookup hits", all.lookup_hits, all.pool);
  line("social linked", all.social_linked, all.lookup_hits);
  line("friends resolved", all.friends_resolved, all.social_linked);
  line("  via friend list", all.friends_via_friendlist, all.social_linked);
  line("  via public sources", all.friends_via_public_sources, all.social_linked);
  line("e-mail found", all.email_found, all.lookup_hits);
  line("ott present", all.ott_present, all.lookup_hits);
  line("  among social linked", all.ott_social_linked, all.social_linked);
  line("  among named only", all.ott_named_only, all.named_only);
  os << "  overlap buckets (" << all.overlap_analyzed << " analyzed): ";
  for (int i = 0; i < 4; ++i) {
    os << kBucketKeys[i] << "=" << all.overlap_buckets[i]
       << (i == 3 ? "\n" : " ");
  }
  if (vanity.pool > 0) {
    os << "vanity sub-funnel over " << vanity.pool << " numbers\n";
    line("lookup hits", vanity.lookup_hits, vanity.pool);
    line("social linked", vanity.social_linked, vanity.lookup_hits);
    line("ott present", vanity.ott_present, vanity.lookup_hits);
  }
  os << "virtual time " << virtual_ms << " ms, " << windows_used
     << " window(s), " << credentials_used << " credential(s)\n";
  return os.str();
}

FunnelReport run_funnel_serial(const WorldConfig& world_cfg,
                               const std::vector<PhoneNumber>& pool,
                               const RunConfig& run_cfg,
                               std::vector<std::string>* dossier_lines) {
  return run_impl(world_cfg, pool, run_cfg, dossier_lines, false);
}

FunnelReport run_funnel(const WorldConfig& world_cfg,
                        const std::vector<PhoneNumber>& pool,
                        const RunConfig& run_cfg,
                        std::vector<std::string>* dossier_lines) {
  return run_impl(world_cfg, pool, run_cfg, dossier_lines, true);
}

Expectations Expectations::load(std::istream& in) {
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("checks")) {
    throw ConfigInvalid("expectations file must be JSON with a \"checks\" array");
  }
  Expectations e;
  e.tolerance = j.value("tolerance", 0.015);
  for (const auto& c : j.at("checks")) {
    ExpectationCheck check;
    check.name = c.at("name").get<std::string>();
    check.numerator = c.at("numerator").get<std::string>();
    check.denominator = c.value("denominator", "");
    check.target = c.at("target").get<double>();
    e.checks.push_back(std::move(check));
  }
  if (e.checks.empty()) throw ConfigInvalid("expectations file has no checks");
  return e;
}

Expectations Expectations::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open expectations file: " + path);
  return load(in);
}

std::string CompareOutcome::to_table() const {
  std::ostringstream os;
  for (const auto& d : deviations) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-32s actual %.6f target %.6f  |d|=%.6f %s\n",
                  d.name.c_str(), d.actual, d.target, d.delta,
                  d.ok ? "ok" : "MISS");
    os << buf;
  }
  os << (pass ? "expectations met" : "expectations missed") << '\n';
  return os.str();
}

CompareOutcome compare_report(const nlohmann::json& report,
                              const Expectations& expected,
                              std::optional<double> tolerance_override) {
  const double tolerance = tolerance_override.value_or(expected.tolerance);
  CompareOutcome outcome;
  for (const auto& check : expected.checks) {
    Deviation d;
    d.name = check.name;
    d.target = check.target;
    const double num = resolve_path(report, check.numerator);
    if (check.denominator.empty()) {
      d.actual = num;
    } else {
      const double den = resolve_path(report, check.denominator);
      d.actual = den == 0.0 ? 0.0 : num / den;
    }
    d.delta = std::abs(d.actual - d.target);
    d.ok = d.delta <= tolerance;
    if (!d.ok) outcome.pass = false;
    outcome.deviations.push_back(std::move(d));
  }
  return outcome;
}

}  // namespace numfunnel
