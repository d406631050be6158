#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "numfunnel/number_space.hpp"
#include "numfunnel/phone_number.hpp"

namespace numfunnel {

// Bernoulli rates and shape parameters for the generated population.
// Defaults reproduce the coverage ratios the funnel is calibrated against.
struct WorldConfig {
  std::uint64_t seed = 42;
  int country_code = 91;
  std::string country = "India";

  // Chance a number resolves to a directory record at all. Records always
  // carry a display name.
  double lookup_hit_rate = 0.62;
  // Of the records: chance the directory entry links a social profile.
  double social_link_rate = 122696.0 / 722696.0;
  // Of the linked profiles: chance the friend list is public, and chance
  // likers/commenters are recoverable from public posts.
  double friendlist_public_rate = 80979.0 / 122696.0;
  double public_sources_rate = 95756.0 / 122696.0;
  // Messenger presence, split by whether the profile link exists.
  double ott_rate_social = 51409.0 / 122696.0;
  double ott_rate_named = 180000.0 / 600000.0;
  // Of the records: chance an e-mail address is exposed.
  double email_rate = 81389.0 / 722696.0;

  // Profile attribute exposure, per linked profile.
  std::map<std::string, double> attribute_rates = {
      {"gender", 112880.0 / 122696.0},    {"relationship", 57755.0 / 122696.0},
      {"work", 92352.0 / 122696.0},       {"school", 110426.0 / 122696.0},
      {"employer", 106746.0 / 122696.0},  {"birthday", 9728.0 / 122696.0},
      {"hometown", 80979.0 / 122696.0},
  };

  // Ground-truth friend list size range (uniform) and the id pool friends
  // are drawn from.
  int friends_min = 100;
  int friends_max = 160;
  std::uint64_t friend_pool_size = 200'000;

  // Likers/commenters recovered from public posts: a fixed-size set mixing
  // true friends with bystanders. The mix is planted per person by drawing
  // a match fraction from this distribution (fraction, weight); with a set
  // size of 100 the planted fraction is realized exactly.
  int public_sources_size = 100;
  std::vector<std::pair<double, double>> match_fraction_mix = {
      {0.97, 0.680}, {0.93, 0.094}, {0.88, 0.060}, {0.70, 0.166}};

  // Numbers matching any of these are tagged as memorable.
  std::vector<VanityPattern> vanity_patterns;

  // Optional override for the built-in name pools.
  std::string names_file;

  void validate() const;  // throws ConfigInvalid
  std::string digest() const;
};

struct PersonRecord {
  PhoneNumber number;
  std::string name;
  std::string country;
  std::optional<std::string> email;
  std::optional<std::string> social_id;
  // Ground-truth friends are exposed through two doors: the profile's own
  // friend list (present only when public) and the liker/commenter set.
  std::optional<std::set<std::string>> friendlist_public;
  std::set<std::string> public_sources_friends;
  std::map<std::string, std::string> attributes;
  bool ott_present = false;
  bool is_vanity = false;
};

struct NameList {
  std::vector<std::string> given;
  std::vector<std::string> surname;

  static NameList built_in();
  static NameList load(std::istream& in);          // throws CorruptFixture
  static NameList load_file(const std::string& path);
};

// Stable display name for an arbitrary social id.
std::string name_for_social_id(const NameList& names, const std::string& id);

class World {
 public:
  virtual ~World() = default;
  virtual std::optional<PersonRecord> person_for(const PhoneNumber& n) const = 0;
  virtual std::optional<PersonRecord> person_by_social_id(
      const std::string& id) const = 0;
  virtual const NameList& names() const = 0;
};

// Pure-function world: every record is re-derived on demand from
// (config.seed, number), so no storage is needed and materialization
// order cannot matter.
class GenerativeWorld : public World {
 public:
  explicit GenerativeWorld(WorldConfig cfg);

  const WorldConfig& config() const { return cfg_; }

  std::optional<PersonRecord> person_for(const PhoneNumber& n) const override;
  std::optional<PersonRecord> person_by_social_id(
      const std::string& id) const override;
  const NameList& names() const override { return names_; }

  // The match fraction planted into the liker/commenter set, when the
  // person has one. Lets tests check bucket assignment against the plan.
  std::optional<double> planted_match_fraction(const PhoneNumber& n) const;

 private:
  WorldConfig cfg_;
  NameList names_;
};

std::optional<PersonRecord> materialize_person(const WorldConfig& cfg,
                                               const PhoneNumber& n);

// Fixture files hold one record per line as JSON, in snapshot order.
void snapshot_records(std::ostream& out,
                      const std::vector<PersonRecord>& records);
void snapshot_world(std::ostream& out, const WorldConfig& cfg,
                    const std::vector<PhoneNumber>& numbers);

class FixtureWorld : public World {
 public:
  static FixtureWorld load(std::istream& in);  // throws CorruptFixture
  static FixtureWorld load_file(const std::string& path);

  const std::vector<PersonRecord>& records() const { return records_; }

  std::optional<PersonRecord> person_for(const PhoneNumber& n) const override;
  std::optional<PersonRecord> person_by_social_id(
      const std::string& id) const override;
  const NameList& names() const override { return names_; }

 private:
  std::vector<PersonRecord> records_;
  std::map<std::string, std::size_t> by_number_;
  std::map<std::string, std::size_t> by_social_id_;
  NameList names_ = NameList::built_in();
};

}  // namespace numfunnel
