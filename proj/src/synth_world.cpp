#include "numfunnel/synth_world.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "names_data.hpp"
#include "numfunnel/errors.hpp"
#include "numfunnel/rng.hpp"

namespace numfunnel {

namespace {

// Draw stream tags. Each random property of a person reads its own
// (seed, number, tag) stream so properties stay independent and a record
// can be partially replayed (see planted_match_fraction).
enum Tag : std::uint64_t {
  kTagLookupHit = 1,
  kTagSocialLink = 2,
  kTagFriendlistPublic = 3,
  kTagPublicSources = 4,
  kTagMatchMix = 5,
  kTagFriendCount = 6,
  kTagOtt = 7,
  kTagEmailFlag = 8,
  kTagEmailDigits = 9,
  kTagEmailDomain = 10,
  kTagNameGiven = 11,
  kTagNameSurname = 12,
  kTagAttrBase = 0x100,     // + 2 * attribute index, +1 for the value draw
  kTagFriendBase = 0x10000,  // + draw index
  kTagNoiseBase = 0x200000,  // + draw index
  kTagPickBase = 0x300000,   // + shuffle step
};

// Social id ranges. Own profiles encode the national number so the id is
// resolvable without a reverse index; friend-pool and bystander ids live
// in disjoint ranges so the sets can never collide.
constexpr std::uint64_t kPersonIdBase = 1'000'000'000'000ull;
constexpr std::uint64_t kPersonIdSpan = 10'000'000'000ull;
constexpr std::uint64_t kFriendIdBase = 10'000'000'000ull;
constexpr std::uint64_t kNoiseIdBase = 50'000'000'000ull;
constexpr std::uint64_t kNoiseIdSpan = 1'000'000'000ull;

const char* const kEmailDomains[] = {"example.com", "example.in",
                                     "example.org", "mail.example"};

const char* const kGenderValues[] = {"female", "male"};
const char* const kRelationshipValues[] = {"single", "married", "engaged",
                                           "in a relationship"};
const char* const kWorkValues[] = {
    "software engineer", "accountant",     "sales manager", "teacher",
    "doctor",            "civil engineer", "bank officer",  "pharmacist",
    "designer",          "consultant",     "lawyer",        "professor"};
const char* const kSchoolValues[] = {
    "St. Xavier's School",      "Kendriya Vidyalaya",
    "Delhi Public School",      "National Public School",
    "Modern School",            "City Montessori School",
    "Bishop Cotton School",     "Sacred Heart School"};
const char* const kEmployerValues[] = {
    "Infotech Solutions",  "Horizon Software",   "Apex Industries",
    "Sterling Finance",    "BlueLeaf Retail",    "Crescent Healthcare",
    "Summit Logistics",    "Pinnacle Consulting", "Lotus Textiles",
    "Metro Utilities"};
const char* const kHometownValues[] = {
    "Mumbai",    "Delhi",     "Bengaluru", "Hyderabad", "Chennai", "Kolkata",
    "Pune",      "Ahmedabad", "Jaipur",    "Lucknow",   "Chandigarh",
    "Indore",    "Nagpur",    "Kochi",     "Surat",     "Patna"};

template <std::size_t N>
std::string pick(const char* const (&values)[N], std::uint64_t h) {
  return values[uniform_below(h, N)];
}

std::string attribute_value(const std::string& key, std::uint64_t h) {
  if (key == "gender") return pick(kGenderValues, h);
  if (key == "relationship") return pick(kRelationshipValues, h);
  if (key == "work") return pick(kWorkValues, h);
  if (key == "school") return pick(kSchoolValues, h);
  if (key == "employer") return pick(kEmployerValues, h);
  if (key == "hometown") return pick(kHometownValues, h);
  if (key == "birthday") {
    const std::uint64_t y = 1955 + uniform_below(splitmix64(h ^ 1), 45);
    const std::uint64_t m = 1 + uniform_below(splitmix64(h ^ 2), 12);
    const std::uint64_t d = 1 + uniform_below(splitmix64(h ^ 3), 28);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04llu-%02llu-%02llu",
                  static_cast<unsigned long long>(y),
                  static_cast<unsigned long long>(m),
                  static_cast<unsigned long long>(d));
    return buf;
  }
  return "value-" + std::to_string(uniform_below(h, 1000));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string friend_pool_id(std::uint64_t pool_index) {
  return std::to_string(kFriendIdBase + pool_index);
}

double pick_match_fraction(const WorldConfig& cfg, std::uint64_t h) {
  double total = 0;
  for (const auto& [fraction, weight] : cfg.match_fraction_mix) total += weight;
  double u = unit_interval(h) * total;
  for (const auto& [fraction, weight] : cfg.match_fraction_mix) {
    if (u < weight) return fraction;
    u -= weight;
  }
  return cfg.match_fraction_mix.back().first;
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ConfigInvalid(std::string(name) + " must be in [0,1], got " +
                        std::to_string(r));
  }
}

}  // namespace

void WorldConfig::validate() const {
  check_rate(lookup_hit_rate, "lookup_hit_rate");
  check_rate(social_link_rate, "social_link_rate");
  check_rate(friendlist_public_rate, "friendlist_public_rate");
  check_rate(public_sources_rate, "public_sources_rate");
  check_rate(ott_rate_social, "ott_rate_social");
  check_rate(ott_rate_named, "ott_rate_named");
  check_rate(email_rate, "email_rate");
  for (const auto& [key, rate] : attribute_rates) {
    check_rate(rate, ("attribute_rate." + key).c_str());
  }
  if (friends_min < 1 || friends_max < friends_min) {
    throw ConfigInvalid("friend count range [" + std::to_string(friends_min) +
                        "," + std::to_string(friends_max) + "] is invalid");
  }
  if (friend_pool_size < static_cast<std::uint64_t>(friends_max)) {
    throw ConfigInvalid("friend_pool_size smaller than friends_max");
  }
  if (public_sources_size < 1) {
    throw ConfigInvalid("public_sources_size must be positive");
  }
  if (match_fraction_mix.empty()) {
    throw ConfigInvalid("match_fraction_mix must not be empty");
  }
  double total = 0;
  for (const auto& [fraction, weight] : match_fraction_mix) {
    check_rate(fraction, "match fraction");
    if (weight < 0) throw ConfigInvalid("match fraction weight must be >= 0");
    total += weight;
  }
  if (total <= 0) throw ConfigInvalid("match fraction weights sum to zero");
  if (country_code < 1 || country_code > 999) {
    throw ConfigInvalid("country_code out of range");
  }
}

std::string WorldConfig::digest() const {
  std::ostringstream os;
  os << "seed=" << seed << ";cc=" << country_code << ";country=" << country
     << ";hit=" << lookup_hit_rate << ";social=" << social_link_rate
     << ";fl=" << friendlist_public_rate << ";ps=" << public_sources_rate
     << ";ott_s=" << ott_rate_social << ";ott_n=" << ott_rate_named
     << ";email=" << email_rate << ";fmin=" << friends_min
     << ";fmax=" << friends_max << ";pool=" << friend_pool_size
     << ";pssize=" << public_sources_size;
  for (const auto& [key, rate] : attribute_rates) os << ";a." << key << "=" << rate;
  for (const auto& [fraction, weight] : match_fraction_mix) {
    os << ";mix=" << fraction << ":" << weight;
  }
  for (const auto& p : vanity_patterns) os << ";vp=" << p.digits;
  os << ";names=" << names_file;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(os.str())));
  return buf;
}

NameList NameList::built_in() {
  NameList names;
  names.given.assign(detail::kGivenNames.begin(), detail::kGivenNames.end());
  names.surname.assign(detail::kSurnames.begin(), detail::kSurnames.end());
  return names;
}

NameList NameList::load(std::istream& in) {
  NameList names;
  std::vector<std::string>* section = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    const std::string t = line.substr(b, e - b + 1);
    if (t == "[given]") {
      section = &names.given;
    } else if (t == "[surname]") {
      section = &names.surname;
    } else if (t.front() == '#') {
      continue;
    } else if (section) {
      section->push_back(t);
    } else {
      throw CorruptFixture("name entry before any [given]/[surname] section");
    }
  }
  if (names.given.empty() || names.surname.empty()) {
    throw CorruptFixture("name file needs non-empty [given] and [surname] sections");
  }
  return names;
}

NameList NameList::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open names file: " + path);
  return load(in);
}

std::string name_for_social_id(const NameList& names, const std::string& id) {
  const std::uint64_t h = splitmix64(fnv1a64(id) ^ 0x6e616d65ull);
  const auto& g = names.given[uniform_below(h, names.given.size())];
  const auto& s =
      names.surname[uniform_below(splitmix64(h), names.surname.size())];
  return g + " " + s;
}

GenerativeWorld::GenerativeWorld(WorldConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  names_ = cfg_.names_file.empty() ? NameList::built_in()
                                   : NameList::load_file(cfg_.names_file);
}

std::optional<PersonRecord> GenerativeWorld::person_for(
    const PhoneNumber& n) const {
  const std::uint64_t key = n.as_u64();
  const auto stream = [&](std::uint64_t tag) {
    return mix_stream(cfg_.seed, key, tag);
  };

  if (!coin(stream(kTagLookupHit), cfg_.lookup_hit_rate)) return std::nullopt;

  PersonRecord r;
  r.number = n;
  r.country = cfg_.country;
  r.name =
      names_.given[uniform_below(stream(kTagNameGiven), names_.given.size())] +
      " " +
      names_.surname[uniform_below(stream(kTagNameSurname),
                                   names_.surname.size())];

  if (coin(stream(kTagEmailFlag), cfg_.email_rate)) {
    auto space = r.name.find(' ');
    std::string local = lower(r.name.substr(0, space)) + "." +
                        lower(r.name.substr(space + 1)) +
                        std::to_string(10 + uniform_below(stream(kTagEmailDigits), 90));
    r.email = local + "@" +
              kEmailDomains[uniform_below(stream(kTagEmailDomain),
                                          std::size(kEmailDomains))];
  }

  const bool social = coin(stream(kTagSocialLink), cfg_.social_link_rate);
  if (social) {
    std::uint64_t national = key % 10'000'000'000ull;
    r.social_id = std::to_string(kPersonIdBase + national);

    const int fcount =
        cfg_.friends_min +
        static_cast<int>(uniform_below(
            stream(kTagFriendCount),
            static_cast<std::uint64_t>(cfg_.friends_max - cfg_.friends_min + 1)));
    std::vector<std::string> friends;
    friends.reserve(fcount);
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t j = 0; static_cast<int>(friends.size()) < fcount; ++j) {
      const std::uint64_t p =
          uniform_below(stream(kTagFriendBase + j), cfg_.friend_pool_size);
      if (seen.insert(p).second) friends.push_back(friend_pool_id(p));
    }

    if (coin(stream(kTagFriendlistPublic), cfg_.friendlist_public_rate)) {
      r.friendlist_public.emplace(friends.begin(), friends.end());
    }

    if (coin(stream(kTagPublicSources), cfg_.public_sources_rate)) {
      const double m = pick_match_fraction(cfg_, stream(kTagMatchMix));
      const int size = cfg_.public_sources_size;
      const int overlap = std::min(
          static_cast<int>(std::llround(m * size)), fcount);
      // Partial Fisher-Yates over the draw-order friend vector picks the
      // planted true-friend members; the rest of the set is bystanders
      // from a disjoint id range.
      std::vector<std::string> shuffled = friends;
      for (int i = 0; i < overlap; ++i) {
        const std::uint64_t j =
            i + uniform_below(stream(kTagPickBase + i),
                              static_cast<std::uint64_t>(fcount - i));
        std::swap(shuffled[i], shuffled[j]);
        r.public_sources_friends.insert(shuffled[i]);
      }
      for (std::uint64_t j = 0;
           r.public_sources_friends.size() <
           static_cast<std::size_t>(size);
           ++j) {
        const std::uint64_t v =
            uniform_below(stream(kTagNoiseBase + j), kNoiseIdSpan);
        r.public_sources_friends.insert(std::to_string(kNoiseIdBase + v));
      }
    }

    int index = 0;
    for (const auto& [attr, rate] : cfg_.attribute_rates) {
      const std::uint64_t flag = stream(kTagAttrBase + 2 * index);
      const std::uint64_t value = stream(kTagAttrBase + 2 * index + 1);
      if (coin(flag, rate)) r.attributes[attr] = attribute_value(attr, value);
      ++index;
    }
  }

  const double ott_rate = social ? cfg_.ott_rate_social : cfg_.ott_rate_named;
  r.ott_present = coin(stream(kTagOtt), ott_rate);
  r.is_vanity = matches_any(cfg_.vanity_patterns, n);
  return r;
}

std::optional<PersonRecord> GenerativeWorld::person_by_social_id(
    const std::string& id) const {
  if (id.empty() || id.size() > 20 ||
      !std::all_of(id.begin(), id.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return std::nullopt;
  }
  const std::uint64_t v = std::stoull(id);
  if (v < kPersonIdBase || v >= kPersonIdBase + kPersonIdSpan) {
    return std::nullopt;
  }
  const std::uint64_t national = v - kPersonIdBase;
  auto person =
      person_for(number_from_national(national % 10'000'000'000ull,
                                      cfg_.country_code));
  if (person && person->social_id == id) return person;
  return std::nullopt;
}

std::optional<double> GenerativeWorld::planted_match_fraction(
    const PhoneNumber& n) const {
  const std::uint64_t key = n.as_u64();
  const auto stream = [&](std::uint64_t tag) {
    return mix_stream(cfg_.seed, key, tag);
  };
  if (!coin(stream(kTagLookupHit), cfg_.lookup_hit_rate)) return std::nullopt;
  if (!coin(stream(kTagSocialLink), cfg_.social_link_rate)) return std::nullopt;
  if (!coin(stream(kTagPublicSources), cfg_.public_sources_rate)) {
    return std::nullopt;
  }
  return pick_match_fraction(cfg_, stream(kTagMatchMix));
}

std::optional<PersonRecord> materialize_person(const WorldConfig& cfg,
                                               const PhoneNumber& n) {
  return GenerativeWorld(cfg).person_for(n);
}

namespace {

nlohmann::ordered_json record_to_json(const PersonRecord& r) {
  nlohmann::ordered_json j;
  j["number"] = r.number.canonical();
  j["name"] = r.name;
  j["country"] = r.country;
  if (r.email) j["email"] = *r.email;
  if (r.social_id) j["social_id"] = *r.social_id;
  if (r.friendlist_public) {
    j["friendlist_public"] = *r.friendlist_public;
  }
  j["public_sources_friends"] = r.public_sources_friends;
  j["attributes"] = r.attributes;
  j["ott_present"] = r.ott_present;
  j["is_vanity"] = r.is_vanity;
  return j;
}

const std::set<std::string> kRecordKeys = {
    "number",   "name",           "country",
    "email",    "social_id",      "friendlist_public",
    "public_sources_friends",     "attributes",
    "ott_present",                "is_vanity"};

PersonRecord record_from_json(const nlohmann::json& j, std::size_t line) {
  const auto fail = [line](const std::string& why) -> PersonRecord {
    throw CorruptFixture("record " + std::to_string(line) + ": " + why);
  };
  if (!j.is_object()) return fail("not an object");
  for (const auto& [key, value] : j.items()) {
    if (!kRecordKeys.count(key)) return fail("unknown field \"" + key + "\"");
  }
  for (const char* req : {"number", "name", "country", "ott_present", "is_vanity"}) {
    if (!j.contains(req)) return fail(std::string("missing field \"") + req + "\"");
  }
  PersonRecord r;
  try {
    r.number = parse_number(j.at("number").get<std::string>());
  } catch (const MalformedNumber& e) {
    return fail(e.what());
  }
  r.name = j.at("name").get<std::string>();
  r.country = j.at("country").get<std::string>();
  if (r.name.empty()) return fail("record has an empty name");
  if (j.contains("email")) r.email = j.at("email").get<std::string>();
  if (j.contains("social_id")) r.social_id = j.at("social_id").get<std::string>();
  if (j.contains("friendlist_public")) {
    r.friendlist_public = j.at("friendlist_public").get<std::set<std::string>>();
  }
  if (j.contains("public_sources_friends")) {
    r.public_sources_friends =
        j.at("public_sources_friends").get<std::set<std::string>>();
  }
  if (j.contains("attributes")) {
    r.attributes = j.at("attributes").get<std::map<std::string, std::string>>();
  }
  r.ott_present = j.at("ott_present").get<bool>();
  r.is_vanity = j.at("is_vanity").get<bool>();
  if (!r.social_id) {
    if (r.friendlist_public || !r.public_sources_friends.empty() ||
        !r.attributes.empty()) {
      return fail("friend sets or attributes without a social_id");
    }
  }
  return r;
}

}  // namespace

void snapshot_records(std::ostream& out,
                      const std::vector<PersonRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

void snapshot_world(std::ostream& out, const WorldConfig& cfg,
                    const std::vector<PhoneNumber>& numbers) {
  GenerativeWorld world(cfg);
  for (const auto& n : numbers) {
    if (auto person = world.person_for(n)) {
      out << record_to_json(*person).dump() << '\n';
    }
  }
}

FixtureWorld FixtureWorld::load(std::istream& in) {
  FixtureWorld world;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw CorruptFixture("record " + std::to_string(line_no) +
                           ": not valid JSON");
    }
    PersonRecord r = record_from_json(j, line_no);
    const std::string num = r.number.canonical();
    if (!world.by_number_.emplace(num, world.records_.size()).second) {
      throw CorruptFixture("record " + std::to_string(line_no) +
                           ": duplicate number " + num);
    }
    if (r.social_id &&
        !world.by_social_id_.emplace(*r.social_id, world.records_.size())
             .second) {
      throw CorruptFixture("record " + std::to_string(line_no) +
                           ": duplicate social_id " + *r.social_id);
    }
    world.records_.push_back(std::move(r));
  }
  return world;
}

FixtureWorld FixtureWorld::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open fixture: " + path);
  return load(in);
}

std::optional<PersonRecord> FixtureWorld::person_for(
    const PhoneNumber& n) const {
  auto it = by_number_.find(n.canonical());
  if (it == by_number_.end()) return std::nullopt;
  return records_[it->second];
}

std::optional<PersonRecord> FixtureWorld::person_by_social_id(
    const std::string& id) const {
  auto it = by_social_id_.find(id);
  if (it == by_social_id_.end()) return std::nullopt;
  return records_[it->second];
}

}  // namespace numfunnel
