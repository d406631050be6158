#include "numfunnel/correlator.hpp"

#include <algorithm>

#include "numfunnel/errors.hpp"
#include "numfunnel/rng.hpp"

namespace numfunnel {

namespace {

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::string hashed(const std::string& value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "h:%016llx",
                static_cast<unsigned long long>(fnv1a64(value)));
  return buf;
}

}  // namespace

const char* friend_origin_name(FriendOrigin origin) {
  switch (origin) {
    case FriendOrigin::friendlist: return "friendlist";
    case FriendOrigin::public_sources: return "public_sources";
    case FriendOrigin::none: return "none";
  }
  return "?";
}

const char* overlap_bucket_name(OverlapBucket b) {
  switch (b) {
    case OverlapBucket::gt95: return "gt95";
    case OverlapBucket::from90to95: return "90to95";
    case OverlapBucket::from85to90: return "85to90";
    case OverlapBucket::lt85: return "lt85";
  }
  return "?";
}

std::optional<std::string> extract_social_id(std::string_view photo_url) {
  constexpr std::string_view prefix = "http://graph.facebook.com/";
  if (photo_url.substr(0, prefix.size()) != prefix) return std::nullopt;
  const std::string_view rest = photo_url.substr(prefix.size());
  const auto slash = rest.find('/');
  if (slash == std::string_view::npos || slash == 0) return std::nullopt;
  const std::string_view tail = rest.substr(slash);
  if (tail != "/picture" && tail.substr(0, 9) != "/picture?") {
    return std::nullopt;
  }
  return std::string(rest.substr(0, slash));
}

FriendResolution resolve_friends(const std::string& social_id,
                                 const SocialClient& social) {
  auto fl = social.fetch_friends(social_id, FriendQuery::friendlist);
  if (fl.status == FriendsStatus::not_found) return {};
  if (fl.status == FriendsStatus::ok && !fl.friends.empty()) {
    return {FriendOrigin::friendlist, std::move(fl.friends)};
  }
  auto ps = social.fetch_friends(social_id, FriendQuery::public_sources);
  if (ps.status == FriendsStatus::ok && !ps.friends.empty()) {
    return {FriendOrigin::public_sources, std::move(ps.friends)};
  }
  return {};
}

OverlapBucket bucket_for(double match_rate) {
  if (match_rate > 95.0) return OverlapBucket::gt95;
  if (match_rate > 90.0) return OverlapBucket::from90to95;
  if (match_rate > 85.0) return OverlapBucket::from85to90;
  return OverlapBucket::lt85;
}

OverlapResult overlap_analysis(const std::set<std::string>& public_sources,
                               const std::set<std::string>& friendlist) {
  if (public_sources.empty()) {
    throw EmptySourceSet("likers/commenters set is empty");
  }
  std::size_t inter = 0;
  for (const auto& id : public_sources) inter += friendlist.count(id);
  OverlapResult r;
  r.intersection_size = inter;
  r.public_sources_size = public_sources.size();
  r.friendlist_size = friendlist.size();
  r.match_rate = 100.0 * static_cast<double>(inter) /
                 static_cast<double>(public_sources.size());
  r.bucket = bucket_for(r.match_rate);
  return r;
}

VictimDossier assemble_dossier(
    const PhoneNumber& n, const std::optional<LookupRecord>& record,
    const SocialClient& social,
    const std::vector<VanityPattern>& vanity_patterns) {
  VictimDossier d;
  d.number = n;
  d.is_vanity = matches_any(vanity_patterns, n);
  if (!record) {
    d.channels_checked[Channel::email] = false;
    return d;
  }
  d.name = record->name;
  d.country = record->country;
  if (!blank(record->email)) d.email = record->email;
  d.channels_checked[Channel::email] = d.email.has_value();
  if (auto id = extract_social_id(record->photo_url)) {
    d.social_id = *id;
    d.friends = resolve_friends(*id, social);
    if (auto attrs = social.fetch_profile_attributes(*id)) {
      d.attributes = std::move(*attrs);
    }
  }
  return d;
}

VictimDossier build_dossier(const PhoneNumber& n, const Services& services,
                            CredentialPool& credentials) {
  std::optional<LookupRecord> record;
  bool granted = false;
  for (const auto& cred : credentials.credentials()) {
    LookupOutcome outcome = services.directory->lookup(cred, n);
    if (outcome.status == LookupStatus::rate_limited) continue;
    granted = true;
    record = std::move(outcome.record);
    break;
  }
  if (!granted) {
    throw RateLimitedError("all " + std::to_string(credentials.size()) +
                           " credentials exhausted for this window");
  }
  static const std::vector<VanityPattern> kNoPatterns;
  const auto& patterns =
      services.vanity_patterns ? *services.vanity_patterns : kNoPatterns;
  return assemble_dossier(n, record, *services.social, patterns);
}

nlohmann::ordered_json dossier_to_json(const VictimDossier& d, bool hash_ids) {
  nlohmann::ordered_json j;
  j["number"] = hash_ids ? hashed(d.number.canonical()) : d.number.canonical();
  if (d.name) j["name"] = *d.name;
  if (d.country) j["country"] = *d.country;
  if (d.email) j["email"] = *d.email;
  if (d.social_id) j["social_id"] = hash_ids ? hashed(*d.social_id) : *d.social_id;
  j["friend_source"] = friend_origin_name(d.friends.source);
  nlohmann::ordered_json friends = nlohmann::ordered_json::array();
  for (const auto& id : d.friends.friends) {
    friends.push_back(hash_ids ? hashed(id) : id);
  }
  j["friends"] = std::move(friends);
  j["attributes"] = d.attributes;
  j["is_vanity"] = d.is_vanity;
  nlohmann::ordered_json checked = nlohmann::ordered_json::object();
  for (const auto& [channel, present] : d.channels_checked) {
    checked[channel_name(channel)] = present;
  }
  j["channels_checked"] = std::move(checked);
  return j;
}

}  // namespace numfunnel
