#include "numfunnel/service_clients.hpp"

#include <algorithm>

#include "numfunnel/errors.hpp"

namespace numfunnel {

void RateLimitPolicy::validate() const {
  if (max_requests < 1) throw ConfigInvalid("rate limit must allow >= 1 request");
  if (window_ms < 1) throw ConfigInvalid("rate window must be >= 1 ms");
}

const Credential& CredentialPool::acquire(const VirtualClock& clock) {
  if (creds_.size() >= limit_) {
    throw PoolExhausted("credential budget of " + std::to_string(limit_) +
                        " is spent");
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "cred-%04zu", creds_.size());
  creds_.push_back(Credential{buf, clock.now_ms()});
  return creds_.back();
}

RateLimiter::RateLimiter(RateLimitPolicy policy) : policy_(policy) {
  policy_.validate();
}

bool RateLimiter::try_consume(const std::string& credential_id,
                              const VirtualClock& clock) {
  const std::int64_t window = clock.now_ms() / policy_.window_ms;
  std::lock_guard lock(mu_);
  Bucket& b = buckets_[credential_id];
  if (b.window != window) {
    b.window = window;
    b.used = 0;
  }
  if (b.used >= policy_.max_requests) return false;
  ++b.used;
  ++history_[{window, credential_id}];
  return true;
}

std::map<std::pair<std::int64_t, std::string>, int> RateLimiter::grant_history()
    const {
  std::lock_guard lock(mu_);
  return history_;
}

std::uint64_t RateLimiter::windows_touched() const {
  std::lock_guard lock(mu_);
  std::set<std::int64_t> windows;
  for (const auto& [key, count] : history_) windows.insert(key.first);
  return windows.size();
}

std::uint64_t RateLimiter::credentials_granted() const {
  std::lock_guard lock(mu_);
  std::set<std::string> creds;
  for (const auto& [key, count] : history_) creds.insert(key.second);
  return creds.size();
}

std::string social_photo_url(const std::string& social_id) {
  return "http://graph.facebook.com/" + social_id +
         "/picture?width=320&height=320";
}

nlohmann::ordered_json LookupRecord::to_json() const {
  nlohmann::ordered_json j;
  j["NAME"] = name;
  j["NUMBER"] = number;
  j["COUNTRY"] = country;
  j["PHOTO_URL"] = photo_url;
  j["e-mail"] = email;
  return j;
}

LookupRecord LookupRecord::from_json(const nlohmann::json& j) {
  LookupRecord r;
  r.name = j.at("NAME").get<std::string>();
  r.number = j.at("NUMBER").get<std::string>();
  r.country = j.at("COUNTRY").get<std::string>();
  r.photo_url = j.value("PHOTO_URL", "");
  r.email = j.value("e-mail", "");
  return r;
}

DirectoryClient::DirectoryClient(const World& world, RateLimitPolicy policy,
                                 const VirtualClock& clock)
    : world_(&world), limiter_(policy), clock_(&clock) {}

LookupOutcome DirectoryClient::lookup(const Credential& credential,
                                      const PhoneNumber& n) {
  if (!limiter_.try_consume(credential.id, *clock_)) {
    return {LookupStatus::rate_limited, std::nullopt};
  }
  auto person = world_->person_for(n);
  if (!person) return {LookupStatus::not_found, std::nullopt};
  return {LookupStatus::hit, project(*person)};
}

std::optional<LookupRecord> DirectoryClient::lookup_unmetered(
    const PhoneNumber& n) const {
  auto person = world_->person_for(n);
  if (!person) return std::nullopt;
  return project(*person);
}

LookupRecord DirectoryClient::project(const PersonRecord& r) {
  LookupRecord rec;
  rec.name = r.name;
  rec.number = r.number.canonical();
  rec.country = r.country;
  rec.photo_url = r.social_id ? social_photo_url(*r.social_id) : "";
  rec.email = r.email.value_or("");
  return rec;
}

bool OttClient::present(const PhoneNumber& n) const {
  auto person = world_->person_for(n);
  return person && person->ott_present;
}

std::set<PhoneNumber> OttClient::sync_address_book(
    const std::set<PhoneNumber>& book) const {
  std::set<PhoneNumber> out;
  for (const auto& n : book) {
    if (present(n)) out.insert(n);
  }
  return out;
}

FriendsOutcome SocialClient::fetch_friends(const std::string& social_id,
                                           FriendQuery query) const {
  auto person = world_->person_by_social_id(social_id);
  if (!person) return {FriendsStatus::not_found, {}};
  if (query == FriendQuery::friendlist) {
    if (!person->friendlist_public) return {FriendsStatus::privacy_hidden, {}};
    return {FriendsStatus::ok, *person->friendlist_public};
  }
  return {FriendsStatus::ok, person->public_sources_friends};
}

std::optional<std::map<std::string, std::string>>
SocialClient::fetch_profile_attributes(const std::string& social_id) const {
  auto person = world_->person_by_social_id(social_id);
  if (!person) return std::nullopt;
  return person->attributes;
}

std::string SocialClient::display_name(const std::string& social_id) const {
  if (auto person = world_->person_by_social_id(social_id)) return person->name;
  return name_for_social_id(world_->names(), social_id);
}

RegistrationEntry CallerRegistry::register_caller_profile(
    const PhoneNumber& n, std::string display_name,
    std::optional<std::string> linked_social, const VirtualClock& clock) {
  RegistrationEntry entry{n, std::move(display_name), std::move(linked_social),
                          clock.now_ms()};
  entries_[n.canonical()] = entry;
  return entry;
}

std::optional<RegistrationEntry> CallerRegistry::entry_for(
    const PhoneNumber& n) const {
  auto it = entries_.find(n.canonical());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<RegistrationEntry> CallerRegistry::first_entry() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.begin()->second;
}

nlohmann::ordered_json CallerRegistry::to_json() const {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const auto& [key, e] : entries_) {
    nlohmann::ordered_json j;
    j["number"] = e.number.canonical();
    j["display_name"] = e.display_name;
    if (e.linked_social) j["linked_social"] = *e.linked_social;
    j["registered_at_ms"] = e.registered_at_ms;
    entries.push_back(std::move(j));
  }
  return entries;
}

CallerRegistry CallerRegistry::from_json(const nlohmann::json& j) {
  CallerRegistry registry;
  if (!j.is_array()) throw CorruptFixture("registry file must be a JSON array");
  for (const auto& e : j) {
    RegistrationEntry entry;
    entry.number = parse_number(e.at("number").get<std::string>());
    entry.display_name = e.at("display_name").get<std::string>();
    if (e.contains("linked_social")) {
      entry.linked_social = e.at("linked_social").get<std::string>();
    }
    entry.registered_at_ms = e.value("registered_at_ms", std::int64_t{0});
    registry.entries_[entry.number.canonical()] = std::move(entry);
  }
  return registry;
}

CallPresentation present_call(const PhoneNumber& true_source,
                              const std::optional<PhoneNumber>& claimed_source,
                              const CallerRegistry& registry,
                              const World* world) {
  const PhoneNumber& shown = claimed_source ? *claimed_source : true_source;
  std::string name;
  if (auto entry = registry.entry_for(shown)) {
    name = entry->display_name;
  } else if (world) {
    if (auto person = world->person_for(shown)) name = person->name;
  }
  const bool spoofed = claimed_source && !(*claimed_source == true_source);
  return {shown.canonical(), name, spoofed};
}

}  // namespace numfunnel
