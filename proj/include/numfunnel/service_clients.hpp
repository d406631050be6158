#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "numfunnel/phone_number.hpp"
#include "numfunnel/synth_world.hpp"

namespace numfunnel {

// Simulated time in milliseconds. Nothing in the pipeline reads the wall
// clock; runs are reproducible because time only moves when the caller
// moves it.
class VirtualClock {
 public:
  std::int64_t now_ms() const { return now_ms_.load(std::memory_order_relaxed); }

  void advance_ms(std::int64_t delta) {
    now_ms_.fetch_add(delta, std::memory_order_relaxed);
  }

  // Jump to the start of the next rate window.
  void advance_to_next_window(std::int64_t window_ms) {
    const std::int64_t now = now_ms();
    const std::int64_t next = (now / window_ms + 1) * window_ms;
    now_ms_.store(next, std::memory_order_relaxed);
  }

 private:
  std::atomic<std::int64_t> now_ms_{0};
};

struct RateLimitPolicy {
  int max_requests = 3000;
  std::int64_t window_ms = 60'000;

  void validate() const;
};

struct Credential {
  std::string id;
  std::int64_t created_at_ms = 0;
};

// Fixed budget of throwaway accounts. Asking for more than the budget
// throws PoolExhausted.
class CredentialPool {
 public:
  explicit CredentialPool(std::size_t limit) : limit_(limit) {}

  const Credential& acquire(const VirtualClock& clock);
  const std::vector<Credential>& credentials() const { return creds_; }
  std::size_t size() const { return creds_.size(); }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
  std::vector<Credential> creds_;
};

// Fixed-window counter per credential. Grants are recorded per
// (window, credential) so tests can audit that no window ever exceeded
// the budget.
class RateLimiter {
 public:
  explicit RateLimiter(RateLimitPolicy policy);

  bool try_consume(const std::string& credential_id, const VirtualClock& clock);

  const RateLimitPolicy& policy() const { return policy_; }
  std::map<std::pair<std::int64_t, std::string>, int> grant_history() const;
  std::uint64_t windows_touched() const;
  std::uint64_t credentials_granted() const;

 private:
  struct Bucket {
    std::int64_t window = -1;
    int used = 0;
  };

  RateLimitPolicy policy_;
  mutable std::mutex mu_;
  std::map<std::string, Bucket> buckets_;
  std::map<std::pair<std::int64_t, std::string>, int> history_;
};

// Caller-id directory record, serialized with the exact wire field names
// the upstream service uses.
struct LookupRecord {
  std::string name;
  std::string number;
  std::string country;
  std::string photo_url;
  std::string email;

  nlohmann::ordered_json to_json() const;
  static LookupRecord from_json(const nlohmann::json& j);
};

std::string social_photo_url(const std::string& social_id);

enum class LookupStatus { hit, not_found, rate_limited };

struct LookupOutcome {
  LookupStatus status = LookupStatus::not_found;
  std::optional<LookupRecord> record;
};

// Reverse phone lookup against the synthetic world. Every metered call
// spends one token of the credential's window budget; a denied call spends
// nothing and returns rate_limited.
class DirectoryClient {
 public:
  DirectoryClient(const World& world, RateLimitPolicy policy,
                  const VirtualClock& clock);

  LookupOutcome lookup(const Credential& credential, const PhoneNumber& n);

  // Unmetered read for bulk pipelines that account for budget separately.
  std::optional<LookupRecord> lookup_unmetered(const PhoneNumber& n) const;

  static LookupRecord project(const PersonRecord& r);

  RateLimiter& limiter() { return limiter_; }
  const RateLimiter& limiter() const { return limiter_; }

 private:
  const World* world_;
  RateLimiter limiter_;
  const VirtualClock* clock_;
};

// Messenger contact sync: upload an address book, learn which numbers
// have an account.
class OttClient {
 public:
  explicit OttClient(const World& world) : world_(&world) {}

  bool present(const PhoneNumber& n) const;
  std::set<PhoneNumber> sync_address_book(const std::set<PhoneNumber>& book) const;

 private:
  const World* world_;
};

enum class FriendQuery { friendlist, public_sources };

enum class FriendsStatus { ok, privacy_hidden, not_found };

struct FriendsOutcome {
  FriendsStatus status = FriendsStatus::not_found;
  std::set<std::string> friends;
};

// Social graph reads keyed by social id. The friend list door answers
// privacy_hidden when the profile keeps it private; likers/commenters
// scraped off public posts are always readable (possibly empty).
class SocialClient {
 public:
  explicit SocialClient(const World& world) : world_(&world) {}

  FriendsOutcome fetch_friends(const std::string& social_id,
                               FriendQuery query) const;
  std::optional<std::map<std::string, std::string>> fetch_profile_attributes(
      const std::string& social_id) const;
  std::string display_name(const std::string& social_id) const;

 private:
  const World* world_;
};

struct RegistrationEntry {
  PhoneNumber number;
  std::string display_name;
  std::optional<std::string> linked_social;
  std::int64_t registered_at_ms = 0;
};

// Crowd-sourced caller-name registry. Anyone can claim any number; the
// newest registration wins.
class CallerRegistry {
 public:
  RegistrationEntry register_caller_profile(
      const PhoneNumber& n, std::string display_name,
      std::optional<std::string> linked_social, const VirtualClock& clock);

  std::optional<RegistrationEntry> entry_for(const PhoneNumber& n) const;
  std::optional<RegistrationEntry> first_entry() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  nlohmann::ordered_json to_json() const;
  static CallerRegistry from_json(const nlohmann::json& j);

 private:
  std::map<std::string, RegistrationEntry> entries_;
};

struct CallPresentation {
  std::string displayed_number;
  std::string displayed_name;
  bool spoofed = false;
};

// What the callee's screen shows for an (optionally spoofed) call.
// Name resolution order: registry claim, then directory record, then blank.
CallPresentation present_call(const PhoneNumber& true_source,
                              const std::optional<PhoneNumber>& claimed_source,
                              const CallerRegistry& registry,
                              const World* world);

}  // namespace numfunnel
