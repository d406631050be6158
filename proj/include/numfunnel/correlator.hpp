#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "numfunnel/channel.hpp"
#include "numfunnel/number_space.hpp"
#include "numfunnel/phone_number.hpp"
#include "numfunnel/service_clients.hpp"

namespace numfunnel {

enum class FriendOrigin { friendlist, public_sources, none };

const char* friend_origin_name(FriendOrigin origin);

struct FriendResolution {
  FriendOrigin source = FriendOrigin::none;
  std::set<std::string> friends;
};

enum class OverlapBucket { gt95, from90to95, from85to90, lt85 };

const char* overlap_bucket_name(OverlapBucket b);

struct OverlapResult {
  double match_rate = 0.0;  // percent of the liker/commenter set that are true friends
  OverlapBucket bucket = OverlapBucket::lt85;
  std::size_t intersection_size = 0;
  std::size_t public_sources_size = 0;
  std::size_t friendlist_size = 0;
};

// Everything learned about one number, with every field traceable to a
// service response. Channels appear in channels_checked only when a
// presence check actually ran.
struct VictimDossier {
  PhoneNumber number;
  std::optional<std::string> name;
  std::optional<std::string> country;
  std::optional<std::string> email;
  std::optional<std::string> social_id;
  FriendResolution friends;
  std::map<std::string, std::string> attributes;
  bool is_vanity = false;
  std::map<Channel, bool> channels_checked;
};

// Pull the profile id out of a graph avatar URL; empty or foreign shapes
// give nullopt.
std::optional<std::string> extract_social_id(std::string_view photo_url);

// Friend list first; when that is hidden or empty, fall back to the
// likers/commenters door. Both empty means unresolved.
FriendResolution resolve_friends(const std::string& social_id,
                                 const SocialClient& social);

// How much of the likers/commenters set consists of true friends.
// Throws EmptySourceSet when the likers/commenters set is empty.
OverlapResult overlap_analysis(const std::set<std::string>& public_sources,
                               const std::set<std::string>& friendlist);

OverlapBucket bucket_for(double match_rate);

struct Services {
  DirectoryClient* directory = nullptr;
  const SocialClient* social = nullptr;
  const OttClient* ott = nullptr;
  const std::vector<VanityPattern>* vanity_patterns = nullptr;
};

// Assemble a dossier from an already-fetched directory record (or a miss).
VictimDossier assemble_dossier(const PhoneNumber& n,
                               const std::optional<LookupRecord>& record,
                               const SocialClient& social,
                               const std::vector<VanityPattern>& vanity_patterns);

// Metered pipeline: spend one directory token (rotating through the
// credential pool), then follow the social links. Throws RateLimitedError
// when every credential is out of budget for the current window.
VictimDossier build_dossier(const PhoneNumber& n, const Services& services,
                            CredentialPool& credentials);

nlohmann::ordered_json dossier_to_json(const VictimDossier& d, bool hash_ids);

}  // namespace numfunnel
