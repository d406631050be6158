#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "numfunnel/channel.hpp"
#include "numfunnel/correlator.hpp"
#include "numfunnel/service_clients.hpp"

namespace numfunnel {

enum class AttackBase { social, spear, nontargeted };

const char* attack_base_name(AttackBase base);

struct AttackClass {
  AttackBase base = AttackBase::nontargeted;
  bool whaling = false;  // overlay for memorable (high-value) numbers

  friend bool operator==(const AttackClass&, const AttackClass&) = default;
};

// Channels the victim can be reached on, given the dossier. A directory
// record makes voice and SMS usable outright; messenger needs a presence
// hit; e-mail needs an address.
std::set<Channel> reachable_channels(const VictimDossier& d, bool ott_present);

// Most effective first: ott, then email, then sms, then voice.
Channel priority_channel(const std::set<Channel>& channels);

// Richest applicable class: friends resolved -> social, else a known
// name -> spear, else nontargeted. Vanity numbers add the whaling overlay.
AttackClass classify_attack(const VictimDossier& d);

// Message templates, keyed "<class>.<channel>" plus the vishing sections.
// Load-time validation enforces the personalization contract per class:
// social needs {victim_name} and exactly one {friend_name}, spear needs
// {victim_name} and no friend, nontargeted carries no personalization.
class TemplateSet {
 public:
  static TemplateSet built_in();
  static TemplateSet load(std::istream& in);  // throws TemplateError
  static TemplateSet load_file(const std::string& path);

  const std::string* find(const std::string& key) const;
  const std::string& link() const { return link_; }

 private:
  std::map<std::string, std::string> sections_;
  std::string link_ = "https://links.example/claim";
};

struct AttackVector {
  Channel channel = Channel::sms;
  AttackClass attack_class;
  std::string payload;
  std::set<std::string> placeholders_used;
};

using FriendNameResolver = std::function<std::string(const std::string& id)>;

FriendNameResolver default_friend_names();

// Render the payload for one victim/class/channel pick. Missing dossier
// fields the class depends on throw MissingField; a class/channel pair
// absent from the template set throws UnknownTemplate.
AttackVector craft_vector(const VictimDossier& d, const AttackClass& cls,
                          Channel channel, const TemplateSet& templates,
                          const FriendNameResolver& friend_names =
                              default_friend_names());

enum class VishingStrategy { spoof_registered, fake_registration, nontargeted };

const char* vishing_strategy_name(VishingStrategy s);

struct VishingPlan {
  VishingStrategy strategy = VishingStrategy::nontargeted;
  std::string caller_display_name;
  std::optional<std::string> linked_social;
  std::string script;
};

// Caller setup plus call script. Prefers spoofing a number somebody
// already registered a trusted name for; otherwise registers the
// configured entity fresh. Script personalization is driven by the
// dossier's profile attributes and degrades to a generic script when
// there are none.
VishingPlan craft_vishing_plan(const VictimDossier& d,
                               const CallerRegistry& registry,
                               const TemplateSet& templates,
                               const std::string& entity = "HDFC Bank");

}  // namespace numfunnel
