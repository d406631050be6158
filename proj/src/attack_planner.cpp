#include "numfunnel/attack_planner.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "numfunnel/errors.hpp"
#include "numfunnel/synth_world.hpp"

namespace numfunnel {

namespace {

// Ships with the binary; data/templates.txt carries the same text for
// people who want to edit it.
constexpr const char* kBuiltInTemplates = R"(# Message templates, one section per attack class and channel.
@link https://links.example/claim

[social.ott]
Hey {victim_name}! {friend_name} shared your number with me, long time no talk. I put our old photos here, take a look: {link}

[social.email]
Hi {victim_name},
{friend_name} suggested I reach out to you about the reunion we are planning. The invite and guest list are here: {link}
See you there!

[social.sms]
Hi {victim_name}, this is a friend of {friend_name}. We made a surprise page for them and want your photos on it too: {link}

[social.voice]
Hello {victim_name}, I got your number from {friend_name}. Before we talk, please open {link} so we are looking at the same page.

[spear.ott]
Hi {victim_name}, your number was selected for a loyalty upgrade on this app. Activate it within 24 hours: {link}

[spear.email]
Dear {victim_name},
Your mailbox triggered a storage alert and older mail will be archived tonight. Review your account here: {link}
Support desk

[spear.sms]
{victim_name}, your wallet KYC expires today. Re-verify now to avoid suspension: {link}

[spear.voice]
Hello {victim_name}, this is the service desk about your account. While we talk, please open {link} and keep the reference code ready.

[nontargeted.ott]
Your number won a bonus recharge in today's draw. Claim it before midnight: {link}

[nontargeted.email]
Final notice: an undelivered package is waiting for this address. Confirm the delivery slot here: {link}

[nontargeted.sms]
Congratulations! Your SIM qualifies for double data this month. Activate: {link}

[nontargeted.voice]
This is an automated service message. Your number is due for verification today. Visit {link} to keep your services active.

[vishing.named]
Good afternoon {victim_name}, this is a verification call from {entity}. We flagged unusual activity on your account and need to confirm a few details before it is locked.

[vishing.generic]
Good afternoon, this is a verification call from {entity}. We flagged unusual activity on an account linked to this number and need to confirm a few details before it is locked.

[vishing.clause.birthday]
To speed this up, we already show your date of birth on file as {birthday}; just confirm it.

[vishing.clause.employer]
Our records link the account to your employer, {employer}.

[vishing.clause.gender]
The profile on file lists you as {gender}; confirm it so we pull the right account.

[vishing.clause.hometown]
The account was opened near {hometown}, is that correct?

[vishing.clause.relationship]
For the joint-holder question, our file shows your status as {relationship}.

[vishing.clause.school]
One of the security answers references your school, {school}.

[vishing.clause.work]
We may need to reach you during office hours; we have your occupation as {work}.
)";

std::vector<std::string> scan_placeholders(const std::string& body,
                                           const std::string& section) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') continue;
    const auto close = body.find('}', i);
    if (close == std::string::npos) {
      throw TemplateError("[" + section + "]: unbalanced '{'");
    }
    const std::string token = body.substr(i + 1, close - i - 1);
    if (token.empty() ||
        !std::all_of(token.begin(), token.end(), [](unsigned char c) {
          return std::islower(c) || c == '_';
        })) {
      throw TemplateError("[" + section + "]: bad placeholder {" + token + "}");
    }
    tokens.push_back(token);
    i = close;
  }
  return tokens;
}

int count_token(const std::vector<std::string>& tokens, const std::string& t) {
  return static_cast<int>(std::count(tokens.begin(), tokens.end(), t));
}

// The personalization contract. A template claiming less personalization
// than its class, or smuggling in more, is rejected at load time.
void validate_section(const std::string& key, const std::string& body) {
  const auto tokens = scan_placeholders(body, key);
  const auto dot = key.find('.');
  const std::string head = key.substr(0, dot == std::string::npos ? key.size() : dot);

  if (head == "social" || head == "spear" || head == "nontargeted") {
    const std::string channel = key.substr(dot + 1);
    channel_from_name(channel);  // throws on junk
    for (const auto& t : tokens) {
      if (t != "victim_name" && t != "friend_name" && t != "link") {
        throw TemplateError("[" + key + "]: placeholder {" + t +
                            "} is not allowed here");
      }
    }
    const int victims = count_token(tokens, "victim_name");
    const int friends = count_token(tokens, "friend_name");
    if (head == "social") {
      if (victims < 1) throw TemplateError("[" + key + "]: needs {victim_name}");
      if (friends != 1) {
        throw TemplateError("[" + key + "]: needs exactly one {friend_name}");
      }
    } else if (head == "spear") {
      if (victims < 1) throw TemplateError("[" + key + "]: needs {victim_name}");
      if (friends != 0) {
        throw TemplateError("[" + key + "]: {friend_name} is not allowed here");
      }
    } else {
      if (victims != 0 || friends != 0) {
        throw TemplateError("[" + key + "]: personalization is not allowed here");
      }
    }
    return;
  }

  if (key == "vishing.named") {
    for (const auto& t : tokens) {
      if (t != "victim_name" && t != "entity") {
        throw TemplateError("[" + key + "]: placeholder {" + t +
                            "} is not allowed here");
      }
    }
    if (count_token(tokens, "victim_name") < 1) {
      throw TemplateError("[" + key + "]: needs {victim_name}");
    }
    return;
  }
  if (key == "vishing.generic") {
    for (const auto& t : tokens) {
      if (t != "entity") {
        throw TemplateError("[" + key + "]: placeholder {" + t +
                            "} is not allowed here");
      }
    }
    return;
  }
  if (key.rfind("vishing.clause.", 0) == 0) {
    const std::string attr = key.substr(std::string("vishing.clause.").size());
    if (attr.empty()) throw TemplateError("[" + key + "]: empty attribute");
    for (const auto& t : tokens) {
      if (t != attr) {
        throw TemplateError("[" + key + "]: placeholder {" + t +
                            "} is not allowed here");
      }
    }
    if (count_token(tokens, attr) < 1) {
      throw TemplateError("[" + key + "]: needs {" + attr + "}");
    }
    return;
  }
  throw TemplateError("unknown section [" + key + "]");
}

std::string render(const std::string& body,
                   const std::map<std::string, std::string>& values,
                   std::set<std::string>* used) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') {
      out.push_back(body[i]);
      continue;
    }
    const auto close = body.find('}', i);
    const std::string token = body.substr(i + 1, close - i - 1);
    auto it = values.find(token);
    if (it == values.end()) {
      throw MissingField("no value for placeholder {" + token + "}");
    }
    out += it->second;
    if (used) used->insert(token);
    i = close;
  }
  return out;
}

std::string rtrim_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

const char* attack_base_name(AttackBase base) {
  switch (base) {
    case AttackBase::social: return "social";
    case AttackBase::spear: return "spear";
    case AttackBase::nontargeted: return "nontargeted";
  }
  return "?";
}

const char* vishing_strategy_name(VishingStrategy s) {
  switch (s) {
    case VishingStrategy::spoof_registered: return "spoof_registered";
    case VishingStrategy::fake_registration: return "fake_registration";
    case VishingStrategy::nontargeted: return "nontargeted";
  }
  return "?";
}

std::set<Channel> reachable_channels(const VictimDossier& d, bool ott_present) {
  std::set<Channel> out;
  if (d.name) {
    out.insert(Channel::voice);
    out.insert(Channel::sms);
  }
  if (d.email) out.insert(Channel::email);
  if (ott_present) out.insert(Channel::ott);
  return out;
}

Channel priority_channel(const std::set<Channel>& channels) {
  for (Channel c : {Channel::ott, Channel::email, Channel::sms, Channel::voice}) {
    if (channels.count(c)) return c;
  }
  throw MissingField("no reachable channel");
}

AttackClass classify_attack(const VictimDossier& d) {
  AttackClass cls;
  if (d.friends.source != FriendOrigin::none) {
    cls.base = AttackBase::social;
  } else if (d.name) {
    cls.base = AttackBase::spear;
  } else {
    cls.base = AttackBase::nontargeted;
  }
  cls.whaling = d.is_vanity;
  return cls;
}

TemplateSet TemplateSet::built_in() {
  std::istringstream in(kBuiltInTemplates);
  return load(in);
}

TemplateSet TemplateSet::load(std::istream& in) {
  TemplateSet set;
  std::string line;
  std::string key;
  std::string body;
  const auto flush = [&] {
    if (key.empty()) return;
    body = rtrim_newlines(body);
    validate_section(key, body);
    if (!set.sections_.emplace(key, body).second) {
      throw TemplateError("duplicate section [" + key + "]");
    }
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    if (line.rfind("@link ", 0) == 0) {
      set.link_ = line.substr(6);
      continue;
    }
    if (!line.empty() && line.front() == '[' && line.back() == ']') {
      flush();
      key = line.substr(1, line.size() - 2);
      body.clear();
      continue;
    }
    if (key.empty()) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      throw TemplateError("text outside any section: \"" + line + "\"");
    }
    if (!body.empty()) body += '\n';
    body += line;
  }
  flush();
  return set;
}

TemplateSet TemplateSet::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open template file: " + path);
  return load(in);
}

const std::string* TemplateSet::find(const std::string& key) const {
  auto it = sections_.find(key);
  return it == sections_.end() ? nullptr : &it->second;
}

FriendNameResolver default_friend_names() {
  return [](const std::string& id) {
    static const NameList names = NameList::built_in();
    return name_for_social_id(names, id);
  };
}

AttackVector craft_vector(const VictimDossier& d, const AttackClass& cls,
                          Channel channel, const TemplateSet& templates,
                          const FriendNameResolver& friend_names) {
  const std::string key =
      std::string(attack_base_name(cls.base)) + "." + channel_name(channel);
  const std::string* body = templates.find(key);
  if (!body) throw UnknownTemplate("no template for " + key);
  if (cls.whaling && !d.is_vanity) {
    throw MissingField("whaling class on a non-vanity number");
  }

  std::map<std::string, std::string> values;
  values["link"] = templates.link();
  if (cls.base == AttackBase::social || cls.base == AttackBase::spear) {
    if (!d.name) throw MissingField("class needs the victim's name");
    values["victim_name"] = *d.name;
  }
  if (cls.base == AttackBase::social) {
    if (d.friends.friends.empty()) {
      throw MissingField("social class needs at least one resolved friend");
    }
    values["friend_name"] = friend_names(*d.friends.friends.begin());
  }

  AttackVector v;
  v.channel = channel;
  v.attack_class = cls;
  v.payload = render(*body, values, &v.placeholders_used);
  return v;
}

VishingPlan craft_vishing_plan(const VictimDossier& d,
                               const CallerRegistry& registry,
                               const TemplateSet& templates,
                               const std::string& entity) {
  VishingPlan plan;
  if (auto entry = registry.first_entry()) {
    plan.strategy = VishingStrategy::spoof_registered;
    plan.caller_display_name = entry->display_name;
    plan.linked_social = entry->linked_social;
  } else if (!entity.empty()) {
    plan.strategy = VishingStrategy::fake_registration;
    plan.caller_display_name = entity;
  } else {
    plan.strategy = VishingStrategy::nontargeted;
  }

  std::map<std::string, std::string> values;
  values["entity"] = plan.caller_display_name.empty() ? "customer support"
                                                      : plan.caller_display_name;
  const char* base_key = "vishing.generic";
  if (!d.attributes.empty() && d.name) {
    base_key = "vishing.named";
    values["victim_name"] = *d.name;
  }
  const std::string* base = templates.find(base_key);
  if (!base) throw UnknownTemplate(std::string("no template for ") + base_key);
  plan.script = render(*base, values, nullptr);
  for (const auto& [attr, value] : d.attributes) {
    const std::string* clause = templates.find("vishing.clause." + attr);
    if (!clause) continue;
    plan.script += '\n';
    plan.script += render(*clause, {{attr, value}}, nullptr);
  }
  return plan;
}

}  // namespace numfunnel
