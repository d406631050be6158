#include "numfunnel/config_io.hpp"

#include <fstream>
#include <sstream>

#include "numfunnel/errors.hpp"

namespace numfunnel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_rate(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid(key + ": not a number: \"" + value + "\"");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid(key + ": not an integer: \"" + value + "\"");
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  const std::int64_t v = parse_int(key, value);
  if (v < 0) throw ConfigInvalid(key + ": must be non-negative");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

WorldConfig load_world_config(std::istream& in) {
  WorldConfig cfg;
  bool saw_mix = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigInvalid("line " + std::to_string(line_no) +
                          ": expected key=value, got \"" + t + "\"");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "seed") {
      cfg.seed = parse_uint(key, value);
    } else if (key == "country_code") {
      cfg.country_code = static_cast<int>(parse_int(key, value));
    } else if (key == "country") {
      cfg.country = value;
    } else if (key == "lookup_hit_rate") {
      cfg.lookup_hit_rate = parse_rate(key, value);
    } else if (key == "social_link_rate") {
      cfg.social_link_rate = parse_rate(key, value);
    } else if (key == "friendlist_public_rate") {
      cfg.friendlist_public_rate = parse_rate(key, value);
    } else if (key == "public_sources_rate") {
      cfg.public_sources_rate = parse_rate(key, value);
    } else if (key == "ott_rate_social") {
      cfg.ott_rate_social = parse_rate(key, value);
    } else if (key == "ott_rate_named") {
      cfg.ott_rate_named = parse_rate(key, value);
    } else if (key == "email_rate") {
      cfg.email_rate = parse_rate(key, value);
    } else if (key.rfind("attribute_rate.", 0) == 0) {
      cfg.attribute_rates[key.substr(15)] = parse_rate(key, value);
    } else if (key == "friends_min") {
      cfg.friends_min = static_cast<int>(parse_int(key, value));
    } else if (key == "friends_max") {
      cfg.friends_max = static_cast<int>(parse_int(key, value));
    } else if (key == "friend_pool_size") {
      cfg.friend_pool_size = parse_uint(key, value);
    } else if (key == "public_sources_size") {
      cfg.public_sources_size = static_cast<int>(parse_int(key, value));
    } else if (key == "match_fraction") {
      // "0.97:0.68", repeatable; the first occurrence clears the default mix
      const auto colon = value.find(':');
      if (colon == std::string::npos) {
        throw ConfigInvalid("match_fraction: expected fraction:weight, got \"" +
                            value + "\"");
      }
      if (!saw_mix) {
        cfg.match_fraction_mix.clear();
        saw_mix = true;
      }
      cfg.match_fraction_mix.emplace_back(
          parse_rate(key, trim(value.substr(0, colon))),
          parse_rate(key, trim(value.substr(colon + 1))));
    } else if (key == "vanity_pattern") {
      try {
        cfg.vanity_patterns.push_back(VanityPattern::parse(value));
      } catch (const MalformedPattern& e) {
        throw ConfigInvalid(std::string("vanity_pattern: ") + e.what());
      }
    } else if (key == "names_file") {
      cfg.names_file = value;
    } else {
      throw ConfigInvalid("line " + std::to_string(line_no) +
                          ": unknown key \"" + key + "\"");
    }
  }
  cfg.validate();
  return cfg;
}

WorldConfig load_world_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open world config: " + path);
  return load_world_config(in);
}

void write_world_config(std::ostream& out, const WorldConfig& cfg) {
  out << "seed=" << cfg.seed << '\n'
      << "country_code=" << cfg.country_code << '\n'
      << "country=" << cfg.country << '\n';
  const auto rate = [&out](const char* key, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s=%.9f\n", key, v);
    out << buf;
  };
  rate("lookup_hit_rate", cfg.lookup_hit_rate);
  rate("social_link_rate", cfg.social_link_rate);
  rate("friendlist_public_rate", cfg.friendlist_public_rate);
  rate("public_sources_rate", cfg.public_sources_rate);
  rate("ott_rate_social", cfg.ott_rate_social);
  rate("ott_rate_named", cfg.ott_rate_named);
  rate("email_rate", cfg.email_rate);
  for (const auto& [attr, r] : cfg.attribute_rates) {
    rate(("attribute_rate." + attr).c_str(), r);
  }
  out << "friends_min=" << cfg.friends_min << '\n'
      << "friends_max=" << cfg.friends_max << '\n'
      << "friend_pool_size=" << cfg.friend_pool_size << '\n'
      << "public_sources_size=" << cfg.public_sources_size << '\n';
  for (const auto& [fraction, weight] : cfg.match_fraction_mix) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "match_fraction=%.4f:%.4f\n", fraction,
                  weight);
    out << buf;
  }
  for (const auto& p : cfg.vanity_patterns) {
    out << "vanity_pattern=" << p.digits << '\n';
  }
  if (!cfg.names_file.empty()) out << "names_file=" << cfg.names_file << '\n';
}

}  // namespace numfunnel
