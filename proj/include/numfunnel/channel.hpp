#pragma once

#include <string>

#include "numfunnel/errors.hpp"

namespace numfunnel {

enum class Channel { ott, email, sms, voice };

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::ott: return "ott";
    case Channel::email: return "email";
    case Channel::sms: return "sms";
    case Channel::voice: return "voice";
  }
  return "?";
}

inline Channel channel_from_name(const std::string& s) {
  if (s == "ott") return Channel::ott;
  if (s == "email") return Channel::email;
  if (s == "sms") return Channel::sms;
  if (s == "voice") return Channel::voice;
  throw ConfigInvalid("unknown channel: " + s);
}

}  // namespace numfunnel
