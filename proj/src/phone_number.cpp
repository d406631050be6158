#include "numfunnel/phone_number.hpp"

#include <algorithm>
#include <cctype>

#include "numfunnel/errors.hpp"

namespace numfunnel {

std::string PhoneNumber::canonical() const {
  return "+" + std::to_string(country_code) + national;
}

std::uint64_t PhoneNumber::as_u64() const {
  std::uint64_t nat = 0;
  for (char c : national) nat = nat * 10 + static_cast<std::uint64_t>(c - '0');
  return static_cast<std::uint64_t>(country_code) * 10'000'000'000ull + nat;
}

PhoneNumber parse_number(std::string_view text, int country_code) {
  std::string t;
  t.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '-') continue;
    t.push_back(c);
  }
  const bool plus = !t.empty() && t.front() == '+';
  if (plus) t.erase(t.begin());
  if (t.empty() ||
      !std::all_of(t.begin(), t.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    throw MalformedNumber("not a phone number: \"" + std::string(text) + "\"");
  }
  const std::string cc = std::to_string(country_code);
  if (plus) {
    if (t.size() != cc.size() + 10 || t.compare(0, cc.size(), cc) != 0) {
      throw MalformedNumber("expected +" + cc + " followed by ten digits: \"" +
                            std::string(text) + "\"");
    }
    t.erase(0, cc.size());
  } else if (t.size() == 11 && t.front() == '0') {
    t.erase(0, 1);
  } else if (t.size() != 10) {
    throw MalformedNumber("expected ten digits, got " +
                          std::to_string(t.size()) + ": \"" +
                          std::string(text) + "\"");
  }
  return PhoneNumber{country_code, std::move(t)};
}

PhoneNumber number_from_national(std::uint64_t national, int country_code) {
  if (national > 9'999'999'999ull) {
    throw MalformedNumber("national number out of range: " +
                          std::to_string(national));
  }
  std::string digits = std::to_string(national);
  digits.insert(0, 10 - digits.size(), '0');
  return PhoneNumber{country_code, std::move(digits)};
}

bool is_mobile(const PhoneNumber& n) {
  const char d = n.national.empty() ? '0' : n.national.front();
  return d >= '6' && d <= '9';
}

}  // namespace numfunnel
