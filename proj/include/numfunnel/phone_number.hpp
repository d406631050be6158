#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace numfunnel {

// A ten-digit national number under a numeric country code.
// Canonical text form is "+<cc><national>", no separators.
struct PhoneNumber {
  int country_code = 91;
  std::string national;  // exactly ten decimal digits

  std::string canonical() const;

  // Numeric key: country_code * 10^10 + national. Used for ordering,
  // draw streams and successor arithmetic.
  std::uint64_t as_u64() const;

  friend auto operator<=>(const PhoneNumber& a, const PhoneNumber& b) {
    if (auto c = a.country_code <=> b.country_code; c != 0) return c;
    return a.national <=> b.national;  // fixed width, so lexicographic == numeric
  }
  friend bool operator==(const PhoneNumber&, const PhoneNumber&) = default;
};

// Accepts "+<cc>XXXXXXXXXX", a bare ten-digit number, or a trunk-prefixed
// "0XXXXXXXXXX". Spaces and hyphens are stripped first. Anything else
// throws MalformedNumber.
PhoneNumber parse_number(std::string_view text, int country_code = 91);

PhoneNumber number_from_national(std::uint64_t national, int country_code = 91);

// Mobile plan check: leading digit 6..9. Kept separate from parsing so
// fixed-line shapes can still be enumerated and filtered later.
bool is_mobile(const PhoneNumber& n);

}  // namespace numfunnel
