#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numfunnel/phone_number.hpp"

namespace numfunnel {

struct NumberRange {
  PhoneNumber seed;
  std::uint64_t count = 0;
};

// Consecutive numbers starting at the seed, strictly increasing.
// Throws RangeExhausted if the range would run past 9999999999.
std::vector<PhoneNumber> enumerate_from_seed(const NumberRange& range);

// Digit template for memorable numbers: ten characters, each a fixed
// digit or the wildcard 'x'. Separators in the source text are ignored,
// so "xx-85-85-85-xx" and "xx858585xx" are the same pattern.
struct VanityPattern {
  std::string digits;  // ten chars over [0-9x]

  static VanityPattern parse(std::string_view text);

  int wildcard_count() const;
  bool matches(const PhoneNumber& n) const;

  friend bool operator==(const VanityPattern&, const VanityPattern&) = default;
};

// All assignments of the wildcards, in increasing numeric order.
// mobile_only keeps numbers whose leading digit is 6..9; limit caps the
// emitted count after filtering.
std::vector<PhoneNumber> expand_vanity_pattern(
    const VanityPattern& pattern, bool mobile_only = false,
    std::optional<std::uint64_t> limit = std::nullopt, int country_code = 91);

// One pattern per line; blank lines and '#' comments skipped.
std::vector<VanityPattern> load_pattern_file(std::istream& in);
std::vector<VanityPattern> load_pattern_file(const std::string& path);

bool matches_any(const std::vector<VanityPattern>& patterns,
                 const PhoneNumber& n);

// Plain text lists, one canonical number per line.
void write_number_list(std::ostream& out, const std::vector<PhoneNumber>& numbers);
std::vector<PhoneNumber> read_number_list(std::istream& in, int country_code = 91);
std::vector<PhoneNumber> read_number_list_file(const std::string& path,
                                               int country_code = 91);

}  // namespace numfunnel
