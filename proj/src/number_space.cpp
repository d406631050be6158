#include "numfunnel/number_space.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "numfunnel/errors.hpp"

namespace numfunnel {

namespace {

constexpr std::uint64_t kMaxNational = 9'999'999'999ull;

std::uint64_t national_value(const PhoneNumber& n) {
  std::uint64_t v = 0;
  for (char c : n.national) v = v * 10 + static_cast<std::uint64_t>(c - '0');
  return v;
}

std::string trimmed(const std::string& line) {
  auto b = line.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = line.find_last_not_of(" \t\r");
  return line.substr(b, e - b + 1);
}

}  // namespace

std::vector<PhoneNumber> enumerate_from_seed(const NumberRange& range) {
  std::vector<PhoneNumber> out;
  if (range.count == 0) return out;
  const std::uint64_t start = national_value(range.seed);
  if (range.count - 1 > kMaxNational - start) {
    throw RangeExhausted("range of " + std::to_string(range.count) +
                         " from " + range.seed.canonical() +
                         " runs past the number space");
  }
  out.reserve(range.count);
  for (std::uint64_t i = 0; i < range.count; ++i) {
    out.push_back(number_from_national(start + i, range.seed.country_code));
  }
  return out;
}

VanityPattern VanityPattern::parse(std::string_view text) {
  std::string digits;
  digits.reserve(10);
  for (char c : text) {
    if (c == ' ' || c == '-') continue;
    if (c == 'x' || c == 'X') {
      digits.push_back('x');
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else {
      throw MalformedPattern("bad character '" + std::string(1, c) +
                             "' in pattern \"" + std::string(text) + "\"");
    }
  }
  if (digits.size() != 10) {
    throw MalformedPattern("pattern \"" + std::string(text) +
                           "\" has " + std::to_string(digits.size()) +
                           " positions, want 10");
  }
  return VanityPattern{std::move(digits)};
}

int VanityPattern::wildcard_count() const {
  int k = 0;
  for (char c : digits) k += (c == 'x');
  return k;
}

bool VanityPattern::matches(const PhoneNumber& n) const {
  if (n.national.size() != digits.size()) return false;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] != 'x' && digits[i] != n.national[i]) return false;
  }
  return true;
}

std::vector<PhoneNumber> expand_vanity_pattern(
    const VanityPattern& pattern, bool mobile_only,
    std::optional<std::uint64_t> limit, int country_code) {
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < pattern.digits.size(); ++i) {
    if (pattern.digits[i] == 'x') slots.push_back(i);
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots.size(); ++i) total *= 10;

  std::vector<PhoneNumber> out;
  if (limit && *limit == 0) return out;
  // Filling leftmost wildcards with the most significant counter digits
  // makes the walk itself numerically increasing.
  std::string nat = pattern.digits;
  for (std::uint64_t v = 0; v < total; ++v) {
    std::uint64_t rem = v;
    for (std::size_t i = slots.size(); i-- > 0;) {
      nat[slots[i]] = static_cast<char>('0' + rem % 10);
      rem /= 10;
    }
    if (mobile_only && !(nat[0] >= '6' && nat[0] <= '9')) continue;
    out.push_back(PhoneNumber{country_code, nat});
    if (limit && out.size() == *limit) break;
  }
  return out;
}

std::vector<VanityPattern> load_pattern_file(std::istream& in) {
  std::vector<VanityPattern> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(VanityPattern::parse(t));
  }
  return out;
}

std::vector<VanityPattern> load_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open pattern file: " + path);
  return load_pattern_file(in);
}

bool matches_any(const std::vector<VanityPattern>& patterns,
                 const PhoneNumber& n) {
  for (const auto& p : patterns) {
    if (p.matches(n)) return true;
  }
  return false;
}

void write_number_list(std::ostream& out,
                       const std::vector<PhoneNumber>& numbers) {
  for (const auto& n : numbers) out << n.canonical() << '\n';
}

std::vector<PhoneNumber> read_number_list(std::istream& in, int country_code) {
  std::vector<PhoneNumber> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(parse_number(t, country_code));
  }
  return out;
}

std::vector<PhoneNumber> read_number_list_file(const std::string& path,
                                               int country_code) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open number list: " + path);
  return read_number_list(in, country_code);
}

}  // namespace numfunnel
