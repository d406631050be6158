#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace numfunnel {

struct MalformedNumber : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedPattern : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorruptFixture : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoolExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All credentials in the pool are out of budget for the current window.
struct RateLimitedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySourceSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownTemplate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Load-time template problems: bad section key, placeholder not allowed.
struct TemplateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BriefingFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyCohort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedResponse : std::runtime_error {
  std::size_t line;
  std::string reason;
  MalformedResponse(std::size_t line_no, const std::string& why)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + why),
        line(line_no),
        reason(why) {}
};

}  // namespace numfunnel
