#pragma once

#include <stdexcept>
#include <string>

namespace lucy {

// Base for every error thrown by the library. Catching lucy::Error at the
// CLI boundary is sufficient to map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: unknown preset, unreadable config file, empty eval set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Agent output that could not be turned into a structured response, even
// after repair retries.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A period in an agent response that cannot be snapped onto any candidate
// clip. Subtype of ParseError so repair retries cover it.
class OutOfRangeError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A period handed to neighborhood expansion that is not a member of the
// division it is supposed to come from.
class MembershipError : public Error {
 public:
  using Error::Error;
};

// Captioning backend failure. Carries the clip that failed.
class CaptionError : public Error {
 public:
  CaptionError(const std::string& what, long long start_s, long long end_s)
      : Error(what), start_s(start_s), end_s(end_s) {}
  explicit CaptionError(const std::string& what) : Error(what), start_s(-1), end_s(-1) {}
  long long start_s;
  long long end_s;
};

// Frame extraction / decoding failure. Carries the decoder's stderr.
class MediaError : public Error {
 public:
  using Error::Error;
};

// Malformed memory cache record. Loading skips the record instead of
// throwing; this type exists for callers that want to fail hard.
class CacheError : public Error {
 public:
  using Error::Error;
};

// Rendered prompt exceeds the context budget even after eviction.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// No eligible period left to explore.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

// Conflicting insertion positions when splicing needle clips into a base
// timeline.
class OverlapError : public Error {
 public:
  using Error::Error;
};

// Prompt rendering precondition violated (empty question, empty memory).
class TemplateError : public Error {
 public:
  using Error::Error;
};

// A scripted agent received a prompt it has no rule for.
class UnknownTemplateError : public Error {
 public:
  using Error::Error;
};

// Transport-level backend failure (connection refused, non-retryable
// status, exhausted retry budget).
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace lucy
