#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dialkit {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag, the what() string is the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct InvalidAngle : Error {
  explicit InvalidAngle(const std::string& msg) : Error("InvalidAngle", msg) {}
};

struct DegenerateSegment : Error {
  explicit DegenerateSegment(const std::string& msg) : Error("DegenerateSegment", msg) {}
};

/// Thrown for dial counts outside {4, 5}. When raised while assembling a
/// reading it carries the offending count and the best-effort per-dial
/// digits extracted so far, so callers can still score partial sequences.
class UnsupportedDialCount : public Error {
 public:
  explicit UnsupportedDialCount(int count, std::string partial_digits = "")
      : Error("UnsupportedDialCount",
              "dial count " + std::to_string(count) + " not in {4, 5}"),
        count_(count),
        partial_digits_(std::move(partial_digits)) {}

  int count() const noexcept { return count_; }
  const std::string& partial_digits() const noexcept { return partial_digits_; }

 private:
  int count_;
  std::string partial_digits_;
};

struct ConsumptionOverflow : Error {
  explicit ConsumptionOverflow(const std::string& msg) : Error("ConsumptionOverflow", msg) {}
};

struct InvalidMeterSpec : Error {
  explicit InvalidMeterSpec(const std::string& msg) : Error("InvalidMeterSpec", msg) {}
};

struct InsufficientDials : Error {
  explicit InsufficientDials(const std::string& msg) : Error("InsufficientDials", msg) {}
};

struct EmptyCalibrationSet : Error {
  explicit EmptyCalibrationSet(const std::string& msg) : Error("EmptyCalibrationSet", msg) {}
};

struct EmptyEvaluationSet : Error {
  explicit EmptyEvaluationSet(const std::string& msg) : Error("EmptyEvaluationSet", msg) {}
};

struct EmptyGroundTruth : Error {
  explicit EmptyGroundTruth(const std::string& msg) : Error("EmptyGroundTruth", msg) {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& msg) : Error("ShapeMismatch", msg) {}
};

/// Malformed input that could not be decoded at all. Carries the 1-based
/// line number for line-delimited formats (0 when not line-oriented).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("ParseError", "line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a schema or value invariant. `field()`
/// is the path of the offending field, e.g. "dials[0].bbox.w".
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string field, const std::string& msg)
      : Error("ValidationError", field + ": " + msg), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

}  // namespace dialkit
