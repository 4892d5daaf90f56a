#pragma once

#include <stdexcept>
#include <string>

namespace bipsim {

// Mismatched grids, lengths, or matrix shapes between arguments.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// An argument fails a documented requirement (not normalized, not Hermitian,
// out of range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Collapse onto an outcome whose probability is numerically zero.
class ZeroProbabilityError : public PreconditionError {
 public:
  explicit ZeroProbabilityError(const std::string& what) : PreconditionError(what) {}
};

// A solver or measurement failed to reach its accuracy target.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration text; message carries the offending line number(s).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bipsim
