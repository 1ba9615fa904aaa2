#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace tsg {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that cannot be interpreted (bad letters, bad files, bad descriptors).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

/// Unknown group descriptor or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An index or parameter outside the legal range of an operation.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// xi is the identity element.
class DegenerateXi : public PreconditionError {
 public:
  DegenerateXi() : PreconditionError("xi must not be the identity element") {}
};

/// A configured enumeration or search budget was exhausted.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what,
                         std::optional<std::int64_t> upper_bound = std::nullopt)
      : Error(what), upper_bound_(upper_bound) {}

  /// Best known upper bound on the requested quantity, when one exists.
  std::optional<std::int64_t> upper_bound() const { return upper_bound_; }

 private:
  std::optional<std::int64_t> upper_bound_;
};

/// An internal invariant was breached; always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tsg
