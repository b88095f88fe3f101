// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bacon {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
  MissingSection,
  BadObjectLine,
  BadRelationLine,
  ReservedCharInText,
  DuplicateName,
  UnknownSubtitle,
  UnbalancedMarker,
};

std::string_view to_string(ParseErrorKind kind);

/// Grammar violation in the caption string format. `line` is 1-based.
/// The serializer reuses this type with `line` set to the output line it
/// was about to write.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::string detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::string detail_;
};

/// JSON input that does not match the expected schema. `pointer` is an
/// RFC 6901 JSON pointer to the offending value.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, std::string detail);

  const std::string& pointer() const noexcept { return pointer_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string pointer_;
  std::string detail_;
};

class InvalidBox : public Error {
 public:
  using Error::Error;
};

class InvalidMask : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyMask : public Error {
 public:
  using Error::Error;
};

/// A model backend could not answer: unreachable sidecar, unknown image id,
/// or a missing fixture entry.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class UnknownSlot : public Error {
 public:
  using Error::Error;
};

class ModeUnavailable : public Error {
 public:
  using Error::Error;
};

class NoGroundedObjects : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or argument combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bacon
