// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/errors.hpp"

#include <utility>

namespace bacon {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MissingSection: return "MissingSection";
    case ParseErrorKind::BadObjectLine: return "BadObjectLine";
    case ParseErrorKind::BadRelationLine: return "BadRelationLine";
    case ParseErrorKind::ReservedCharInText: return "ReservedCharInText";
    case ParseErrorKind::DuplicateName: return "DuplicateName";
    case ParseErrorKind::UnknownSubtitle: return "UnknownSubtitle";
    case ParseErrorKind::UnbalancedMarker: return "UnbalancedMarker";
  }
  return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::string detail)
    : Error("line " + std::to_string(line) + ": " + std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      line_(line),
      detail_(std::move(detail)) {}

SchemaError::SchemaError(std::string pointer, std::string detail)
    : Error("schema error at " + (pointer.empty() ? std::string("/") : pointer) + ": " + detail),
      pointer_(std::move(pointer)),
      detail_(std::move(detail)) {}

}  // namespace bacon
