// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bacon {

// A <name> marker; [begin, end) covers both angle brackets.
struct MentionSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string name;
};

// strict: throw ParseError{UnbalancedMarker} on stray or unclosed markers.
// Otherwise unmatched brackets are skipped.
std::vector<MentionSpan> scan_mentions(std::string_view text, bool strict);

}  // namespace bacon
