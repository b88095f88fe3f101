// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bacon {

/// Characters with grammar meaning in the caption string format.
inline constexpr std::string_view kReservedChars = "%&<>()[];";

std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Splits on '.', '!', '?', ';' and '\n'. The terminator stays with the
/// sentence it ends. Each sentence is whitespace-collapsed; empty pieces are
/// dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Joins with a single space.
std::string join_sentences(const std::vector<std::string>& sentences);

/// "person 2" -> "person"; names without a trailing integer are returned
/// trimmed and unchanged.
std::string category_head(std::string_view name);

/// Fixed-point rendering with exactly `digits` fractional digits.
std::string format_fixed(double value, int digits = 4);

}  // namespace bacon
