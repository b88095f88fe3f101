// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/text.hpp"

#include <cctype>
#include <cstdio>

namespace bacon {
namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_sentence_end(char c) {
  return c == '.' || c == '!' || c == '?' || c == ';' || c == '\n';
}

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && !is_sentence_end(text[i])) continue;
    std::size_t end = i < text.size() ? i + 1 : i;
    std::string piece = collapse_whitespace(text.substr(start, end - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = end;
  }
  return out;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

std::string category_head(std::string_view name) {
  std::string_view n = trim(name);
  std::size_t end = n.size();
  std::size_t digits = 0;
  while (end > 0 && std::isdigit(static_cast<unsigned char>(n[end - 1])) != 0) {
    --end;
    ++digits;
  }
  if (digits == 0 || end == 0 || !is_space(n[end - 1])) return std::string(n);
  return std::string(trim(n.substr(0, end)));
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string out(buf);
  if (out.rfind("-0.", 0) == 0 && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

}  // namespace bacon
