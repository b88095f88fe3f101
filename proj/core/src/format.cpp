// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/format.hpp"

#include <algorithm>
#include <set>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"
#include "mentions.hpp"

namespace bacon {
namespace {

constexpr std::string_view kDetailKeys[3] = {"category", "description", "color"};

bool is_reserved(char c) { return kReservedChars.find(c) != std::string_view::npos; }

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                        s.back() == '\v' || s.back() == '\f')) {
    s.remove_suffix(1);
  }
  return s;
}

// A plain field (name, category, predicate, ...) may not contain any grammar
// character or a line break.
void check_plain_field(std::string_view value, std::string_view what, std::size_t line) {
  for (char c : value) {
    if (is_reserved(c) || c == '\n') {
      throw ParseError(ParseErrorKind::ReservedCharInText, line,
                       std::string(what) + " contains reserved character '" +
                           (c == '\n' ? std::string("\\n") : std::string(1, c)) + "'");
    }
  }
}

// Free text may contain <mention> markers and nothing else from the grammar.
void check_free_text(std::string_view text, std::size_t line) {
  std::vector<MentionSpan> spans;
  try {
    spans = scan_mentions(text, true);
  } catch (const ParseError& e) {
    throw ParseError(ParseErrorKind::UnbalancedMarker, line, e.detail());
  }
  std::size_t span = 0;
  for (std::size_t p = 0; p < text.size(); ++p) {
    while (span < spans.size() && spans[span].end <= p) ++span;
    bool marker = span < spans.size() && (p == spans[span].begin || p + 1 == spans[span].end);
    char c = text[p];
    if (c == '\n' || (is_reserved(c) && !marker)) {
      throw ParseError(ParseErrorKind::ReservedCharInText, line,
                       std::string("text contains reserved character '") +
                           (c == '\n' ? std::string("\\n") : std::string(1, c)) + "'");
    }
  }
  for (const auto& m : spans) {
    if (m.name.empty()) throw ParseError(ParseErrorKind::UnbalancedMarker, line, "empty <> mention");
  }
}

bool known_subtitle(const GrammarConfig& cfg, std::string_view subtitle) {
  return std::find(cfg.canonical_subtitles.begin(), cfg.canonical_subtitles.end(), subtitle) !=
         cfg.canonical_subtitles.end();
}

OverallSection parse_overall_line(std::string_view line, std::size_t ln, const GrammarConfig& cfg) {
  if (line.substr(0, 2) != "&&") {
    throw ParseError(ParseErrorKind::UnknownSubtitle, ln, "overall line lacks an &&subtitle&& prefix");
  }
  auto close = line.find("&&", 2);
  if (close == std::string_view::npos) {
    throw ParseError(ParseErrorKind::UnknownSubtitle, ln, "subtitle marker is not closed");
  }
  std::string subtitle(trim(line.substr(2, close - 2)));
  if (subtitle.empty()) throw ParseError(ParseErrorKind::UnknownSubtitle, ln, "empty subtitle");
  check_plain_field(subtitle, "subtitle", ln);
  if (cfg.strict && !known_subtitle(cfg, subtitle)) {
    throw ParseError(ParseErrorKind::UnknownSubtitle, ln, "unknown subtitle '" + subtitle + "'");
  }
  std::string text(trim(line.substr(close + 2)));
  check_free_text(text, ln);
  return {std::move(subtitle), std::move(text)};
}

ObjectEntry parse_object_line(std::string_view line, std::size_t ln) {
  auto bad = [&](std::string detail) { return ParseError(ParseErrorKind::BadObjectLine, ln, std::move(detail)); };
  if (line.empty() || line.front() != '<') throw bad("object line must start with <name>");
  auto gt = line.find('>');
  if (gt == std::string_view::npos) throw bad("object name is not closed with '>'");
  std::string name(trim(line.substr(1, gt - 1)));
  if (name.empty()) throw bad("empty object name");
  check_plain_field(name, "object name", ln);

  std::string_view rest = trim(line.substr(gt + 1));
  if (rest.empty() || rest.front() != '(' || rest.back() != ')') {
    throw bad("object details must follow the name in parentheses");
  }
  std::string_view inner = rest.substr(1, rest.size() - 2);

  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || inner[i] == ';') {
      fields.push_back(inner.substr(start, i - start));
      start = i + 1;
    }
  }
  if (fields.size() != 3) {
    throw bad("expected 3 detail fields (category; description; color), found " +
              std::to_string(fields.size()));
  }
  std::string values[3];
  for (std::size_t k = 0; k < 3; ++k) {
    auto colon = fields[k].find(':');
    if (colon == std::string_view::npos || trim(fields[k].substr(0, colon)) != kDetailKeys[k]) {
      throw bad("detail field " + std::to_string(k + 1) + " must be '" + std::string(kDetailKeys[k]) + ": ...'");
    }
    values[k] = std::string(trim(fields[k].substr(colon + 1)));
    check_plain_field(values[k], kDetailKeys[k], ln);
  }
  return ObjectEntry{std::move(name), std::move(values[0]), std::move(values[1]), std::move(values[2]),
                     std::nullopt, std::nullopt};
}

RelationTriplet parse_relation_line(std::string_view line, std::size_t ln) {
  auto bad = [&](std::string detail) { return ParseError(ParseErrorKind::BadRelationLine, ln, std::move(detail)); };
  std::size_t pos = 0;
  auto take = [&](char open, char close, std::string_view what) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size() || line[pos] != open) {
      throw bad(std::string("expected '") + open + "' before " + std::string(what));
    }
    auto end = line.find(close, pos + 1);
    if (end == std::string_view::npos) throw bad(std::string(what) + " is not closed");
    std::string value(trim(line.substr(pos + 1, end - pos - 1)));
    if (value.empty()) throw bad("empty " + std::string(what));
    check_plain_field(value, what, ln);
    pos = end + 1;
    return value;
  };
  std::string subject = take('<', '>', "subject");
  std::string predicate = take('[', ']', "predicate");
  std::string object = take('<', '>', "object");
  if (!trim(line.substr(pos)).empty()) throw bad("unexpected text after relationship object");
  return {std::move(subject), std::move(predicate), std::move(object)};
}

}  // namespace

void GrammarConfig::check() const {
  std::set<std::string> distinct;
  for (const auto& t : main_titles) {
    if (trim(t).empty()) throw ConfigError("section titles must be non-empty");
    for (char c : t) {
      if (is_reserved(c) || c == '\n') throw ConfigError("section title contains a reserved character");
    }
    distinct.insert(t);
  }
  if (distinct.size() != 3) throw ConfigError("section titles must be distinct");
  if (canonical_subtitles.empty()) throw ConfigError("subtitle list must be non-empty");
}

CaptionGraph parse(std::string_view input, const GrammarConfig& cfg) {
  cfg.check();
  CaptionGraph graph;
  std::set<std::string, std::less<>> names;
  int section = -1;
  std::size_t ln = 0;
  std::size_t last_content_line = 1;

  std::size_t start = 0;
  while (start <= input.size()) {
    auto nl = input.find('\n', start);
    std::string_view raw = input.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++ln;

    std::string_view line = rtrim(raw);
    if (trim(line).empty()) continue;
    last_content_line = ln;

    if (line.substr(0, 2) == "%%") {
      if (line.size() < 4 || line.substr(line.size() - 2) != "%%") {
        throw ParseError(ParseErrorKind::MissingSection, ln, "malformed section header");
      }
      std::string_view title = trim(line.substr(2, line.size() - 4));
      auto it = std::find(cfg.main_titles.begin(), cfg.main_titles.end(), title);
      if (it == cfg.main_titles.end()) {
        throw ParseError(ParseErrorKind::MissingSection, ln, "unknown section '" + std::string(title) + "'");
      }
      int idx = static_cast<int>(it - cfg.main_titles.begin());
      if (idx > section + 1) {
        throw ParseError(ParseErrorKind::MissingSection, ln,
                         "section '" + cfg.main_titles[static_cast<std::size_t>(section + 1)] +
                             "' missing before '" + std::string(title) + "'");
      }
      if (idx <= section) {
        throw ParseError(ParseErrorKind::MissingSection, ln, "section '" + std::string(title) + "' repeated");
      }
      section = idx;
      continue;
    }

    switch (section) {
      case -1:
        throw ParseError(ParseErrorKind::MissingSection, ln,
                         "content before section '" + cfg.main_titles[0] + "'");
      case 0:
        graph.overall.push_back(parse_overall_line(line, ln, cfg));
        break;
      case 1: {
        ObjectEntry entry = parse_object_line(line, ln);
        if (!names.insert(entry.name).second) {
          throw ParseError(ParseErrorKind::DuplicateName, ln, "object '" + entry.name + "' listed twice");
        }
        graph.objects.push_back(std::move(entry));
        break;
      }
      default:
        graph.relationships.push_back(parse_relation_line(line, ln));
        break;
    }
  }

  if (section < 2) {
    throw ParseError(ParseErrorKind::MissingSection, last_content_line,
                     "section '" + cfg.main_titles[static_cast<std::size_t>(section + 1)] + "' missing");
  }
  return graph;
}

std::string serialize(const CaptionGraph& graph, const GrammarConfig& cfg) {
  cfg.check();
  std::vector<std::string> lines;
  auto ln = [&] { return lines.size() + 1; };

  lines.push_back("%%" + cfg.main_titles[0] + "%%");
  for (const auto& s : graph.overall) {
    std::string subtitle(trim(s.subtitle));
    std::string text(trim(s.text));
    if (subtitle.empty()) throw ParseError(ParseErrorKind::UnknownSubtitle, ln(), "empty subtitle");
    check_plain_field(subtitle, "subtitle", ln());
    if (cfg.strict && !known_subtitle(cfg, subtitle)) {
      throw ParseError(ParseErrorKind::UnknownSubtitle, ln(), "unknown subtitle '" + subtitle + "'");
    }
    check_free_text(text, ln());
    lines.push_back("&&" + subtitle + "&&" + (text.empty() ? "" : " " + text));
  }

  lines.push_back("%%" + cfg.main_titles[1] + "%%");
  for (const auto& o : graph.objects) {
    std::string name(trim(o.name));
    std::string category(trim(o.category));
    std::string description(trim(o.description));
    std::string color(trim(o.color));
    check_plain_field(name, "object name", ln());
    check_plain_field(category, "category", ln());
    check_plain_field(description, "description", ln());
    check_plain_field(color, "color", ln());
    lines.push_back("<" + name + ">(category: " + category + "; description: " + description +
                    "; color: " + color + ")");
  }

  lines.push_back("%%" + cfg.main_titles[2] + "%%");
  for (const auto& r : graph.relationships) {
    std::string subject(trim(r.subject));
    std::string predicate(trim(r.predicate));
    std::string object(trim(r.object));
    check_plain_field(subject, "subject", ln());
    check_plain_field(predicate, "predicate", ln());
    check_plain_field(object, "object", ln());
    lines.push_back("<" + subject + "> [" + predicate + "] <" + object + ">");
  }

  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

}  // namespace bacon
