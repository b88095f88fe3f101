// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/model.hpp"

#include <algorithm>
#include <map>

#include "bacon/errors.hpp"
#include "bacon/providers.hpp"
#include "bacon/text.hpp"
#include "mentions.hpp"

namespace bacon {

std::vector<MentionSpan> scan_mentions(std::string_view text, bool strict) {
  std::vector<MentionSpan> out;
  constexpr std::size_t kClosed = std::string_view::npos;
  std::size_t open = kClosed;
  auto line_of = [&](std::size_t pos) {
    return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '<') {
      if (open != kClosed && strict) {
        throw ParseError(ParseErrorKind::UnbalancedMarker, line_of(open), "'<' opened twice without '>'");
      }
      open = i;
    } else if (c == '>') {
      if (open == kClosed) {
        if (strict) throw ParseError(ParseErrorKind::UnbalancedMarker, line_of(i), "'>' without matching '<'");
        continue;
      }
      out.push_back({open, i + 1, std::string(trim(text.substr(open + 1, i - open - 1)))});
      open = kClosed;
    }
  }
  if (open != kClosed && strict) {
    throw ParseError(ParseErrorKind::UnbalancedMarker, line_of(open), "'<' without matching '>'");
  }
  return out;
}

const ObjectEntry* CaptionGraph::find_object(std::string_view name) const {
  auto key = trim(name);
  for (const auto& o : objects) {
    if (trim(o.name) == key) return &o;
  }
  return nullptr;
}

std::string_view to_string(Severity s) {
  return s == Severity::Warning ? "warning" : "error";
}

std::string_view to_string(GraphSection s) {
  switch (s) {
    case GraphSection::Overall: return "overall";
    case GraphSection::Objects: return "objects";
    case GraphSection::Relationships: return "relationships";
  }
  return "unknown";
}

bool ValidationReport::has_errors() const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) { return v.severity == Severity::Error; });
}

namespace {

std::optional<long> trailing_index(std::string_view name) {
  std::string head = category_head(name);
  std::string_view n = trim(name);
  if (head.size() == n.size()) return std::nullopt;
  std::string_view digits = trim(n.substr(head.size()));
  try {
    return std::stol(std::string(digits));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void check_overall(const CaptionGraph& g, const std::set<std::string, std::less<>>& names,
                   std::vector<Violation>& out) {
  auto add = [&](Severity sev, std::optional<std::size_t> idx, std::string msg) {
    out.push_back({sev, GraphSection::Overall, idx, std::move(msg)});
  };
  if (g.overall.empty()) add(Severity::Error, std::nullopt, "overall empty");
  for (std::size_t i = 0; i < g.overall.size(); ++i) {
    const auto& s = g.overall[i];
    if (trim(s.subtitle).empty()) add(Severity::Error, i, "empty subtitle");
    std::vector<MentionSpan> spans;
    try {
      spans = scan_mentions(s.text, true);
    } catch (const ParseError& e) {
      add(Severity::Error, i, "unbalanced mention marker: " + e.detail());
      continue;
    }
    std::size_t span = 0;
    for (std::size_t p = 0; p < s.text.size(); ++p) {
      while (span < spans.size() && spans[span].end <= p) ++span;
      bool in_marker = span < spans.size() && p >= spans[span].begin;
      char c = s.text[p];
      bool is_marker_char = in_marker && (p == spans[span].begin || p + 1 == spans[span].end);
      if (kReservedChars.find(c) != std::string_view::npos && !is_marker_char) {
        add(Severity::Error, i, std::string("reserved character '") + c + "' in text");
        break;
      }
    }
    for (const auto& m : spans) {
      if (m.name.empty()) {
        add(Severity::Error, i, "empty mention");
      } else if (!names.contains(m.name)) {
        add(Severity::Error, i, "unknown mention " + m.name);
      }
    }
  }
}

void check_objects(const CaptionGraph& g, std::vector<Violation>& out) {
  auto add = [&](Severity sev, std::optional<std::size_t> idx, std::string msg) {
    out.push_back({sev, GraphSection::Objects, idx, std::move(msg)});
  };
  if (g.objects.empty()) add(Severity::Error, std::nullopt, "object list empty");

  std::map<std::string, std::size_t> category_count;
  for (const auto& o : g.objects) ++category_count[std::string(trim(o.category))];

  std::set<std::string> seen_names;
  std::map<std::string, std::set<long>> seen_indices;
  for (std::size_t i = 0; i < g.objects.size(); ++i) {
    const auto& o = g.objects[i];
    std::string name(trim(o.name));
    std::string category(trim(o.category));
    if (name.empty()) {
      add(Severity::Error, i, "empty name");
      continue;
    }
    if (!seen_names.insert(name).second) add(Severity::Error, i, "duplicate name " + name);
    if (category.empty()) add(Severity::Error, i, "empty category");
    if (category_count[category] > 1) {
      auto idx = trailing_index(name);
      if (!idx) {
        add(Severity::Error, i, "missing index for shared category " + category);
      } else if (!seen_indices[category].insert(*idx).second) {
        add(Severity::Error, i, "duplicate index " + std::to_string(*idx) + " in category " + category);
      }
    }
  }
}

void check_relationships(const CaptionGraph& g, const std::set<std::string, std::less<>>& names,
                         std::vector<Violation>& out) {
  auto add = [&](Severity sev, std::size_t idx, std::string msg) {
    out.push_back({sev, GraphSection::Relationships, idx, std::move(msg)});
  };
  for (std::size_t i = 0; i < g.relationships.size(); ++i) {
    const auto& r = g.relationships[i];
    std::string subject(trim(r.subject));
    std::string object(trim(r.object));
    if (trim(r.predicate).empty()) add(Severity::Error, i, "empty predicate");
    if (!names.contains(subject)) add(Severity::Error, i, "unknown endpoint " + subject);
    if (!names.contains(object)) add(Severity::Error, i, "unknown endpoint " + object);
    if (subject == object) add(Severity::Warning, i, "self-relation " + subject);
  }
}

}  // namespace

ValidationReport validate(const CaptionGraph& graph) {
  std::set<std::string, std::less<>> names;
  for (const auto& o : graph.objects) {
    auto n = trim(o.name);
    if (!n.empty()) names.emplace(n);
  }
  ValidationReport report;
  check_overall(graph, names, report.violations);
  check_objects(graph, report.violations);
  check_relationships(graph, names, report.violations);
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.section != b.section) return a.section < b.section;
                     return a.index < b.index;  // nullopt sorts first
                   });
  return report;
}

std::vector<std::string> mentioned_objects(std::string_view text) {
  std::vector<std::string> out;
  for (auto& m : scan_mentions(text, true)) {
    if (std::find(out.begin(), out.end(), m.name) == out.end()) out.push_back(std::move(m.name));
  }
  return out;
}

std::string strip_sentences_mentioning(std::string_view text, const std::set<std::string>& names) {
  std::vector<std::string> kept;
  for (auto& sentence : split_sentences(text)) {
    auto spans = scan_mentions(sentence, false);
    bool hit = std::any_of(spans.begin(), spans.end(),
                           [&](const MentionSpan& m) { return names.contains(m.name); });
    if (!hit) kept.push_back(std::move(sentence));
  }
  return join_sentences(kept);
}

DedupeResult dedupe_relationships(const std::vector<RelationTriplet>& triplets,
                                  const TextEmbedder* embedder, double inverse_threshold) {
  if (embedder != nullptr && !(inverse_threshold >= 0.0 && inverse_threshold <= 1.0)) {
    throw ConfigError("inverse-relationship threshold must lie in [0,1]");
  }
  std::vector<EmbeddingVector> predicate_vecs;
  if (embedder != nullptr) {
    std::vector<std::string> predicates;
    predicates.reserve(triplets.size());
    for (const auto& t : triplets) predicates.emplace_back(trim(t.predicate));
    predicate_vecs = embedder->embed(predicates);
  }

  DedupeResult out;
  std::vector<std::size_t> kept_idx;
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    bool drop = false;
    for (std::size_t k : kept_idx) {
      const auto& u = triplets[k];
      bool same_dir = trim(t.subject) == trim(u.subject) && trim(t.object) == trim(u.object);
      bool reversed = trim(t.subject) == trim(u.object) && trim(t.object) == trim(u.subject);
      if (same_dir && trim(t.predicate) == trim(u.predicate)) {
        drop = true;
        break;
      }
      if (embedder != nullptr && (same_dir || reversed) &&
          cosine(predicate_vecs[i], predicate_vecs[k]) >= inverse_threshold) {
        drop = true;
        break;
      }
    }
    if (drop) {
      out.dropped.push_back(t);
    } else {
      kept_idx.push_back(i);
      out.kept.push_back(t);
    }
  }
  return out;
}

std::vector<ObjectEntry> canonical_numbering(const std::vector<ObjectEntry>& objects) {
  std::map<std::string, int> counters;
  std::vector<ObjectEntry> out = objects;
  for (auto& o : out) {
    std::string category(trim(o.category));
    o.name = category + " " + std::to_string(++counters[category]);
  }
  return out;
}

CaptionGraph renumber_graph(const CaptionGraph& graph) {
  CaptionGraph out = graph;
  out.objects = canonical_numbering(graph.objects);
  std::map<std::string, std::string, std::less<>> rename;
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    rename.emplace(std::string(trim(graph.objects[i].name)), out.objects[i].name);
  }
  auto mapped = [&](const std::string& name) {
    auto it = rename.find(trim(name));
    return it == rename.end() ? name : it->second;
  };
  for (auto& r : out.relationships) {
    r.subject = mapped(r.subject);
    r.object = mapped(r.object);
  }
  for (auto& s : out.overall) {
    std::string rewritten;
    std::size_t pos = 0;
    for (const auto& m : scan_mentions(s.text, false)) {
      rewritten.append(s.text, pos, m.begin - pos);
      rewritten += "<" + mapped(m.name) + ">";
      pos = m.end;
    }
    rewritten.append(s.text, pos, std::string::npos);
    s.text = std::move(rewritten);
  }
  return out;
}

}  // namespace bacon
