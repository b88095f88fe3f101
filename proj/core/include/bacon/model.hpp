// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bacon/geometry.hpp"

namespace bacon {

class TextEmbedder;

struct OverallSection {
  std::string subtitle;
  std::string text;

  friend bool operator==(const OverallSection&, const OverallSection&) = default;
};

struct ObjectEntry {
  std::string name;
  std::string category;
  std::string description;
  std::string color;
  std::optional<Box> box;
  std::optional<MaskRLE> mask;

  friend bool operator==(const ObjectEntry&, const ObjectEntry&) = default;
};

struct RelationTriplet {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const RelationTriplet&, const RelationTriplet&) = default;
};

/// Structured caption: overall description sections, the object list, and
/// directed relationships between named objects.
struct CaptionGraph {
  std::vector<OverallSection> overall;
  std::vector<ObjectEntry> objects;
  std::vector<RelationTriplet> relationships;

  const ObjectEntry* find_object(std::string_view name) const;

  friend bool operator==(const CaptionGraph&, const CaptionGraph&) = default;
};

enum class Severity { Warning, Error };
enum class GraphSection { Overall, Objects, Relationships };

std::string_view to_string(Severity s);
std::string_view to_string(GraphSection s);

struct Violation {
  Severity severity = Severity::Error;
  GraphSection section = GraphSection::Overall;
  /// Index within the section; absent for section-level findings.
  std::optional<std::size_t> index;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const noexcept { return violations.empty(); }
  bool has_errors() const noexcept;
};

/// Checks every structural invariant of the graph. Violations are ordered by
/// (section, index); section-level findings sort before indexed ones.
ValidationReport validate(const CaptionGraph& graph);

/// Names marked with <...> in `text`, in order of first appearance without
/// duplicates. Throws ParseError{UnbalancedMarker} on a marker that is not
/// closed (or closed without being opened).
std::vector<std::string> mentioned_objects(std::string_view text);

/// Drops every sentence that mentions one of `names` and rejoins the rest
/// with single spaces.
std::string strip_sentences_mentioning(std::string_view text, const std::set<std::string>& names);

struct DedupeResult {
  std::vector<RelationTriplet> kept;
  std::vector<RelationTriplet> dropped;
};

inline constexpr double kDefaultInverseThreshold = 0.95;

/// Removes exact duplicates. With an embedder, a triplet is also dropped when
/// an earlier kept triplet joins the same unordered endpoint pair and the two
/// predicates have cosine >= `inverse_threshold`.
DedupeResult dedupe_relationships(const std::vector<RelationTriplet>& triplets,
                                  const TextEmbedder* embedder = nullptr,
                                  double inverse_threshold = kDefaultInverseThreshold);

/// Renames objects to "<category> <k>" with k counted per category in
/// order of appearance.
std::vector<ObjectEntry> canonical_numbering(const std::vector<ObjectEntry>& objects);

/// canonical_numbering applied to a whole graph: relationship endpoints and
/// <mentions> in overall text are rewritten to the new names.
CaptionGraph renumber_graph(const CaptionGraph& graph);

}  // namespace bacon
