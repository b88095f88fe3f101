// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bacon/model.hpp"
#include "bacon/providers.hpp"

namespace bacon {

struct TrackedFrame {
  std::size_t frame_index = 0;
  CaptionGraph graph;
  /// Object name -> track id. Keys must name objects of `graph`.
  std::map<std::string, std::size_t> track_ids;

  friend bool operator==(const TrackedFrame&, const TrackedFrame&) = default;
};

inline constexpr double kDefaultMaskThreshold = 0.8;
inline constexpr double kDefaultStableThreshold = 0.8;

/// Union-find over every (frame, object) occurrence. Occurrences in
/// temporally adjacent frames are joined when their overlap reaches
/// tau_mask: mask IoU when both carry masks, box IoU when both carry boxes,
/// never otherwise. Input ids are ignored. Each component gets the id of
/// its rank among components ordered by minimal member, where members are
/// numbered by (frame_index, object position). Frames come back in input
/// order with every object assigned an id.
/// Throws Error on repeated frame_index and DimensionMismatch on masks of
/// different sizes.
std::vector<TrackedFrame> merge_track_ids(const std::vector<TrackedFrame>& frames,
                                          double tau_mask = kDefaultMaskThreshold);

enum class DiffStatus { New, Removed, Altered, Persistent };
enum class ElementKind { Object, Relationship, Sentence };

std::string_view to_string(DiffStatus s);
std::string_view to_string(ElementKind k);

struct DiffEntry {
  ElementKind kind = ElementKind::Object;
  DiffStatus status = DiffStatus::Persistent;
  std::optional<std::size_t> prev_index;
  std::optional<std::size_t> curr_index;
  std::string prev_text;
  std::string curr_text;
  /// Similarity that decided the status; 0 for New and Removed.
  double similarity = 0.0;
};

struct DiffReport {
  std::size_t prev_frame = 0;
  std::size_t curr_frame = 0;
  /// Per kind: prev elements in order (Persistent, Altered or Removed),
  /// then unmatched curr elements in order (New).
  std::vector<DiffEntry> entries;

  std::size_t count(ElementKind kind, DiffStatus status) const;
};

/// Objects pair up by shared track id, then by exact name. A pair is
/// Persistent when its descriptions reach cosine rho_stable, else Altered.
/// Relationships pair up when both endpoints are paired objects and the
/// predicates reach rho_stable; a changed predicate yields Removed + New.
/// Overall sub-sentences pair up greedily by cosine >= rho_stable.
/// Identical strings count as similarity 1 regardless of the embedder.
DiffReport diff_captions(const TrackedFrame& prev, const TrackedFrame& curr, const TextEmbedder& embedder,
                         double rho_stable = kDefaultStableThreshold);

/// Colors: New blue, Removed red, Altered pink, Persistent uncolored.
std::string render_ansi(const DiffReport& report);
std::string render_html(const DiffReport& report);
nlohmann::ordered_json diff_to_json(const DiffReport& report);

/// {"frame_index":n,"caption":{...},"track_ids":{"name":id}}; track_ids optional.
TrackedFrame frame_from_json(const nlohmann::json& j, const std::string& pointer = "");
nlohmann::ordered_json frame_to_json(const TrackedFrame& frame);

}  // namespace bacon
