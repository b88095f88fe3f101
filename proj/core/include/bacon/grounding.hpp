// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bacon/model.hpp"
#include "bacon/providers.hpp"

namespace bacon {

struct GroundingConfig {
  /// Minimum crop/description score for a candidate to be selectable.
  double crop_sim_threshold = 0.25;
  std::size_t max_candidates = 10;
  /// Give same-category instances distinct boxes via a joint assignment.
  bool assign_same_category = true;

  void check() const;
};

/// What happened to one proposed region while grounding one object.
struct CandidateRecord {
  std::size_t index = 0;
  Box box;
  double detector_confidence = 0.0;
  bool judged_keep = false;
  double judge_score = 0.0;
  std::optional<double> crop_score;  // only for candidates that survived the judge
  bool admissible = false;           // survived the judge and crop score >= threshold
  bool selected = false;
};

struct GroundingOutcome {
  std::string name;
  std::optional<Box> box;
  std::vector<CandidateRecord> stage_log;
  std::optional<std::string> error;
};

struct GroundingResult {
  CaptionGraph graph;
  std::vector<GroundingOutcome> outcomes;  // object-list order
};

/// Proposer query for an object: its name without the trailing index.
std::string grounding_query(const ObjectEntry& entry);

/// propose -> judge filter -> crop-score threshold -> argmax.
/// Ties on crop score go to the larger box, then the lower candidate index.
/// Propagates BackendUnavailable.
GroundingOutcome ground_object(const ObjectEntry& entry, std::string_view image_id,
                               const ProviderSet& providers, const GroundingConfig& cfg = {});

/// Grounds every object of the graph. With assign_same_category, objects
/// that share a proposer query are assigned distinct candidates by a
/// maximum-total-score assignment; singletons go through ground_object.
/// Backend failures are recorded per object (box cleared, error noted).
GroundingResult ground_graph(const CaptionGraph& graph, std::string_view image_id,
                             const ProviderSet& providers, const GroundingConfig& cfg = {});

nlohmann::ordered_json trace_to_json(const std::vector<GroundingOutcome>& outcomes);

}  // namespace bacon
