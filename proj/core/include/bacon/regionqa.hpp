// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bacon/geometry.hpp"
#include "bacon/model.hpp"
#include "bacon/providers.hpp"

namespace bacon {

struct RegionQuery {
  Box target;
  double iou_min = 0.3;
};

struct RegionDescription {
  std::string text;
  /// Objects without a box, in object-list order.
  std::vector<std::string> skipped;
};

/// Descriptions of objects whose box overlaps the target (IoU > 0) with
/// IoU >= iou_min, ordered by IoU descending then object order, joined by
/// single spaces. Throws ConfigError if iou_min is outside [0,1].
RegionDescription region_description(const CaptionGraph& graph, const RegionQuery& query);

struct PointingResult {
  std::size_t index = 0;
  std::vector<double> scores;
};

/// Region score = sum over grounded objects of overlap_fraction(box, region)
/// times the object's score. Argmax with ties to the lowest index.
/// `object_scores` is parallel to `graph.objects`; entries of unboxed
/// objects are ignored.
PointingResult pointing_scores(const CaptionGraph& graph, const std::vector<double>& object_scores,
                               const std::vector<Box>& regions);

/// Object score = cosine(description, question). Throws NoGroundedObjects
/// when no object has a box and Error when fewer than two regions are given.
PointingResult pointing_select(const CaptionGraph& graph, const std::string& question,
                               const std::vector<Box>& regions, const TextEmbedder& embedder);

}  // namespace bacon
