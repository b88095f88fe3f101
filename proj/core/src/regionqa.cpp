// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/regionqa.hpp"

#include <algorithm>

#include "bacon/errors.hpp"

namespace bacon {

RegionDescription region_description(const CaptionGraph& graph, const RegionQuery& query) {
  if (!(query.iou_min >= 0.0 && query.iou_min <= 1.0)) throw ConfigError("iou_min must lie in [0,1]");
  RegionDescription out;
  std::vector<std::pair<double, std::size_t>> hits;
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    const auto& o = graph.objects[i];
    if (!o.box) {
      out.skipped.push_back(o.name);
      continue;
    }
    double iou = iou_box(*o.box, query.target);
    if (iou > 0.0 && iou >= query.iou_min) hits.emplace_back(iou, i);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [iou, i] : hits) {
    const auto& d = graph.objects[i].description;
    if (d.empty()) continue;
    if (!out.text.empty()) out.text.push_back(' ');
    out.text += d;
  }
  return out;
}

PointingResult pointing_scores(const CaptionGraph& graph, const std::vector<double>& object_scores,
                               const std::vector<Box>& regions) {
  if (object_scores.size() != graph.objects.size())
    throw DimensionMismatch("object score count differs from object count");
  PointingResult r;
  r.scores.assign(regions.size(), 0.0);
  for (std::size_t k = 0; k < regions.size(); ++k) {
    for (std::size_t i = 0; i < graph.objects.size(); ++i) {
      const auto& box = graph.objects[i].box;
      if (box) r.scores[k] += overlap_fraction(*box, regions[k]) * object_scores[i];
    }
  }
  for (std::size_t k = 1; k < r.scores.size(); ++k)
    if (r.scores[k] > r.scores[r.index]) r.index = k;
  return r;
}

PointingResult pointing_select(const CaptionGraph& graph, const std::string& question,
                               const std::vector<Box>& regions, const TextEmbedder& embedder) {
  if (regions.size() < 2) throw Error("pointing needs at least two candidate regions");
  std::vector<std::string> texts{question};
  bool any = false;
  for (const auto& o : graph.objects) {
    texts.push_back(o.description);
    any = any || o.box.has_value();
  }
  if (!any) throw NoGroundedObjects("no object in the caption carries a box");
  auto vecs = embedder.embed(texts);
  std::vector<double> sigma(graph.objects.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = cosine(vecs[i + 1], vecs[0]);
  return pointing_scores(graph, sigma, regions);
}

}  // namespace bacon
