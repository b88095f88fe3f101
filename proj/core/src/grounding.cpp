// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/grounding.hpp"

#include <map>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

void require_description(const ObjectEntry& entry) {
  if (trim(entry.description).empty()) {
    throw Error("cannot ground '" + entry.name + "': description is empty");
  }
}

std::vector<ProposedRegion> proposals(const std::string& query, std::string_view image_id,
                                      const ProviderSet& providers, const GroundingConfig& cfg) {
  auto regions = providers.region_proposer->propose_regions(image_id, query);
  if (regions.size() > cfg.max_candidates) regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(cfg.max_candidates), regions.end());
  return regions;
}

// Judge and crop-score every candidate for one object.
std::vector<CandidateRecord> score_candidates(const ObjectEntry& entry, std::string_view image_id,
                                              const std::vector<ProposedRegion>& regions,
                                              const ProviderSet& providers, const GroundingConfig& cfg) {
  std::vector<CandidateRecord> log;
  log.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    CandidateRecord rec{.index = i, .box = regions[i].box, .detector_confidence = regions[i].detector_confidence,
                        .judged_keep = false, .judge_score = 0.0, .crop_score = std::nullopt};
    JudgeVerdict v = providers.region_judge->judge_region(image_id, regions[i].box, entry.name);
    rec.judged_keep = v.keep;
    rec.judge_score = v.score;
    if (v.keep) {
      double s = providers.crop_embedder->score_crop(image_id, regions[i].box, entry.description);
      rec.crop_score = s;
      rec.admissible = s >= cfg.crop_sim_threshold;
    }
    log.push_back(rec);
  }
  return log;
}

void null_or(nlohmann::ordered_json& j, const char* key, const std::optional<Box>& box) {
  if (box) {
    j[key] = {box->x1(), box->y1(), box->x2(), box->y2()};
  } else {
    j[key] = nullptr;
  }
}

}  // namespace

void GroundingConfig::check() const {
  if (!(crop_sim_threshold >= 0.0 && crop_sim_threshold <= 1.0)) {
    throw ConfigError("crop similarity threshold must lie in [0,1]");
  }
  if (max_candidates < 1) throw ConfigError("max_candidates must be at least 1");
}

std::string grounding_query(const ObjectEntry& entry) { return category_head(entry.name); }

GroundingOutcome ground_object(const ObjectEntry& entry, std::string_view image_id,
                               const ProviderSet& providers, const GroundingConfig& cfg) {
  cfg.check();
  require_description(entry);
  GroundingOutcome out;
  out.name = entry.name;
  auto regions = proposals(grounding_query(entry), image_id, providers, cfg);
  out.stage_log = score_candidates(entry, image_id, regions, providers, cfg);

  const CandidateRecord* best = nullptr;
  for (const auto& rec : out.stage_log) {
    if (!rec.admissible) continue;
    if (best == nullptr || *rec.crop_score > *best->crop_score ||
        (*rec.crop_score == *best->crop_score && rec.box.area() > best->box.area())) {
      best = &rec;
    }
  }
  if (best != nullptr) {
    out.stage_log[best->index].selected = true;
    out.box = best->box;
  }
  return out;
}

GroundingResult ground_graph(const CaptionGraph& graph, std::string_view image_id,
                             const ProviderSet& providers, const GroundingConfig& cfg) {
  cfg.check();
  GroundingResult result{graph, std::vector<GroundingOutcome>(graph.objects.size())};
  for (std::size_t i = 0; i < graph.objects.size(); ++i) result.outcomes[i].name = graph.objects[i].name;

  auto fail = [&](std::size_t i, const std::exception& e) {
    result.outcomes[i].box.reset();
    result.outcomes[i].error = e.what();
  };

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    groups[grounding_query(graph.objects[i])].push_back(i);
  }

  for (const auto& [query, members] : groups) {
    if (!cfg.assign_same_category || members.size() == 1) {
      for (std::size_t i : members) {
        try {
          result.outcomes[i] = ground_object(graph.objects[i], image_id, providers, cfg);
        } catch (const Error& e) {
          fail(i, e);
        }
      }
      continue;
    }

    std::vector<ProposedRegion> regions;
    try {
      regions = proposals(query, image_id, providers, cfg);
    } catch (const Error& e) {
      for (std::size_t i : members) fail(i, e);
      continue;
    }

    // Rows are group members that could be scored; columns are candidates.
    std::vector<std::size_t> rows;
    for (std::size_t i : members) {
      try {
        require_description(graph.objects[i]);
        result.outcomes[i].stage_log = score_candidates(graph.objects[i], image_id, regions, providers, cfg);
        rows.push_back(i);
      } catch (const Error& e) {
        fail(i, e);
      }
    }

    auto assignment = optimal_assignment(
        rows.size(), regions.size(),
        [&](std::size_t r, std::size_t c) { return *result.outcomes[rows[r]].stage_log[c].crop_score; },
        [&](std::size_t r, std::size_t c) { return result.outcomes[rows[r]].stage_log[c].admissible; });
    for (auto [r, c] : assignment) {
      auto& outcome = result.outcomes[rows[r]];
      outcome.stage_log[c].selected = true;
      outcome.box = outcome.stage_log[c].box;
    }
  }

  for (std::size_t i = 0; i < graph.objects.size(); ++i) result.graph.objects[i].box = result.outcomes[i].box;
  return result;
}

nlohmann::ordered_json trace_to_json(const std::vector<GroundingOutcome>& outcomes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& o : outcomes) {
    nlohmann::ordered_json j;
    j["name"] = o.name;
    null_or(j, "box", o.box);
    j["error"] = o.error ? nlohmann::ordered_json(*o.error) : nlohmann::ordered_json(nullptr);
    auto cands = nlohmann::ordered_json::array();
    for (const auto& c : o.stage_log) {
      nlohmann::ordered_json cj;
      cj["index"] = c.index;
      null_or(cj, "box", c.box);
      cj["confidence"] = c.detector_confidence;
      cj["keep"] = c.judged_keep;
      cj["judge_score"] = c.judge_score;
      cj["crop_score"] = c.crop_score ? nlohmann::ordered_json(*c.crop_score) : nlohmann::ordered_json(nullptr);
      cj["admissible"] = c.admissible;
      cj["selected"] = c.selected;
      cands.push_back(std::move(cj));
    }
    j["candidates"] = std::move(cands);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace bacon
