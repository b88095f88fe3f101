// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bacon/geometry.hpp"
#include "bacon/providers.hpp"

namespace bacon {

struct Detection {
  std::string label;
  Box box;
  std::optional<double> confidence;
};

struct DetectionSet {
  std::vector<Detection> items;
};

struct Triplet {
  std::string subject;
  std::string predicate;
  std::string object;
  Box subject_box;
  Box object_box;

  /// "{subject}_{predicate}_{object}", the string that gets embedded.
  std::string key() const;
};

struct TripletSet {
  std::vector<Triplet> items;
};

struct LayoutItem {
  std::string name;
  Box box;
};

struct Layout {
  std::vector<LayoutItem> items;
};

/// Metric bundle. Metrics and counts keep insertion order; `details` holds
/// one match trace per evaluated image or case.
struct EvalReport {
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::size_t>> counts;
  nlohmann::ordered_json details = nlohmann::ordered_json::array();

  std::optional<double> metric(std::string_view name) const;
  std::optional<std::size_t> count(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
};

struct OvdOptions {
  double tau_sim = 0.85;  // label cosine must be strictly greater
  double tau_iou = 0.5;
};

struct SggOptions {
  double tau_sim = 0.9;
  double tau_iou = 0.5;
};

struct NameMatchOptions {
  double tau_name = 0.85;
};

template <typename T>
struct ImagePair {
  std::string image_id;
  T preds;
  T gts;
};

/// Open-vocabulary detection: a pair is admissible when the label cosine
/// exceeds tau_sim and box IoU >= tau_iou; greedy matching by IoU.
/// Reports recall and mIoU over matched pairs; ap50 only when every
/// prediction carries a confidence.
EvalReport eval_ovd(std::span<const ImagePair<DetectionSet>> images, const TextEmbedder& embedder,
                    const OvdOptions& opts = {}, std::size_t jobs = 1);
EvalReport eval_ovd(const DetectionSet& preds, const DetectionSet& gts, const TextEmbedder& embedder,
                    const OvdOptions& opts = {});

/// Open-vocabulary scene-graph recall: a gt triplet is matched by an unused
/// prediction whose triplet-string cosine >= tau_sim and whose subject and
/// object boxes each reach IoU >= tau_iou; greedy by cosine.
/// Images where greedy finds fewer matches than a maximum matching are
/// counted under "greedy_suboptimal".
EvalReport eval_sgg_recall(std::span<const ImagePair<TripletSet>> images, const TextEmbedder& embedder,
                           const SggOptions& opts = {}, std::size_t jobs = 1);
EvalReport eval_sgg_recall(const TripletSet& preds, const TripletSet& gts, const TextEmbedder& embedder,
                           const SggOptions& opts = {});

/// Layout planning: names must match (cosine >= tau_name); greedy by IoU.
EvalReport eval_layout(std::span<const ImagePair<Layout>> images, const TextEmbedder& embedder,
                       const NameMatchOptions& opts = {}, std::size_t jobs = 1);
EvalReport eval_layout(const Layout& pred, const Layout& gt, const TextEmbedder& embedder,
                       const NameMatchOptions& opts = {});

/// Object-list precision/recall via greedy one-to-one name matching.
EvalReport object_list_pr(std::span<const ImagePair<std::vector<std::string>>> images,
                          const TextEmbedder& embedder, const NameMatchOptions& opts = {},
                          std::size_t jobs = 1);
EvalReport object_list_pr(const std::vector<std::string>& pred, const std::vector<std::string>& gt,
                          const TextEmbedder& embedder, const NameMatchOptions& opts = {});

struct CqaCase {
  std::string caption;
  std::string question;
  std::vector<std::string> answers;
};

enum class CqaMode { Exact, Vqa };

/// Lowercase, drop punctuation and the articles a/an/the, collapse spaces.
std::string normalize_answer(std::string_view answer);

/// Caption question answering: the QA model sees the caption instead of the
/// image. Vqa mode scores min(#matching gt answers / 3, 1) and requires at
/// least three gt answers per case (ModeUnavailable otherwise).
EvalReport eval_cqa(std::span<const CqaCase> cases, const QaModel& qa, CqaMode mode = CqaMode::Exact,
                    std::size_t jobs = 1);

}  // namespace bacon
