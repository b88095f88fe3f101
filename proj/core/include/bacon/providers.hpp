// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bacon/geometry.hpp"

namespace bacon {

/// Unit-norm text embedding; the all-zero vector stands for text with no
/// tokens.
struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

/// Dot product of unit vectors; 0 when either side is all-zero.
/// Throws DimensionMismatch.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;

  EmbeddingVector embed_one(const std::string& text) const;
  double similarity(const std::string& a, const std::string& b) const;
};

struct ProposedRegion {
  Box box;
  double detector_confidence = 0.0;
};

class RegionProposer {
 public:
  virtual ~RegionProposer() = default;
  /// Candidate regions for `query`, sorted by confidence descending.
  virtual std::vector<ProposedRegion> propose_regions(std::string_view image_id,
                                                      std::string_view query) const = 0;
};

struct JudgeVerdict {
  bool keep = false;
  double score = 0.0;
};

class RegionJudge {
 public:
  virtual ~RegionJudge() = default;
  virtual JudgeVerdict judge_region(std::string_view image_id, const Box& box,
                                    std::string_view name) const = 0;
};

/// Joint image-region / text scorer in [0,1].
class CropScorer {
 public:
  virtual ~CropScorer() = default;
  virtual double score_crop(std::string_view image_id, const Box& box,
                            std::string_view description) const = 0;
};

class QaModel {
 public:
  virtual ~QaModel() = default;
  /// Non-empty answer, or "unknown" when the context is empty.
  virtual std::string answer(std::string_view context, std::string_view question) const = 0;
};

/// Handles to every model backend. Implementations must be callable
/// concurrently; no call may mutate state visible to other calls.
struct ProviderSet {
  std::shared_ptr<const TextEmbedder> text_embedder;
  std::shared_ptr<const CropScorer> crop_embedder;
  std::shared_ptr<const RegionProposer> region_proposer;
  std::shared_ptr<const RegionJudge> region_judge;
  std::shared_ptr<const QaModel> qa_model;
};

// ---------------------------------------------------------------------------
// Deterministic stubs

inline constexpr std::size_t kStubEmbeddingDim = 256;

/// Hashed bag-of-words: lowercase, split on non-alphanumerics, FNV-1a each
/// token into `dim` buckets, count, L2-normalize.
class HashedBagOfWordsEmbedder final : public TextEmbedder {
 public:
  explicit HashedBagOfWordsEmbedder(std::size_t dim = kStubEmbeddingDim);
  std::size_t dim() const override { return dim_; }
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
};

std::vector<std::string> tokenize_words(std::string_view text);
std::uint32_t fnv1a32(std::string_view bytes) noexcept;

/// Scripted answers for the region, judge, crop and QA stubs.
///
/// JSON layout:
///   {"images": [id...],
///    "regions":     [{"image_id", "query", "regions": [{"box", "confidence"}]}],
///    "judgments":   [{"image_id", "box", "name", "keep", "score"}],
///    "crop_scores": [{"image_id", "box", "text", "score"}],
///    "answers":     [{"context"?, "question", "answer"}]}
/// An "answers" entry without "context" matches any context.
class FixtureTable {
 public:
  FixtureTable() = default;
  static FixtureTable from_json(const nlohmann::json& j);
  static FixtureTable load(const std::string& path);

  void add_image(std::string image_id);
  void add_regions(std::string image_id, std::string query, std::vector<ProposedRegion> regions);
  void add_judgment(std::string image_id, const Box& box, std::string name, JudgeVerdict v);
  void add_crop_score(std::string image_id, const Box& box, std::string text, double score);
  void add_answer(std::string question, std::string answer,
                  std::optional<std::string> context = std::nullopt);

  bool knows_image(std::string_view image_id) const;
  const std::vector<ProposedRegion>* regions(std::string_view image_id, std::string_view query) const;
  const JudgeVerdict* judgment(std::string_view image_id, const Box& box, std::string_view name) const;
  const double* crop_score(std::string_view image_id, const Box& box, std::string_view text) const;
  const std::string* answer(std::string_view context, std::string_view question) const;

 private:
  struct Answer {
    std::optional<std::string> context;
    std::string question;
    std::string answer;
  };
  std::vector<std::string> images_;
  std::vector<std::pair<std::string, std::vector<ProposedRegion>>> regions_;
  std::vector<std::pair<std::string, JudgeVerdict>> judgments_;
  std::vector<std::pair<std::string, double>> crop_scores_;
  std::vector<Answer> answers_;
};

class StubRegionProposer final : public RegionProposer {
 public:
  explicit StubRegionProposer(std::shared_ptr<const FixtureTable> fixtures);
  std::vector<ProposedRegion> propose_regions(std::string_view image_id,
                                              std::string_view query) const override;

 private:
  std::shared_ptr<const FixtureTable> fixtures_;
};

class StubRegionJudge final : public RegionJudge {
 public:
  explicit StubRegionJudge(std::shared_ptr<const FixtureTable> fixtures);
  JudgeVerdict judge_region(std::string_view image_id, const Box& box,
                            std::string_view name) const override;

 private:
  std::shared_ptr<const FixtureTable> fixtures_;
};

class StubCropScorer final : public CropScorer {
 public:
  explicit StubCropScorer(std::shared_ptr<const FixtureTable> fixtures);
  double score_crop(std::string_view image_id, const Box& box,
                    std::string_view description) const override;

 private:
  std::shared_ptr<const FixtureTable> fixtures_;
};

class StubQaModel final : public QaModel {
 public:
  explicit StubQaModel(std::shared_ptr<const FixtureTable> fixtures);
  std::string answer(std::string_view context, std::string_view question) const override;

 private:
  std::shared_ptr<const FixtureTable> fixtures_;
};

ProviderSet make_stub_providers(std::shared_ptr<const FixtureTable> fixtures);

// ---------------------------------------------------------------------------
// Sidecar HTTP client

struct HttpProviderOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::chrono::milliseconds timeout{10000};
  int max_attempts = 3;
};

/// Talks to a model sidecar over the /v1 JSON protocol. Performs the
/// /v1/health handshake at construction to learn the embedding dimension.
/// Throws BackendUnavailable if the sidecar cannot be reached.
ProviderSet make_http_providers(const HttpProviderOptions& options);

}  // namespace bacon
