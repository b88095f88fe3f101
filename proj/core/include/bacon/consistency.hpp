// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bacon/providers.hpp"

namespace bacon {

/// Semantic consistency between repeated answers to the same question.
///
/// Each answer is split into sub-sentences. A sub-sentence of a_i is covered
/// by a_j when some sub-sentence of a_j has embedding cosine >= rho.
/// F(a_i|a_j) counts covered sub-sentences of a_i and
/// S(a_i, a_j) = (F(a_i|a_j) + F(a_j|a_i)) / 2.
struct ConsistencyConfig {
  double rho = 0.8;
  /// Divide each F by its own sub-sentence count so that S lies in [0,1].
  bool normalize = true;

  void check() const;
};

/// Sub-sentences of one answer with their embeddings.
struct SplitAnswer {
  std::vector<std::string> sentences;
  std::vector<EmbeddingVector> embeddings;
};

/// Throws Error on an answer with no sub-sentences.
SplitAnswer split_answer(const std::string& answer, const TextEmbedder& embedder);

/// 1 if `sentence` has a counterpart in `other` with cosine >= rho.
int sub_score(const EmbeddingVector& sentence, const SplitAnswer& other, double rho);
int sub_score(const std::string& sentence, const std::string& other, const TextEmbedder& embedder, double rho);

/// Raw F(a|b): number of covered sub-sentences of `a`.
int coverage(const SplitAnswer& a, const SplitAnswer& b, double rho);

struct PairScore {
  int covered_ab = 0;  // F(a|b)
  int covered_ba = 0;  // F(b|a)
  std::size_t k_a = 0;
  std::size_t k_b = 0;
  double raw = 0.0;
  double normalized = 0.0;

  double value(bool normalize) const noexcept { return normalize ? normalized : raw; }
};

PairScore pair_score(const SplitAnswer& a, const SplitAnswer& b, double rho);
double pair_score(const std::string& a, const std::string& b, const TextEmbedder& embedder,
                  const ConsistencyConfig& cfg = {});

struct SetScore {
  /// Symmetric matrix of S; the diagonal holds S(a_i, a_i).
  std::vector<std::vector<double>> pair_matrix;
  /// Mean of S over unordered pairs i < j.
  double set_score = 0.0;
};

/// Requires at least two answers.
SetScore set_score(const std::vector<std::string>& answers, const TextEmbedder& embedder,
                   const ConsistencyConfig& cfg = {});

}  // namespace bacon
