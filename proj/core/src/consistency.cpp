// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/consistency.hpp"

#include <algorithm>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"

namespace bacon {

void ConsistencyConfig::check() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0,1]");
}

SplitAnswer split_answer(const std::string& answer, const TextEmbedder& embedder) {
  SplitAnswer out;
  out.sentences = split_sentences(answer);
  if (out.sentences.empty()) throw Error("answer has no sub-sentences");
  out.embeddings = embedder.embed(out.sentences);
  return out;
}

int sub_score(const EmbeddingVector& sentence, const SplitAnswer& other, double rho) {
  double best = -1.0;
  for (const auto& e : other.embeddings) best = std::max(best, cosine(sentence, e));
  return best >= rho ? 1 : 0;
}

int sub_score(const std::string& sentence, const std::string& other, const TextEmbedder& embedder, double rho) {
  return sub_score(embedder.embed_one(sentence), split_answer(other, embedder), rho);
}

int coverage(const SplitAnswer& a, const SplitAnswer& b, double rho) {
  int f = 0;
  for (const auto& e : a.embeddings) f += sub_score(e, b, rho);
  return f;
}

PairScore pair_score(const SplitAnswer& a, const SplitAnswer& b, double rho) {
  PairScore s;
  s.covered_ab = coverage(a, b, rho);
  s.covered_ba = coverage(b, a, rho);
  s.k_a = a.sentences.size();
  s.k_b = b.sentences.size();
  s.raw = 0.5 * (static_cast<double>(s.covered_ab) + static_cast<double>(s.covered_ba));
  s.normalized = 0.5 * (static_cast<double>(s.covered_ab) / static_cast<double>(s.k_a) +
                        static_cast<double>(s.covered_ba) / static_cast<double>(s.k_b));
  return s;
}

double pair_score(const std::string& a, const std::string& b, const TextEmbedder& embedder,
                  const ConsistencyConfig& cfg) {
  cfg.check();
  return pair_score(split_answer(a, embedder), split_answer(b, embedder), cfg.rho).value(cfg.normalize);
}

SetScore set_score(const std::vector<std::string>& answers, const TextEmbedder& embedder,
                   const ConsistencyConfig& cfg) {
  cfg.check();
  if (answers.size() < 2) throw Error("consistency needs at least two answers");
  std::vector<SplitAnswer> split;
  split.reserve(answers.size());
  for (const auto& a : answers) split.push_back(split_answer(a, embedder));

  const std::size_t n = answers.size();
  SetScore out;
  out.pair_matrix.assign(n, std::vector<double>(n, 0.0));
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.pair_matrix[i][i] = pair_score(split[i], split[i], cfg.rho).value(cfg.normalize);
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = pair_score(split[i], split[j], cfg.rho).value(cfg.normalize);
      out.pair_matrix[i][j] = out.pair_matrix[j][i] = s;
      sum += s;
    }
  }
  out.set_score = sum / static_cast<double>(n * (n - 1) / 2);
  return out;
}

}  // namespace bacon
