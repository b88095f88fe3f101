// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "bacon/errors.hpp"
#include "bacon/providers.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bacon;

TEST_CASE("stub embedder is deterministic and unit norm") {
  HashedBagOfWordsEmbedder e;
  auto a = e.embed_one("a red car");
  CHECK(a == e.embed_one("a red car"));
  CHECK(a.dim() == kStubEmbeddingDim);
  double n = 0;
  for (double v : a.values) n += v * v;
  CHECK(std::abs(n - 1.0) < 1e-6);
  CHECK(e.similarity("a red car", "a red car") == 1.0);
  auto zero = e.embed_one("  ...  ");
  for (double v : zero.values) CHECK(v == 0.0);
  CHECK(cosine(zero, zero) == 0.0);
}

TEST_CASE("stub cosine worked values") {
  HashedBagOfWordsEmbedder e;
  CHECK(e.similarity("a tall tree", "a red car") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(e.similarity("a running dog", "a sleeping dog") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(e.similarity("sofa", "carburetor") == 0.0);
  CHECK(e.similarity("A Red CAR", "a red car") == 1.0);
}

TEST_CASE("tokens used in worked examples land in distinct buckets") {
  std::set<std::uint32_t> buckets;
  const std::vector<std::string> tokens{"a", "tall", "tree", "red", "car", "running", "sleeping",
                                        "dog", "sofa", "carburetor", "holds", "the", "sky"};
  for (const auto& t : tokens) buckets.insert(fnv1a32(t) % kStubEmbeddingDim);
  CHECK(buckets.size() == tokens.size());
  CHECK(fnv1a32("") == 2166136261u);
  CHECK(fnv1a32("a") == 0xe40c292cu);
}

TEST_CASE("stub cosine agrees with the token-count oracle when buckets do not collide") {
  HashedBagOfWordsEmbedder e;
  gen::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    auto a = gen::phrase(rng, 1, 5), b = gen::phrase(rng, 1, 5);
    std::set<std::uint32_t> seen;
    bool collide = false;
    for (auto& [t, n] : oracle::token_counts(a + " " + b)) collide |= !seen.insert(fnv1a32(t) % 256).second;
    if (collide) continue;
    CHECK(e.similarity(a, b) == doctest::Approx(oracle::token_cosine(a, b)).epsilon(1e-12));
    CHECK(e.similarity(a, b) == e.similarity(b, a));
  }
}

TEST_CASE("tokenizer") {
  CHECK(tokenize_words("Hello, World-42 café") == std::vector<std::string>{"hello", "world", "42", "café"});
  CHECK(tokenize_words("").empty());
}

namespace {

std::shared_ptr<FixtureTable> table() {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  t->add_regions("img", "dog", {{Box(0, 0, 0.5, 0.5), 0.9}, {Box(0.5, 0.5, 1, 1), 0.4}, {Box(0, 0.5, 0.5, 1), 0.2}});
  t->add_judgment("img", Box(0, 0, 0.5, 0.5), "dog 1", {true, 0.8});
  t->add_judgment("img", Box(0.5, 0.5, 1, 1), "dog 1", {false, 0.1});
  t->add_crop_score("img", Box(0, 0, 0.5, 0.5), "a dog", 0.7);
  t->add_answer("what color", "brown", std::string("ctx"));
  t->add_answer("how many", "two");
  return t;
}

}  // namespace

TEST_CASE("fixture-driven stubs") {
  auto p = make_stub_providers(table());
  auto regions = p.region_proposer->propose_regions("img", "dog");
  REQUIRE(regions.size() == 3);
  CHECK(regions[0].detector_confidence == 0.9);
  CHECK(regions[2].detector_confidence == 0.2);
  CHECK(p.region_proposer->propose_regions("img", "cat").empty());
  CHECK_THROWS_AS(p.region_proposer->propose_regions("nope", "dog"), BackendUnavailable);

  CHECK(p.region_judge->judge_region("img", Box(0, 0, 0.5, 0.5), "dog 1").keep);
  CHECK_FALSE(p.region_judge->judge_region("img", Box(0.5, 0.5, 1, 1), "dog 1").keep);
  CHECK_THROWS_AS(p.region_judge->judge_region("img", Box(0, 0, 1, 1), "dog 1"), BackendUnavailable);

  CHECK(p.crop_embedder->score_crop("img", Box(0, 0, 0.5, 0.5), "a dog") == 0.7);
  CHECK_THROWS_AS(p.crop_embedder->score_crop("img", Box(0, 0, 0.5, 0.5), "a cat"), BackendUnavailable);

  CHECK(p.qa_model->answer("ctx", "what color") == "brown");
  CHECK(p.qa_model->answer("anything", "how many") == "two");
  CHECK(p.qa_model->answer("", "how many") == "unknown");
  CHECK_THROWS_AS(p.qa_model->answer("ctx", "why"), BackendUnavailable);
}

TEST_CASE("fixture JSON loader") {
  auto j = nlohmann::json::parse(R"({
    "images": ["i1"],
    "regions": [{"image_id": "i1", "query": "cat", "regions": [{"box": [0,0,0.5,0.5], "confidence": 0.5}]}],
    "judgments": [{"image_id": "i1", "box": [0,0,0.5,0.5], "name": "cat 1", "keep": true, "score": 0.9}],
    "crop_scores": [{"image_id": "i1", "box": [0,0,0.5,0.5], "text": "a cat", "score": 0.6}],
    "answers": [{"question": "q", "answer": "a"}]
  })");
  auto t = std::make_shared<const FixtureTable>(FixtureTable::from_json(j));
  auto p = make_stub_providers(t);
  CHECK(p.region_proposer->propose_regions("i1", "cat").size() == 1);
  CHECK(p.crop_embedder->score_crop("i1", Box(0, 0, 0.5, 0.5), "a cat") == 0.6);

  auto bad = nlohmann::json::parse(R"({"regions": [{"image_id": "i1", "query": "cat", "regions": [{"box": [0.6,0,0.5,0.5], "confidence": 0.5}]}]})");
  CHECK_THROWS_AS(FixtureTable::from_json(bad), SchemaError);
}
