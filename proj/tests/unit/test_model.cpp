// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "bacon/errors.hpp"
#include "bacon/model.hpp"
#include "bacon/providers.hpp"
#include "bacon/text.hpp"
#include "support/generators.hpp"

using namespace bacon;

namespace {

ObjectEntry obj(std::string name, std::string category) {
  return ObjectEntry{std::move(name), std::move(category), "a thing", "red", std::nullopt, std::nullopt};
}

bool has_message(const ValidationReport& r, const std::string& m) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.message == m; });
}

}  // namespace

TEST_CASE("validate reports unknown endpoints") {
  CaptionGraph g;
  g.overall.push_back({"Background", "A park."});
  g.objects.push_back(obj("dog 1", "dog"));
  g.relationships.push_back({"dog 1", "near", "tree 1"});
  auto r = validate(g);
  CHECK(has_message(r, "unknown endpoint tree 1"));
  CHECK(r.has_errors());
}

TEST_CASE("validate reports empty sections") {
  auto r = validate(CaptionGraph{});
  CHECK(has_message(r, "overall empty"));
  CHECK(has_message(r, "object list empty"));
}

TEST_CASE("validate accepts a well formed graph and is deterministic") {
  CaptionGraph g;
  g.overall.push_back({"Background", "A <dog 1> under a <tree 1>."});
  g.objects = {obj("dog 1", "dog"), obj("tree 1", "tree")};
  g.relationships.push_back({"dog 1", "under", "tree 1"});
  CHECK(validate(g).empty());

  gen::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    auto rg = gen::graph(rng);
    CHECK(validate(rg).violations == validate(rg).violations);
    CHECK_FALSE(validate(rg).has_errors());
  }
}

TEST_CASE("validate orders by section then index; self relations warn") {
  CaptionGraph g;
  g.overall.push_back({"Background", "x <ghost 1>."});
  g.objects = {obj("a 1", "a"), obj("a 1", "a")};
  g.relationships = {{"a 1", "near", "a 1"}};
  auto r = validate(g);
  REQUIRE_FALSE(r.violations.empty());
  for (std::size_t i = 1; i < r.violations.size(); ++i)
    CHECK(static_cast<int>(r.violations[i - 1].section) <= static_cast<int>(r.violations[i].section));
  CHECK(has_message(r, "unknown mention ghost 1"));
  CHECK(has_message(r, "self-relation a 1"));
  auto self = std::find_if(r.violations.begin(), r.violations.end(),
                           [](const Violation& v) { return v.message == "self-relation a 1"; });
  CHECK(self->severity == Severity::Warning);
}

TEST_CASE("mentioned_objects") {
  CHECK(mentioned_objects("A <dog 1> chases a <ball 1> near the <dog 1>.") ==
        std::vector<std::string>{"dog 1", "ball 1"});
  CHECK(mentioned_objects("No mentions here.").empty());
  CHECK_THROWS_AS(mentioned_objects("Broken <dog 1 text"), ParseError);
  try {
    mentioned_objects("Broken <dog 1 text");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseErrorKind::UnbalancedMarker);
  }
}

TEST_CASE("strip_sentences_mentioning") {
  CHECK(strip_sentences_mentioning("The sky is blue. <dog 1> sits by the fence.", {"dog 1"}) == "The sky is blue.");
  CHECK(strip_sentences_mentioning("Only background here.", {"dog 1"}) == "Only background here.");
  CHECK(strip_sentences_mentioning("<cat 1> sleeps. <cat 1> purrs.", {"cat 1"}).empty());

  gen::Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::string t = gen::answer(rng) + "  \n " + gen::answer(rng);
    CHECK(strip_sentences_mentioning(t, {}) == join_sentences(split_sentences(t)));
  }
}

TEST_CASE("dedupe_relationships") {
  RelationTriplet on{"a", "on", "b"};
  auto r = dedupe_relationships({on, on});
  CHECK(r.kept == std::vector<RelationTriplet>{on});
  CHECK(r.dropped == std::vector<RelationTriplet>{on});

  r = dedupe_relationships({on, {"c", "on", "d"}});
  CHECK(r.kept.size() == 2);

  HashedBagOfWordsEmbedder stub;
  r = dedupe_relationships({{"a", "holds", "b"}, {"b", "holds", "a"}}, &stub, 0.99);
  CHECK(r.kept == std::vector<RelationTriplet>{{"a", "holds", "b"}});
  CHECK(r.dropped == std::vector<RelationTriplet>{{"b", "holds", "a"}});

  // Without an embedder the inverse pair survives.
  CHECK(dedupe_relationships({{"a", "holds", "b"}, {"b", "holds", "a"}}).kept.size() == 2);
  CHECK_THROWS_AS(dedupe_relationships({}, &stub, 1.5), ConfigError);
}

TEST_CASE("dedupe never drops a triplet with a unique endpoint pair") {
  gen::Rng rng(21);
  HashedBagOfWordsEmbedder stub;
  const std::vector<std::string> names{"a", "b", "c", "d"};
  for (int t = 0; t < 200; ++t) {
    std::vector<RelationTriplet> in;
    std::size_t n = gen::uniform(rng, 0, 6);
    for (std::size_t i = 0; i < n; ++i)
      in.push_back({gen::pick(rng, names), gen::pick(rng, gen::predicates()), gen::pick(rng, names)});
    auto r = dedupe_relationships(in, &stub, gen::unit(rng));
    CHECK(r.kept.size() + r.dropped.size() == in.size());
    for (const auto& x : in) {
      auto key = [](const RelationTriplet& q) { return std::minmax(q.subject, q.object); };
      auto shared = std::count_if(in.begin(), in.end(), [&](const RelationTriplet& y) { return key(y) == key(x); });
      if (shared == 1) CHECK(std::find(r.kept.begin(), r.kept.end(), x) != r.kept.end());
    }
  }
}

TEST_CASE("canonical numbering") {
  auto out = canonical_numbering({obj("man", "person"), obj("woman", "person"), obj("puppy", "dog")});
  CHECK(out[0].name == "person 1");
  CHECK(out[1].name == "person 2");
  CHECK(out[2].name == "dog 1");
  CHECK(canonical_numbering({}).empty());
  CHECK(canonical_numbering({obj("cat 1", "cat")})[0].name == "cat 1");

  gen::Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    auto g = gen::graph(rng);
    auto once = canonical_numbering(g.objects);
    CHECK(canonical_numbering(once) == once);
  }
}

TEST_CASE("renumber_graph rewrites references") {
  CaptionGraph g;
  g.overall.push_back({"Background", "A <pup> near <man>."});
  g.objects = {obj("man", "person"), obj("pup", "dog")};
  g.relationships = {{"pup", "near", "man"}};
  auto r = renumber_graph(g);
  CHECK(r.overall[0].text == "A <dog 1> near <person 1>.");
  CHECK(r.relationships[0] == RelationTriplet{"dog 1", "near", "person 1"});
  CHECK(validate(r).empty());
}
