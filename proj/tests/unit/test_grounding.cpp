// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <set>

#include "bacon/errors.hpp"
#include "bacon/grounding.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bacon;

namespace {

const Box kB1(0.0, 0.0, 0.3, 0.3), kB2(0.3, 0.3, 0.6, 0.6), kB3(0.6, 0.6, 1.0, 1.0);

ObjectEntry entry(std::string name, std::string desc) {
  std::string category = name.substr(0, name.find(' '));
  return ObjectEntry{std::move(name), std::move(category), std::move(desc), "red", std::nullopt, std::nullopt};
}

std::shared_ptr<FixtureTable> three_candidates() {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  t->add_regions("img", "dog", {{kB1, 0.9}, {kB2, 0.8}, {kB3, 0.7}});
  t->add_judgment("img", kB1, "dog 1", {true, 0.9});
  t->add_judgment("img", kB2, "dog 1", {false, 0.2});
  t->add_judgment("img", kB3, "dog 1", {true, 0.8});
  t->add_crop_score("img", kB1, "a brown dog", 0.4);
  t->add_crop_score("img", kB3, "a brown dog", 0.7);
  return t;
}

}  // namespace

TEST_CASE("judge filter then crop-score argmax") {
  auto p = make_stub_providers(three_candidates());
  GroundingConfig cfg;
  cfg.crop_sim_threshold = 0.3;
  auto out = ground_object(entry("dog 1", "a brown dog"), "img", p, cfg);
  REQUIRE(out.box);
  CHECK(*out.box == kB3);
  REQUIRE(out.stage_log.size() == 3);
  CHECK_FALSE(out.stage_log[1].judged_keep);
  CHECK_FALSE(out.stage_log[1].crop_score.has_value());
  CHECK(out.stage_log[2].selected);

  cfg.crop_sim_threshold = 0.9;
  CHECK_FALSE(ground_object(entry("dog 1", "a brown dog"), "img", p, cfg).box);
}

TEST_CASE("all candidates dropped by the judge") {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  t->add_regions("img", "cat", {{kB1, 0.9}});
  t->add_judgment("img", kB1, "cat 1", {false, 0.1});
  auto out = ground_object(entry("cat 1", "a cat"), "img", make_stub_providers(t));
  CHECK_FALSE(out.box);
}

TEST_CASE("max_candidates truncates proposals") {
  auto p = make_stub_providers(three_candidates());
  GroundingConfig cfg;
  cfg.crop_sim_threshold = 0.3;
  cfg.max_candidates = 1;
  auto out = ground_object(entry("dog 1", "a brown dog"), "img", p, cfg);
  CHECK(out.stage_log.size() == 1);
  CHECK(*out.box == kB1);
}

TEST_CASE("ties go to the larger box") {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  t->add_regions("img", "cup", {{kB1, 0.9}, {kB3, 0.5}});
  for (const auto& b : {kB1, kB3}) {
    t->add_judgment("img", b, "cup 1", {true, 0.5});
    t->add_crop_score("img", b, "a cup", 0.5);
  }
  CHECK(*ground_object(entry("cup 1", "a cup"), "img", make_stub_providers(t)).box == kB3);
}

TEST_CASE("empty description is rejected; unknown image surfaces as backend error") {
  auto p = make_stub_providers(three_candidates());
  CHECK_THROWS_AS(ground_object(entry("dog 1", " "), "img", p), Error);
  CHECK_THROWS_AS(ground_object(entry("dog 1", "a brown dog"), "other", p), BackendUnavailable);
}

TEST_CASE("same-category instances get distinct candidates") {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  t->add_regions("img", "person", {{kB1, 0.9}, {kB2, 0.8}});
  const double m[2][2] = {{0.9, 0.2}, {0.3, 0.8}};
  const Box boxes[2] = {kB1, kB2};
  for (int i = 0; i < 2; ++i) {
    std::string name = "person " + std::to_string(i + 1);
    std::string desc = i == 0 ? "a man in red" : "a woman in blue";
    for (int c = 0; c < 2; ++c) {
      t->add_judgment("img", boxes[c], name, {true, 0.5});
      t->add_crop_score("img", boxes[c], desc, m[i][c]);
    }
  }
  CaptionGraph g;
  g.objects = {entry("person 1", "a man in red"), entry("person 2", "a woman in blue")};
  auto r = ground_graph(g, "img", make_stub_providers(t));
  CHECK(*r.graph.objects[0].box == kB1);
  CHECK(*r.graph.objects[1].box == kB2);
}

TEST_CASE("single object through ground_graph equals ground_object") {
  auto p = make_stub_providers(three_candidates());
  GroundingConfig cfg;
  cfg.crop_sim_threshold = 0.3;
  CaptionGraph g;
  g.objects = {entry("dog 1", "a brown dog")};
  auto r = ground_graph(g, "img", p, cfg);
  auto single = ground_object(g.objects[0], "img", p, cfg);
  CHECK(r.graph.objects[0].box == single.box);
}

TEST_CASE("zero candidates leaves every instance unboxed; failures are per object") {
  auto t = std::make_shared<FixtureTable>();
  t->add_image("img");
  CaptionGraph g;
  g.objects = {entry("person 1", "a"), entry("person 2", "b"), entry("dog 1", "c")};
  t->add_regions("img", "dog", {{kB1, 0.9}});
  auto r = ground_graph(g, "img", make_stub_providers(t));
  CHECK_FALSE(r.graph.objects[0].box);
  CHECK_FALSE(r.graph.objects[1].box);
  CHECK_FALSE(r.outcomes[0].error);
  CHECK(r.outcomes[2].error);  // judge fixture missing
}

TEST_CASE("random scenarios: selection is admissible, optimal, monotone in the threshold") {
  gen::Rng rng(77);
  for (int scenario = 0; scenario < 200; ++scenario) {
    auto t = std::make_shared<FixtureTable>();
    t->add_image("img");
    std::size_t n_inst = gen::uniform(rng, 1, 4), n_cand = gen::uniform(rng, 0, 4);
    std::vector<ProposedRegion> regions;
    while (regions.size() < n_cand) {
      Box b = gen::grid_box(rng, 50);
      bool fresh = std::none_of(regions.begin(), regions.end(), [&](const ProposedRegion& r) { return r.box == b; });
      if (fresh) regions.push_back({b, 1.0 - 0.1 * static_cast<double>(regions.size())});
    }
    t->add_regions("img", "person", regions);
    CaptionGraph g;
    std::vector<std::vector<double>> score(n_inst, std::vector<double>(n_cand, 0.0));
    std::vector<std::vector<bool>> keep(n_inst, std::vector<bool>(n_cand));
    for (std::size_t i = 0; i < n_inst; ++i) {
      auto e = entry("person " + std::to_string(i + 1), "person number " + std::to_string(i + 1));
      for (std::size_t c = 0; c < n_cand; ++c) {
        keep[i][c] = gen::coin(rng, 0.7);
        score[i][c] = static_cast<double>(gen::uniform(rng, 0, 20)) / 20.0;
        t->add_judgment("img", regions[c].box, e.name, {static_cast<bool>(keep[i][c]), 0.5});
        t->add_crop_score("img", regions[c].box, e.description, score[i][c]);
      }
      g.objects.push_back(e);
    }
    GroundingConfig cfg;
    cfg.crop_sim_threshold = static_cast<double>(gen::uniform(rng, 0, 10)) / 10.0;
    auto p = make_stub_providers(t);
    auto r = ground_graph(g, "img", p, cfg);

    auto adm = [&](std::size_t i, std::size_t c) { return keep[i][c] && score[i][c] >= cfg.crop_sim_threshold; };
    double total = 0.0;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < n_inst; ++i) {
      if (!r.graph.objects[i].box) continue;
      std::size_t c = 0;
      while (c < n_cand && !(regions[c].box == *r.graph.objects[i].box)) ++c;
      REQUIRE(c < n_cand);
      CHECK(adm(i, c));
      CHECK(used.insert(c).second);
      total += score[i][c];
    }
    CHECK(total == doctest::Approx(oracle::max_total_weight(
                       n_inst, n_cand, adm, [&](std::size_t i, std::size_t c) { return score[i][c]; })));

    // Independent grounding: raising the threshold never creates a selection.
    for (std::size_t i = 0; i < n_inst; ++i) {
      auto lo = ground_object(g.objects[i], "img", p, cfg);
      GroundingConfig hi = cfg;
      hi.crop_sim_threshold = std::min(1.0, cfg.crop_sim_threshold + 0.2);
      if (!lo.box) CHECK_FALSE(ground_object(g.objects[i], "img", p, hi).box);
    }
  }
}
