// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "bacon/errors.hpp"
#include "bacon/evalsuite.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace bacon;

namespace {

const HashedBagOfWordsEmbedder kStub;
const Box kA(0, 0, 0.5, 1), kB(0.25, 0, 0.75, 1), kC(0.5, 0, 1, 1);

Triplet trip(std::string s, std::string p, std::string o, Box sb, Box ob) {
  return Triplet{std::move(s), std::move(p), std::move(o), sb, ob};
}

class FixedQa final : public QaModel {
 public:
  explicit FixedQa(std::vector<std::string> answers) : answers_(std::move(answers)) {}
  std::string answer(std::string_view, std::string_view question) const override {
    return answers_.at(std::stoul(std::string(question)));
  }

 private:
  std::vector<std::string> answers_;
};

}  // namespace

TEST_CASE("default thresholds") {
  CHECK(SggOptions{}.tau_sim == 0.9);
  CHECK(SggOptions{}.tau_iou == 0.5);
  CHECK(OvdOptions{}.tau_sim == 0.85);
  CHECK(OvdOptions{}.tau_iou == 0.5);
  CHECK(NameMatchOptions{}.tau_name == 0.85);
}

TEST_CASE("ovd worked examples") {
  DetectionSet one{{{"dog", kA, std::nullopt}}};
  auto r = eval_ovd(one, one, kStub);
  CHECK(*r.metric("recall") == 1.0);
  CHECK(*r.metric("mIoU") == 1.0);
  CHECK_FALSE(r.metric("ap50"));

  DetectionSet two{{{"dog", kA, std::nullopt}, {"cat", kC, std::nullopt}}};
  CHECK(*eval_ovd(one, two, kStub).metric("recall") == 0.5);

  DetectionSet sofa{{{"sofa", kA, std::nullopt}}}, carb{{{"carburetor", kA, std::nullopt}}};
  CHECK(*eval_ovd(sofa, carb, kStub).metric("recall") == 0.0);

  // Label cosine exactly at the threshold is not a match.
  DetectionSet exact{{{"dog", kA, std::nullopt}}};
  CHECK(*eval_ovd(exact, exact, kStub, {1.0, 0.5}).metric("recall") == 0.0);
}

TEST_CASE("ap50 by the all-point sweep") {
  DetectionSet gts{{{"dog", Box(0, 0, 0.4, 0.4), {}}, {"dog", Box(0.6, 0.6, 1, 1), {}}}};
  DetectionSet preds{{{"dog", Box(0, 0, 0.4, 0.4), 0.9}, {"dog", Box(0.4, 0, 0.6, 0.2), 0.8},
                      {"dog", Box(0.6, 0.6, 1, 1), 0.7}}};
  auto r = eval_ovd(preds, gts, kStub);
  // TP, FP, TP: precision 1, 1/2, 2/3 at recall 1/2, 1/2, 1.
  CHECK(*r.metric("ap50") == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-12));
  CHECK(*r.metric("recall") == 1.0);
}

TEST_CASE("sgg worked examples") {
  auto t = trip("man", "holds", "cup", kA, kC);
  TripletSet one{{t}};
  CHECK(*eval_sgg_recall(one, one, kStub).metric("recall") == 1.0);
  TripletSet two{{t, trip("dog", "on", "sofa", kA, kC)}};
  CHECK(*eval_sgg_recall(one, two, kStub).metric("recall") == 0.5);
  TripletSet shifted{{trip("man", "holds", "cup", Box(0.3, 0, 0.8, 1), kC)}};
  CHECK(iou_box(Box(0.3, 0, 0.8, 1), kA) < 0.5);
  CHECK(*eval_sgg_recall(shifted, one, kStub).metric("recall") == 0.0);
  CHECK(t.key() == "man_holds_cup");
}

TEST_CASE("layout worked examples") {
  Layout one{{{"dog", kA}}};
  auto r = eval_layout(one, one, kStub);
  CHECK(*r.metric("mIoU") == 1.0);
  CHECK(*r.metric("precision") == 1.0);
  CHECK(*r.metric("recall") == 1.0);
  Layout extra{{{"dog", kA}, {"cat", kC}}};
  r = eval_layout(extra, one, kStub);
  CHECK(*r.metric("precision") == 0.5);
  CHECK(*r.metric("recall") == 1.0);
  r = eval_layout(Layout{{{"dog", kB}}}, one, kStub);
  CHECK(*r.metric("mIoU") == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("object list precision and recall") {
  std::vector<std::string> gt{"dog", "cat", "tree", "car"};
  auto r = object_list_pr(gt, gt, kStub);
  CHECK(*r.metric("precision") == 1.0);
  CHECK(*r.metric("recall") == 1.0);
  r = object_list_pr({"dog", "tree"}, gt, kStub);
  CHECK(*r.metric("precision") == 1.0);
  CHECK(*r.metric("recall") == 0.5);
  r = object_list_pr({"sofa"}, {"carburetor"}, kStub);
  CHECK(*r.metric("precision") == 0.0);
  CHECK(*r.metric("recall") == 0.0);
  r = object_list_pr({}, {}, kStub);
  CHECK(*r.metric("precision") == 0.0);
}

TEST_CASE("caption QA") {
  CHECK(normalize_answer("The Sky.") == "sky");
  CHECK(normalize_answer("  An   old, RED car! ") == "old red car");
  std::vector<CqaCase> cases{{"cap", "0", {"sky"}}, {"cap", "1", {"two"}}};
  FixedQa qa({"The Sky.", "three"});
  auto r = eval_cqa(cases, qa);
  CHECK(*r.metric("accuracy") == 0.5);

  std::vector<CqaCase> vqa{{"cap", "0", {"sky", "sky", "the sky", "blue"}}, {"cap", "1", {"two", "2", "three"}}};
  r = eval_cqa(vqa, qa, CqaMode::Vqa);
  CHECK(*r.metric("accuracy") == doctest::Approx((1.0 + 1.0 / 3.0) / 2.0));
  CHECK_THROWS_AS(eval_cqa(cases, qa, CqaMode::Vqa), ModeUnavailable);
  CHECK_THROWS_AS(eval_cqa({}, qa), Error);
}

TEST_CASE("thresholds outside [0,1] are rejected") {
  DetectionSet one{{{"dog", kA, std::nullopt}}};
  CHECK_THROWS_AS(eval_ovd(one, one, kStub, {1.2, 0.5}), ConfigError);
  CHECK_THROWS_AS(object_list_pr({}, {}, kStub, {-0.1}), ConfigError);
}

namespace {

const std::vector<std::string> kLabels{"dog", "cat", "red car", "car", "small dog", "tree", "tall tree"};

DetectionSet random_detections(gen::Rng& rng, std::size_t n, bool confident) {
  DetectionSet s;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<double> c;
    if (confident) c = gen::unit(rng);
    s.items.push_back({gen::pick(rng, kLabels), gen::grid_box(rng, 8), c});
  }
  return s;
}

}  // namespace

TEST_CASE("ovd recall never exceeds the exhaustive optimum and is order independent") {
  gen::Rng rng(404);
  for (int t = 0; t < 300; ++t) {
    auto preds = random_detections(rng, gen::uniform(rng, 0, 6), true);
    auto gts = random_detections(rng, gen::uniform(rng, 0, 6), false);
    OvdOptions opts{0.5, 0.3};
    auto r = eval_ovd(preds, gts, kStub, opts);
    auto adm = [&](std::size_t p, std::size_t g) {
      return kStub.similarity(preds.items[p].label, gts.items[g].label) > opts.tau_sim &&
             iou_box(preds.items[p].box, gts.items[g].box) >= opts.tau_iou;
    };
    auto best = oracle::best_matching(preds.items.size(), gts.items.size(), adm);
    CHECK(*r.count("matched") <= best.size);
    CHECK(*r.count("max_matched") == best.size);
    CHECK((*r.count("greedy_suboptimal") == 1) == (*r.count("matched") < best.size));
    for (const auto& [k, v] : r.metrics) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }

    std::vector<double> ious;
    for (const auto& p : preds.items)
      for (const auto& g : gts.items) ious.push_back(iou_box(p.box, g.box));
    std::sort(ious.begin(), ious.end());
    if (std::adjacent_find(ious.begin(), ious.end()) == ious.end()) {
      auto shuffled = preds;
      std::shuffle(shuffled.items.begin(), shuffled.items.end(), rng);
      CHECK(*eval_ovd(shuffled, gts, kStub, opts).metric("recall") == *r.metric("recall"));
    }

    auto stricter = eval_ovd(preds, gts, kStub, {opts.tau_sim, opts.tau_iou + 0.2});
    CHECK(*stricter.metric("recall") <= *r.metric("recall"));
  }
}

TEST_CASE("sgg recall against the maximum matching oracle") {
  gen::Rng rng(505);
  const std::vector<std::string> subj{"man", "dog", "tall man"}, pred{"holds", "near", "on"};
  for (int t = 0; t < 300; ++t) {
    auto make = [&](std::size_t n) {
      TripletSet s;
      for (std::size_t i = 0; i < n; ++i)
        s.items.push_back(trip(gen::pick(rng, subj), gen::pick(rng, pred), gen::pick(rng, subj),
                               gen::grid_box(rng, 4), gen::grid_box(rng, 4)));
      return s;
    };
    auto preds = make(gen::uniform(rng, 0, 6)), gts = make(gen::uniform(rng, 0, 6));
    SggOptions opts;
    auto r = eval_sgg_recall(preds, gts, kStub, opts);
    auto adm = [&](std::size_t p, std::size_t g) {
      const auto &a = preds.items[p], &b = gts.items[g];
      return kStub.similarity(a.key(), b.key()) >= opts.tau_sim && iou_box(a.subject_box, b.subject_box) >= 0.5 &&
             iou_box(a.object_box, b.object_box) >= 0.5;
    };
    auto best = oracle::best_matching(preds.items.size(), gts.items.size(), adm).size;
    CHECK(*r.count("matched") <= best);
    if (*r.count("matched") < best) CHECK(*r.count("greedy_suboptimal") == 1);
    double expect = gts.items.empty() ? 0.0 : static_cast<double>(best) / static_cast<double>(gts.items.size());
    CHECK(*r.metric("recall_upper_bound") == expect);

    auto stricter = eval_sgg_recall(preds, gts, kStub, {std::min(1.0, opts.tau_sim + 0.05), opts.tau_iou});
    CHECK(*stricter.metric("recall") <= *r.metric("recall"));
  }
}

TEST_CASE("batch evaluation is independent of the worker count") {
  gen::Rng rng(606);
  std::vector<ImagePair<DetectionSet>> images;
  for (int i = 0; i < 40; ++i)
    images.push_back({"img" + std::to_string(i), random_detections(rng, gen::uniform(rng, 0, 5), true),
                      random_detections(rng, gen::uniform(rng, 0, 5), false)});
  auto serial = eval_ovd(images, kStub, {0.5, 0.3}, 1).to_json().dump();
  CHECK(eval_ovd(images, kStub, {0.5, 0.3}, 8).to_json().dump() == serial);
}

TEST_CASE("greedy recall can rise with the label threshold; the upper bound cannot") {
  // p0 overlaps g0 best but its label only half-matches; removing that pair
  // frees g0 for p1 and lets p0 take g1.
  DetectionSet gts{{{"brown dog", Box(0, 0, 0.5, 1), {}}, {"dog", Box(0, 0, 0.3, 1), {}}}};
  DetectionSet preds{{{"dog", Box(0, 0, 0.45, 1), {}}, {"brown dog", Box(0.2, 0, 0.5, 1), {}}}};
  auto loose = eval_ovd(preds, gts, kStub, {0.7, 0.5});
  auto strict = eval_ovd(preds, gts, kStub, {0.75, 0.5});
  CHECK(*loose.metric("recall") == 0.5);
  CHECK(*strict.metric("recall") == 1.0);
  CHECK(*loose.count("greedy_suboptimal") == 1);
  CHECK(*loose.count("max_matched") >= *strict.count("max_matched"));
}
