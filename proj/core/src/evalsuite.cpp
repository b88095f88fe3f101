// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/evalsuite.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"
#include "parallel.hpp"

namespace bacon {
namespace {

using ojson = nlohmann::ordered_json;

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Cosine between every pred string and every gt string; each distinct
// string is embedded once.
std::vector<std::vector<double>> similarity_matrix(const TextEmbedder& embedder,
                                                   const std::vector<std::string>& preds,
                                                   const std::vector<std::string>& gts) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> unique;
  for (const auto* list : {&preds, &gts}) {
    for (const auto& s : *list) {
      if (index.emplace(s, unique.size()).second) unique.push_back(s);
    }
  }
  auto vecs = embedder.embed(unique);
  std::vector<std::vector<double>> sim(preds.size(), std::vector<double>(gts.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (std::size_t g = 0; g < gts.size(); ++g)
      sim[p][g] = cosine(vecs[index.at(preds[p])], vecs[index.at(gts[g])]);
  return sim;
}

ojson match_json(const std::string& image_id, const MatchResult& m, bool greedy_optimal) {
  ojson j;
  j["image_id"] = image_id;
  auto pairs = ojson::array();
  for (const auto& p : m.pairs) {
    ojson pj;
    pj["pred"] = p.pred;
    pj["gt"] = p.gt;
    pj["iou"] = p.iou;
    pj["label_similarity"] = p.label_similarity;
    pairs.push_back(std::move(pj));
  }
  j["matches"] = std::move(pairs);
  j["unmatched_pred"] = m.unmatched_pred;
  j["unmatched_gt"] = m.unmatched_gt;
  j["greedy_optimal"] = greedy_optimal;
  return j;
}

// Per-image partial result; reports are merged by adding counts.
struct Tally {
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  std::size_t matched = 0;
  std::size_t max_matched = 0;
  double iou_sum = 0.0;
  ojson detail;
  // ap50 ranking: (confidence, true positive) per prediction
  std::vector<std::pair<double, bool>> ranked;
  bool all_confident = true;
};

double average_precision(std::vector<std::pair<double, bool>> hits, std::size_t n_gt) {
  if (n_gt == 0 || hits.empty()) return 0.0;
  std::stable_sort(hits.begin(), hits.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> precision(hits.size()), recall(hits.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i].second) ++tp;
    precision[i] = ratio(tp, i + 1);
    recall[i] = ratio(tp, n_gt);
  }
  for (std::size_t i = hits.size() - 1; i > 0; --i) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0, prev_recall = 0.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (!hits[i].second) continue;
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

Tally ovd_image(const ImagePair<DetectionSet>& img, const TextEmbedder& embedder, const OvdOptions& opts) {
  const auto& preds = img.preds.items;
  const auto& gts = img.gts.items;
  std::vector<std::string> pl, gl;
  for (const auto& d : preds) pl.push_back(d.label);
  for (const auto& d : gts) gl.push_back(d.label);
  auto sim = similarity_matrix(embedder, pl, gl);

  std::vector<std::vector<double>> iou(preds.size(), std::vector<double>(gts.size()));
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (std::size_t g = 0; g < gts.size(); ++g) iou[p][g] = iou_box(preds[p].box, gts[g].box);

  auto admissible = [&](std::size_t p, std::size_t g) { return sim[p][g] > opts.tau_sim && iou[p][g] >= opts.tau_iou; };
  auto m = greedy_match(preds.size(), gts.size(), [&](std::size_t p, std::size_t g) { return iou[p][g]; }, admissible);

  Tally t;
  t.n_pred = preds.size();
  t.n_gt = gts.size();
  t.matched = m.pairs.size();
  t.max_matched = max_matching_size(preds.size(), gts.size(), admissible);
  for (auto& p : m.pairs) {
    p.iou = iou[p.pred][p.gt];
    p.label_similarity = sim[p.pred][p.gt];
    t.iou_sum += p.iou;
  }
  t.detail = match_json(img.image_id, m, t.matched == t.max_matched);

  // Confidence-ranked sweep: each prediction claims the best-IoU free gt.
  std::vector<std::size_t> order(preds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  t.all_confident = std::all_of(preds.begin(), preds.end(), [](const Detection& d) { return d.confidence.has_value(); });
  if (t.all_confident) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return *preds[a].confidence > *preds[b].confidence; });
    std::vector<bool> used(gts.size(), false);
    for (std::size_t p : order) {
      std::optional<std::size_t> best;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (used[g] || !admissible(p, g)) continue;
        if (!best || iou[p][g] > iou[p][*best]) best = g;
      }
      if (best) used[*best] = true;
      t.ranked.emplace_back(*preds[p].confidence, best.has_value());
    }
  }
  return t;
}

Tally sgg_image(const ImagePair<TripletSet>& img, const TextEmbedder& embedder, const SggOptions& opts) {
  const auto& preds = img.preds.items;
  const auto& gts = img.gts.items;
  std::vector<std::string> pk, gk;
  for (const auto& t : preds) pk.push_back(t.key());
  for (const auto& t : gts) gk.push_back(t.key());
  auto sim = similarity_matrix(embedder, pk, gk);

  auto admissible = [&](std::size_t p, std::size_t g) {
    return sim[p][g] >= opts.tau_sim && iou_box(preds[p].subject_box, gts[g].subject_box) >= opts.tau_iou &&
           iou_box(preds[p].object_box, gts[g].object_box) >= opts.tau_iou;
  };
  auto m = greedy_match(preds.size(), gts.size(), [&](std::size_t p, std::size_t g) { return sim[p][g]; }, admissible);

  Tally t;
  t.n_pred = preds.size();
  t.n_gt = gts.size();
  t.matched = m.pairs.size();
  t.max_matched = max_matching_size(preds.size(), gts.size(), admissible);
  for (auto& p : m.pairs) {
    p.label_similarity = sim[p.pred][p.gt];
    p.iou = std::min(iou_box(preds[p.pred].subject_box, gts[p.gt].subject_box),
                     iou_box(preds[p.pred].object_box, gts[p.gt].object_box));
  }
  t.detail = match_json(img.image_id, m, t.matched == t.max_matched);
  return t;
}

Tally layout_image(const ImagePair<Layout>& img, const TextEmbedder& embedder, const NameMatchOptions& opts) {
  const auto& preds = img.preds.items;
  const auto& gts = img.gts.items;
  std::vector<std::string> pn, gn;
  for (const auto& i : preds) pn.push_back(i.name);
  for (const auto& i : gts) gn.push_back(i.name);
  auto sim = similarity_matrix(embedder, pn, gn);

  auto admissible = [&](std::size_t p, std::size_t g) { return sim[p][g] >= opts.tau_name; };
  auto m = greedy_match(preds.size(), gts.size(),
                        [&](std::size_t p, std::size_t g) { return iou_box(preds[p].box, gts[g].box); }, admissible);

  Tally t;
  t.n_pred = preds.size();
  t.n_gt = gts.size();
  t.matched = m.pairs.size();
  t.max_matched = max_matching_size(preds.size(), gts.size(), admissible);
  for (auto& p : m.pairs) {
    p.iou = p.score;
    p.label_similarity = sim[p.pred][p.gt];
    t.iou_sum += p.iou;
  }
  t.detail = match_json(img.image_id, m, t.matched == t.max_matched);
  return t;
}

Tally names_image(const ImagePair<std::vector<std::string>>& img, const TextEmbedder& embedder,
                  const NameMatchOptions& opts) {
  auto sim = similarity_matrix(embedder, img.preds, img.gts);
  auto admissible = [&](std::size_t p, std::size_t g) { return sim[p][g] >= opts.tau_name; };
  auto m = greedy_match(img.preds.size(), img.gts.size(), [&](std::size_t p, std::size_t g) { return sim[p][g]; },
                        admissible);
  Tally t;
  t.n_pred = img.preds.size();
  t.n_gt = img.gts.size();
  t.matched = m.pairs.size();
  t.max_matched = max_matching_size(img.preds.size(), img.gts.size(), admissible);
  for (auto& p : m.pairs) p.label_similarity = sim[p.pred][p.gt];
  t.detail = match_json(img.image_id, m, t.matched == t.max_matched);
  return t;
}

struct Totals {
  std::size_t n_pred = 0, n_gt = 0, matched = 0, max_matched = 0, suboptimal = 0;
  double iou_sum = 0.0;
  bool all_confident = true;
  std::vector<std::pair<double, bool>> ranked;
  ojson details = ojson::array();
};

Totals merge(std::vector<Tally> tallies) {
  Totals t;
  for (auto& x : tallies) {
    t.n_pred += x.n_pred;
    t.n_gt += x.n_gt;
    t.matched += x.matched;
    t.max_matched += x.max_matched;
    t.iou_sum += x.iou_sum;
    if (x.matched < x.max_matched) ++t.suboptimal;
    t.all_confident = t.all_confident && x.all_confident;
    t.ranked.insert(t.ranked.end(), x.ranked.begin(), x.ranked.end());
    t.details.push_back(std::move(x.detail));
  }
  return t;
}

void common_counts(EvalReport& r, const Totals& t, std::size_t images) {
  r.counts = {{"images", images},           {"predictions", t.n_pred},        {"ground_truths", t.n_gt},
              {"matched", t.matched},       {"max_matched", t.max_matched},   {"greedy_suboptimal", t.suboptimal}};
  r.details = t.details;
}

}  // namespace

std::string Triplet::key() const { return subject + "_" + predicate + "_" + object; }

std::optional<double> EvalReport::metric(std::string_view name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  return std::nullopt;
}

std::optional<std::size_t> EvalReport::count(std::string_view name) const {
  for (const auto& [k, v] : counts)
    if (k == name) return v;
  return std::nullopt;
}

nlohmann::ordered_json EvalReport::to_json() const {
  ojson j;
  ojson m = ojson::object();
  for (const auto& [k, v] : metrics) m[k] = v;
  ojson c = ojson::object();
  for (const auto& [k, v] : counts) c[k] = v;
  j["metrics"] = std::move(m);
  j["counts"] = std::move(c);
  j["details"] = details;
  return j;
}

EvalReport eval_ovd(std::span<const ImagePair<DetectionSet>> images, const TextEmbedder& embedder,
                    const OvdOptions& opts, std::size_t jobs) {
  check_unit(opts.tau_sim, "tau_sim");
  check_unit(opts.tau_iou, "tau_iou");
  auto t = merge(detail::parallel_map(images.size(), jobs,
                                      [&](std::size_t i) { return ovd_image(images[i], embedder, opts); }));
  EvalReport r;
  r.metrics = {{"recall", ratio(t.matched, t.n_gt)},
               {"mIoU", t.matched == 0 ? 0.0 : t.iou_sum / static_cast<double>(t.matched)}};
  if (t.all_confident) r.metrics.emplace_back("ap50", average_precision(t.ranked, t.n_gt));
  common_counts(r, t, images.size());
  return r;
}

EvalReport eval_ovd(const DetectionSet& preds, const DetectionSet& gts, const TextEmbedder& embedder,
                    const OvdOptions& opts) {
  ImagePair<DetectionSet> one{"", preds, gts};
  return eval_ovd(std::span(&one, 1), embedder, opts);
}

EvalReport eval_sgg_recall(std::span<const ImagePair<TripletSet>> images, const TextEmbedder& embedder,
                           const SggOptions& opts, std::size_t jobs) {
  check_unit(opts.tau_sim, "tau_sim");
  check_unit(opts.tau_iou, "tau_iou");
  auto t = merge(detail::parallel_map(images.size(), jobs,
                                      [&](std::size_t i) { return sgg_image(images[i], embedder, opts); }));
  EvalReport r;
  r.metrics = {{"recall", ratio(t.matched, t.n_gt)}, {"recall_upper_bound", ratio(t.max_matched, t.n_gt)}};
  common_counts(r, t, images.size());
  return r;
}

EvalReport eval_sgg_recall(const TripletSet& preds, const TripletSet& gts, const TextEmbedder& embedder,
                           const SggOptions& opts) {
  ImagePair<TripletSet> one{"", preds, gts};
  return eval_sgg_recall(std::span(&one, 1), embedder, opts);
}

EvalReport eval_layout(std::span<const ImagePair<Layout>> images, const TextEmbedder& embedder,
                       const NameMatchOptions& opts, std::size_t jobs) {
  check_unit(opts.tau_name, "tau_name");
  auto t = merge(detail::parallel_map(images.size(), jobs,
                                      [&](std::size_t i) { return layout_image(images[i], embedder, opts); }));
  EvalReport r;
  r.metrics = {{"mIoU", t.matched == 0 ? 0.0 : t.iou_sum / static_cast<double>(t.matched)},
               {"precision", ratio(t.matched, t.n_pred)},
               {"recall", ratio(t.matched, t.n_gt)}};
  common_counts(r, t, images.size());
  return r;
}

EvalReport eval_layout(const Layout& pred, const Layout& gt, const TextEmbedder& embedder,
                       const NameMatchOptions& opts) {
  ImagePair<Layout> one{"", pred, gt};
  return eval_layout(std::span(&one, 1), embedder, opts);
}

EvalReport object_list_pr(std::span<const ImagePair<std::vector<std::string>>> images,
                          const TextEmbedder& embedder, const NameMatchOptions& opts, std::size_t jobs) {
  check_unit(opts.tau_name, "tau_name");
  auto t = merge(detail::parallel_map(images.size(), jobs,
                                      [&](std::size_t i) { return names_image(images[i], embedder, opts); }));
  EvalReport r;
  r.metrics = {{"precision", ratio(t.matched, t.n_pred)}, {"recall", ratio(t.matched, t.n_gt)}};
  common_counts(r, t, images.size());
  return r;
}

EvalReport object_list_pr(const std::vector<std::string>& pred, const std::vector<std::string>& gt,
                          const TextEmbedder& embedder, const NameMatchOptions& opts) {
  ImagePair<std::vector<std::string>> one{"", pred, gt};
  return object_list_pr(std::span(&one, 1), embedder, opts);
}

std::string normalize_answer(std::string_view answer) {
  std::string cleaned;
  cleaned.reserve(answer.size());
  for (char ch : answer) {
    auto c = static_cast<unsigned char>(ch);
    if (std::ispunct(c) != 0) {
      cleaned.push_back(' ');
    } else {
      cleaned.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  std::string out;
  std::size_t pos = 0;
  const std::string words = collapse_whitespace(cleaned);
  while (pos < words.size()) {
    auto end = words.find(' ', pos);
    if (end == std::string::npos) end = words.size();
    std::string_view w(words.data() + pos, end - pos);
    if (w != "a" && w != "an" && w != "the") {
      if (!out.empty()) out.push_back(' ');
      out.append(w);
    }
    pos = end + 1;
  }
  return out;
}

EvalReport eval_cqa(std::span<const CqaCase> cases, const QaModel& qa, CqaMode mode, std::size_t jobs) {
  if (cases.empty()) throw Error("caption QA needs at least one case");
  if (mode == CqaMode::Vqa) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      if (cases[i].answers.size() < 3) {
        throw ModeUnavailable("vqa scoring needs at least 3 gt answers; case " + std::to_string(i) + " has " +
                              std::to_string(cases[i].answers.size()));
      }
    }
  }

  struct Scored {
    std::string answer;
    double score;
  };
  auto scored = detail::parallel_map(cases.size(), jobs, [&](std::size_t i) {
    const auto& c = cases[i];
    std::string answer = qa.answer(c.caption, c.question);
    std::string norm = normalize_answer(answer);
    std::size_t hits = 0;
    for (const auto& gt : c.answers)
      if (normalize_answer(gt) == norm) ++hits;
    double s = mode == CqaMode::Exact ? (hits > 0 ? 1.0 : 0.0) : std::min(static_cast<double>(hits) / 3.0, 1.0);
    return Scored{std::move(answer), s};
  });

  EvalReport r;
  double sum = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    sum += scored[i].score;
    ojson d;
    d["case"] = i;
    d["question"] = cases[i].question;
    d["answer"] = scored[i].answer;
    d["score"] = scored[i].score;
    r.details.push_back(std::move(d));
  }
  r.metrics = {{"accuracy", sum / static_cast<double>(cases.size())}};
  r.counts = {{"cases", cases.size()}};
  return r;
}

}  // namespace bacon
