// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "bacon/consistency.hpp"
#include "bacon/evalsuite.hpp"
#include "bacon/format.hpp"
#include "bacon/geometry.hpp"
#include "support/generators.hpp"

namespace {

using namespace bacon;

void BM_SerializeParse(benchmark::State& state) {
  gen::Rng rng(1);
  gen::GraphOptions opt;
  opt.max_objects = static_cast<std::size_t>(state.range(0));
  opt.max_relations = opt.max_objects;
  opt.boxes = opt.masks = false;
  auto g = gen::graph(rng, opt);
  for (auto _ : state) benchmark::DoNotOptimize(parse(serialize(g)));
}
BENCHMARK(BM_SerializeParse)->Arg(4)->Arg(32)->Arg(256);

void BM_JsonRoundTrip(benchmark::State& state) {
  gen::Rng rng(2);
  gen::GraphOptions opt;
  opt.max_objects = static_cast<std::size_t>(state.range(0));
  auto g = gen::graph(rng, opt);
  for (auto _ : state) benchmark::DoNotOptimize(from_json(to_json(g)));
}
BENCHMARK(BM_JsonRoundTrip)->Arg(4)->Arg(32);

void BM_MaskIou(benchmark::State& state) {
  gen::Rng rng(3);
  auto side = static_cast<std::uint32_t>(state.range(0));
  auto a = MaskRLE::from_dense(side, side, gen::dense_mask(rng, side, side, 0.5));
  auto b = MaskRLE::from_dense(side, side, gen::rect_mask(side, side, side / 4, side / 4, side, side));
  for (auto _ : state) benchmark::DoNotOptimize(iou_mask(a, b));
}
BENCHMARK(BM_MaskIou)->Arg(16)->Arg(256);

std::vector<Box> random_boxes(gen::Rng& rng, std::size_t n) {
  std::vector<Box> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen::grid_box(rng, 100));
  return out;
}

void BM_GreedyMatch(benchmark::State& state) {
  gen::Rng rng(4);
  auto n = static_cast<std::size_t>(state.range(0));
  auto p = random_boxes(rng, n), g = random_boxes(rng, n);
  auto score = [&](std::size_t i, std::size_t j) { return iou_box(p[i], g[j]); };
  auto adm = [&](std::size_t i, std::size_t j) { return score(i, j) > 0.1; };
  for (auto _ : state) benchmark::DoNotOptimize(greedy_match(n, n, score, adm));
}
BENCHMARK(BM_GreedyMatch)->Arg(8)->Arg(64)->Arg(256);

void BM_OptimalAssignment(benchmark::State& state) {
  gen::Rng rng(5);
  auto n = static_cast<std::size_t>(state.range(0));
  auto p = random_boxes(rng, n), g = random_boxes(rng, n);
  auto score = [&](std::size_t i, std::size_t j) { return iou_box(p[i], g[j]); };
  auto adm = [&](std::size_t i, std::size_t j) { return score(i, j) > 0.1; };
  for (auto _ : state) benchmark::DoNotOptimize(optimal_assignment(n, n, score, adm));
}
BENCHMARK(BM_OptimalAssignment)->Arg(8)->Arg(64)->Arg(256);

void BM_EvalOvd(benchmark::State& state) {
  gen::Rng rng(6);
  HashedBagOfWordsEmbedder embedder;
  std::vector<ImagePair<DetectionSet>> images;
  for (int i = 0; i < 64; ++i) {
    ImagePair<DetectionSet> img{"img" + std::to_string(i), {}, {}};
    for (int k = 0; k < 20; ++k) {
      img.preds.items.push_back({gen::pick(rng, gen::nouns()), gen::grid_box(rng, 100), gen::unit(rng)});
      img.gts.items.push_back({gen::pick(rng, gen::nouns()), gen::grid_box(rng, 100), std::nullopt});
    }
    images.push_back(std::move(img));
  }
  auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_ovd(images, embedder, {}, jobs));
}
BENCHMARK(BM_EvalOvd)->Arg(1)->Arg(4)->UseRealTime();

void BM_ConsistencySet(benchmark::State& state) {
  gen::Rng rng(7);
  HashedBagOfWordsEmbedder embedder;
  std::vector<std::string> answers;
  for (int i = 0; i < state.range(0); ++i) answers.push_back(gen::answer(rng));
  for (auto _ : state) benchmark::DoNotOptimize(set_score(answers, embedder));
}
BENCHMARK(BM_ConsistencySet)->Arg(5)->Arg(20);

}  // namespace
BENCHMARK_MAIN();
