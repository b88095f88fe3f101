// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-rolled random generators for property tests. Every generator takes
// the engine explicitly so failures reproduce from the seed alone.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bacon/geometry.hpp"
#include "bacon/model.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool coin(Rng& rng, double p = 0.5) { return unit(rng) < p; }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[uniform(rng, 0, items.size() - 1)];
}

// Box whose corners sit on a grid of `steps` cells per axis. A 1e-4 grid
// (steps = 10000) survives the four-decimal JSON encoding exactly.
inline bacon::Box grid_box(Rng& rng, std::size_t steps = 10000) {
  std::size_t x1 = uniform(rng, 0, steps - 1), y1 = uniform(rng, 0, steps - 1);
  std::size_t x2 = uniform(rng, x1 + 1, steps), y2 = uniform(rng, y1 + 1, steps);
  auto s = static_cast<double>(steps);
  return bacon::Box(static_cast<double>(x1) / s, static_cast<double>(y1) / s, static_cast<double>(x2) / s,
                    static_cast<double>(y2) / s);
}

inline std::vector<std::uint8_t> dense_mask(Rng& rng, std::size_t w, std::size_t h, double density) {
  std::vector<std::uint8_t> px(w * h);
  for (auto& p : px) p = coin(rng, density) ? 1 : 0;
  return px;
}

// Axis-aligned rectangle painted into a w x h mask.
inline std::vector<std::uint8_t> rect_mask(std::size_t w, std::size_t h, std::size_t x0, std::size_t y0,
                                           std::size_t x1, std::size_t y1) {
  std::vector<std::uint8_t> px(w * h, 0);
  for (std::size_t y = y0; y < y1 && y < h; ++y)
    for (std::size_t x = x0; x < x1 && x < w; ++x) px[y * w + x] = 1;
  return px;
}

inline const std::vector<std::string>& nouns() {
  static const std::vector<std::string> v{"dog", "cat", "person", "tree", "car", "ball", "bench", "lamp",
                                          "cup", "table", "bird", "kite", "boat", "café sign"};
  return v;
}

inline const std::vector<std::string>& adjectives() {
  static const std::vector<std::string> v{"small", "brown", "tall", "red", "old", "shiny", "quiet", "wet", "striped"};
  return v;
}

inline const std::vector<std::string>& predicates() {
  static const std::vector<std::string> v{"near", "on", "holding", "is next to", "behind", "under", "looks at"};
  return v;
}

inline std::string phrase(Rng& rng, std::size_t min_words, std::size_t max_words) {
  std::string out;
  std::size_t n = uniform(rng, min_words, max_words);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += coin(rng) ? pick(rng, adjectives()) : pick(rng, nouns());
  }
  return out;
}

struct GraphOptions {
  std::size_t max_objects = 6;
  std::size_t max_relations = 6;
  bool boxes = true;
  bool masks = true;
};

// Valid graph: unique names, endpoints and mentions refer to listed objects,
// no reserved characters in any field.
inline bacon::CaptionGraph graph(Rng& rng, const GraphOptions& opt = {}) {
  static const std::vector<std::string> subtitles{"Theme", "Style", "Background", "Foreground"};
  bacon::CaptionGraph g;
  std::size_t n_obj = uniform(rng, 1, opt.max_objects);
  std::map<std::string, int> per_category;
  for (std::size_t i = 0; i < n_obj; ++i) {
    bacon::ObjectEntry o;
    o.category = pick(rng, nouns());
    o.name = o.category + " " + std::to_string(++per_category[o.category]);
    o.description = "a " + phrase(rng, 1, 4) + (coin(rng) ? "." : "");
    o.color = pick(rng, adjectives());
    if (opt.boxes && coin(rng, 0.6)) o.box = grid_box(rng);
    if (opt.masks && coin(rng, 0.3)) {
      auto w = static_cast<std::uint32_t>(uniform(rng, 1, 6)), h = static_cast<std::uint32_t>(uniform(rng, 1, 6));
      auto px = dense_mask(rng, w, h, 0.4);
      o.mask = bacon::MaskRLE::from_dense(w, h, px);
    }
    g.objects.push_back(std::move(o));
  }
  std::size_t n_sec = uniform(rng, 1, 4);
  for (std::size_t i = 0; i < n_sec; ++i) {
    std::string text = "The " + phrase(rng, 1, 3);
    if (coin(rng, 0.5)) text += " with <" + pick(rng, g.objects).name + ">";
    text += coin(rng) ? ". " + phrase(rng, 1, 3) + "!" : ".";
    g.overall.push_back({pick(rng, subtitles), text});
  }
  std::size_t n_rel = uniform(rng, 0, opt.max_relations);
  for (std::size_t i = 0; i < n_rel; ++i) {
    g.relationships.push_back({pick(rng, g.objects).name, pick(rng, predicates()), pick(rng, g.objects).name});
  }
  return g;
}

// Sentence-level answers built from a small vocabulary so that random pairs
// share sentences often enough to exercise the threshold.
inline std::string answer(Rng& rng) {
  static const std::vector<std::string> sentences{
      "A red car.", "A tall tree.", "The dog sleeps.", "Two people walk!", "Is it raining?",
      "A red car parks", "The sky is blue.", "A small brown dog.", "Birds fly south;", "Nothing else."};
  std::string out;
  std::size_t n = uniform(rng, 1, 4);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += pick(rng, sentences);
  }
  return out;
}

}  // namespace gen
