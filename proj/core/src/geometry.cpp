// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include "bacon/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "bacon/errors.hpp"
#include "bacon/text.hpp"

namespace bacon {
namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

double parse_double(std::string_view s) {
  s = trim(s);
  std::string tmp(s);
  char* end = nullptr;
  double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw InvalidBox("not a number: '" + tmp + "'");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view s, const char* what) {
  s = trim(s);
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidMask(std::string("bad ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

// Half-open [begin, end) foreground pixel intervals.
std::vector<std::pair<std::uint64_t, std::uint64_t>> foreground_intervals(const MaskRLE& m) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t pos = 0;
  const auto& runs = m.runs();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (i % 2 == 1 && runs[i] > 0) out.emplace_back(pos, pos + runs[i]);
    pos += runs[i];
  }
  return out;
}

}  // namespace

Box::Box(double x1, double y1, double x2, double y2) : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!in_unit(x1) || !in_unit(y1) || !in_unit(x2) || !in_unit(y2)) {
    throw InvalidBox("box coordinates must lie in [0,1]");
  }
  if (!(x1 < x2) || !(y1 < y2)) throw InvalidBox("box requires x1 < x2 and y1 < y2");
}

Box Box::parse(std::string_view text) {
  std::vector<double> v;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      v.push_back(parse_double(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (v.size() != 4) throw InvalidBox("expected 4 comma-separated coordinates");
  return Box(v[0], v[1], v[2], v[3]);
}

double intersection_area(const Box& a, const Box& b) noexcept {
  double w = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  double h = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou_box(const Box& a, const Box& b) noexcept {
  if (a == b) return 1.0;
  double inter = intersection_area(a, b);
  double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double overlap_fraction(const Box& obj, const Box& region) noexcept {
  double inter = intersection_area(obj, region);
  if (obj.x1() >= region.x1() && obj.y1() >= region.y1() && obj.x2() <= region.x2() &&
      obj.y2() <= region.y2()) {
    return 1.0;
  }
  return std::clamp(inter / obj.area(), 0.0, std::nextafter(1.0, 0.0));
}

MaskRLE::MaskRLE(std::uint32_t width, std::uint32_t height, std::vector<std::uint32_t> runs)
    : width_(width), height_(height), runs_(std::move(runs)) {
  std::uint64_t total = std::accumulate(runs_.begin(), runs_.end(), std::uint64_t{0});
  if (total != static_cast<std::uint64_t>(width_) * height_) {
    throw InvalidMask("run lengths sum to " + std::to_string(total) + ", expected " +
                      std::to_string(static_cast<std::uint64_t>(width_) * height_));
  }
}

MaskRLE MaskRLE::from_dense(std::uint32_t width, std::uint32_t height,
                            std::span<const std::uint8_t> pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidMask("dense buffer size does not match width*height");
  }
  std::vector<std::uint32_t> runs;
  bool fg = false;
  std::uint32_t count = 0;
  for (std::uint8_t p : pixels) {
    if ((p != 0) != fg) {
      runs.push_back(count);
      count = 0;
      fg = !fg;
    }
    ++count;
  }
  runs.push_back(count);
  return MaskRLE(width, height, std::move(runs));
}

MaskRLE MaskRLE::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidMask("missing ':' in mask RLE");
  auto dims = text.substr(0, colon);
  auto x = dims.find('x');
  if (x == std::string_view::npos) throw InvalidMask("missing 'x' in mask dimensions");
  std::uint32_t w = parse_u32(dims.substr(0, x), "width");
  std::uint32_t h = parse_u32(dims.substr(x + 1), "height");
  std::vector<std::uint32_t> runs;
  auto body = text.substr(colon + 1);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      runs.push_back(parse_u32(body.substr(start, i - start), "run length"));
      start = i + 1;
    }
  }
  return MaskRLE(w, h, std::move(runs));
}

std::string MaskRLE::to_string() const {
  std::string out = std::to_string(width_) + "x" + std::to_string(height_) + ":";
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(runs_[i]);
  }
  return out;
}

std::vector<std::uint8_t> MaskRLE::to_dense() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width_) * height_, 0);
  for (auto [b, e] : foreground_intervals(*this)) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(b), out.begin() + static_cast<std::ptrdiff_t>(e),
              std::uint8_t{1});
  }
  return out;
}

std::uint64_t MaskRLE::foreground_area() const noexcept {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < runs_.size(); i += 2) n += runs_[i];
  return n;
}

double iou_mask(const MaskRLE& a, const MaskRLE& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionMismatch("mask dimensions differ: " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
  }
  auto ia = foreground_intervals(a);
  auto ib = foreground_intervals(b);
  std::uint64_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < ia.size() && j < ib.size()) {
    std::uint64_t lo = std::max(ia[i].first, ib[j].first);
    std::uint64_t hi = std::min(ia[i].second, ib[j].second);
    if (lo < hi) inter += hi - lo;
    if (ia[i].second < ib[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  std::uint64_t uni = a.foreground_area() + b.foreground_area() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Point centroid(const MaskRLE& m) {
  if (m.foreground_area() == 0) throw EmptyMask("centroid of a mask with no foreground");
  const std::uint64_t w = m.width();
  double sx = 0.0, sy = 0.0;
  for (auto [b, e] : foreground_intervals(m)) {
    for (std::uint64_t p = b; p < e; ++p) {
      sx += static_cast<double>(p % w) + 0.5;
      sy += static_cast<double>(p / w) + 0.5;
    }
  }
  double n = static_cast<double>(m.foreground_area());
  return {sx / n / static_cast<double>(m.width()), sy / n / static_cast<double>(m.height())};
}

double MatchResult::total_score() const noexcept {
  double s = 0.0;
  for (const auto& p : pairs) s += p.score;
  return s;
}

MatchResult greedy_match(std::size_t n_preds, std::size_t n_gts, const PairScoreFn& pair_score,
                         const AdmissibleFn& admissible) {
  std::vector<MatchPair> candidates;
  for (std::size_t g = 0; g < n_gts; ++g) {
    for (std::size_t p = 0; p < n_preds; ++p) {
      if (!admissible(p, g)) continue;
      double s = pair_score(p, g);
      if (std::isnan(s)) continue;
      candidates.push_back({.pred = p, .gt = g, .score = s});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.gt != b.gt) return a.gt < b.gt;
    return a.pred < b.pred;
  });

  MatchResult out;
  std::vector<bool> pred_used(n_preds, false), gt_used(n_gts, false);
  for (const auto& c : candidates) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = true;
    gt_used[c.gt] = true;
    out.pairs.push_back(c);
  }
  for (std::size_t p = 0; p < n_preds; ++p)
    if (!pred_used[p]) out.unmatched_pred.push_back(p);
  for (std::size_t g = 0; g < n_gts; ++g)
    if (!gt_used[g]) out.unmatched_gt.push_back(g);
  return out;
}

std::size_t max_matching_size(std::size_t n_preds, std::size_t n_gts,
                              const AdmissibleFn& admissible) {
  std::vector<std::vector<std::size_t>> adj(n_gts);
  for (std::size_t g = 0; g < n_gts; ++g)
    for (std::size_t p = 0; p < n_preds; ++p)
      if (admissible(p, g)) adj[g].push_back(p);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(n_preds, kNone);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t g) {
    for (std::size_t p : adj[g]) {
      if (seen[p]) continue;
      seen[p] = 1;
      if (owner[p] == kNone || augment(owner[p])) {
        owner[p] = g;
        return true;
      }
    }
    return false;
  };

  std::size_t size = 0;
  for (std::size_t g = 0; g < n_gts; ++g) {
    seen.assign(n_preds, 0);
    if (augment(g)) ++size;
  }
  return size;
}

std::vector<std::pair<std::size_t, std::size_t>> optimal_assignment(
    std::size_t n_rows, std::size_t n_cols, const PairScoreFn& weight,
    const AdmissibleFn& admissible) {
  if (n_rows == 0 || n_cols == 0) return {};
  const bool transpose = n_rows > n_cols;
  const std::size_t n = transpose ? n_cols : n_rows;
  const std::size_t m = transpose ? n_rows : n_cols;

  // cost[i][j], 1-based, minimization of negated admissible weight.
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t r = transpose ? j - 1 : i - 1;
      std::size_t c = transpose ? i - 1 : j - 1;
      if (admissible(r, c)) cost[i][j] = -std::max(weight(r, c), 0.0);
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = kInf;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    std::size_t r = transpose ? j - 1 : p[j] - 1;
    std::size_t c = transpose ? p[j] - 1 : j - 1;
    if (admissible(r, c)) out.emplace_back(r, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bacon
