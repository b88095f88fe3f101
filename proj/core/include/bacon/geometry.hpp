// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bacon {

/// Axis-aligned box in normalized image coordinates, closed on both ends.
/// Construction rejects coordinates outside [0,1] and zero-area boxes.
class Box {
 public:
  Box(double x1, double y1, double x2, double y2);

  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double x2() const noexcept { return x2_; }
  double y2() const noexcept { return y2_; }
  double width() const noexcept { return x2_ - x1_; }
  double height() const noexcept { return y2_ - y1_; }
  double area() const noexcept { return width() * height(); }

  /// Parses "x1,y1,x2,y2".
  static Box parse(std::string_view text);

  friend bool operator==(const Box&, const Box&) = default;

 private:
  double x1_, y1_, x2_, y2_;
};

double intersection_area(const Box& a, const Box& b) noexcept;

/// Symmetric intersection over union.
double iou_box(const Box& a, const Box& b) noexcept;

/// Share of `obj` covered by `region`: area(obj ∩ region) / area(obj).
double overlap_fraction(const Box& obj, const Box& region) noexcept;

/// Binary mask stored as row-major run lengths that alternate
/// background/foreground, starting with a (possibly empty) background run.
class MaskRLE {
 public:
  MaskRLE(std::uint32_t width, std::uint32_t height, std::vector<std::uint32_t> runs);

  /// Builds from a row-major dense buffer where non-zero is foreground.
  static MaskRLE from_dense(std::uint32_t width, std::uint32_t height,
                            std::span<const std::uint8_t> pixels);

  /// Parses the "WxH:r0,r1,..." text form.
  static MaskRLE parse(std::string_view text);

  std::string to_string() const;
  std::vector<std::uint8_t> to_dense() const;

  std::uint32_t width() const noexcept { return width_; }
  std::uint32_t height() const noexcept { return height_; }
  const std::vector<std::uint32_t>& runs() const noexcept { return runs_; }
  std::uint64_t foreground_area() const noexcept;

  friend bool operator==(const MaskRLE&, const MaskRLE&) = default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint32_t> runs_;
};

/// Pixel-exact IoU. Two empty masks have IoU 0. Throws DimensionMismatch.
double iou_mask(const MaskRLE& a, const MaskRLE& b);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Mean of foreground pixel centers, normalized by width/height.
/// Throws EmptyMask.
Point centroid(const MaskRLE& m);

struct MatchPair {
  std::size_t pred = 0;
  std::size_t gt = 0;
  double score = 0.0;
  double iou = 0.0;
  double label_similarity = 0.0;
};

struct MatchResult {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_pred;
  std::vector<std::size_t> unmatched_gt;

  double total_score() const noexcept;
};

using PairScoreFn = std::function<double(std::size_t pred, std::size_t gt)>;
using AdmissibleFn = std::function<bool(std::size_t pred, std::size_t gt)>;

/// One-to-one matching that repeatedly takes the admissible pair with the
/// highest score. Ties go to the lower gt index, then the lower pred index.
/// Pairs are returned in selection order; unmatched lists are ascending.
MatchResult greedy_match(std::size_t n_preds, std::size_t n_gts, const PairScoreFn& pair_score,
                         const AdmissibleFn& admissible);

/// Size of a maximum-cardinality one-to-one matching over admissible pairs
/// (augmenting paths). Used to flag evaluations where greedy falls short.
std::size_t max_matching_size(std::size_t n_preds, std::size_t n_gts,
                              const AdmissibleFn& admissible);

/// Maximum-total-weight one-to-one assignment (Hungarian method). Only
/// admissible pairs may be used; pairs are returned ordered by row.
/// Rows and columns may differ in count.
std::vector<std::pair<std::size_t, std::size_t>> optimal_assignment(
    std::size_t n_rows, std::size_t n_cols, const PairScoreFn& weight,
    const AdmissibleFn& admissible);

}  // namespace bacon
