// Copyright 2026 The bacon Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>

#include "bacon/consistency.hpp"
#include "bacon/errors.hpp"
#include "support/generators.hpp"

using namespace bacon;

namespace {
const HashedBagOfWordsEmbedder kStub;
}

TEST_CASE("sub-sentence score") {
  CHECK(sub_score("a tall tree", "a tall tree.", kStub, 1.0) == 1);
  CHECK(sub_score("sofa", "carburetor", kStub, 0.1) == 0);
  CHECK(sub_score("a tall tree", "a red car", kStub, 0.8) == 0);
}

TEST_CASE("two-answer trace") {
  auto a = split_answer("A red car. A tall tree.", kStub);
  auto b = split_answer("A red car.", kStub);
  auto s = pair_score(a, b, 0.8);
  CHECK(s.k_a == 2);
  CHECK(s.k_b == 1);
  CHECK(s.covered_ab == 1);
  CHECK(s.covered_ba == 1);
  CHECK(std::abs(s.raw - 1.0) < 1e-9);
  CHECK(std::abs(s.normalized - 0.75) < 1e-9);
}

TEST_CASE("self and disjoint pairs") {
  ConsistencyConfig raw{0.8, false};
  CHECK(pair_score("The sky.", "The sky.", kStub, raw) == 1.0);
  CHECK(pair_score("The sky.", "The sky.", kStub) == 1.0);
  CHECK(pair_score("sofa.", "carburetor.", kStub) == 0.0);
  CHECK(pair_score("sofa.", "carburetor.", kStub, raw) == 0.0);
}

TEST_CASE("set score is the mean over unordered pairs") {
  auto s = set_score({"A red car.", "A red car.", "A red car."}, kStub);
  CHECK(s.set_score == 1.0);
  double two = set_score({"A red car. A tall tree.", "A red car."}, kStub).set_score;
  CHECK(two == pair_score("A red car. A tall tree.", "A red car.", kStub));

  // Five sentences each, two shared: S(X,Y) = (2/5 + 2/5) / 2.
  std::string x = "A red car. A tall tree. The sky. Some grass. A bench.";
  std::string y = "A red car. A tall tree. Dogs bark. Cats purr. Birds sing.";
  double sxy = pair_score(x, y, kStub);
  CHECK(sxy == doctest::Approx(0.4));
  auto three = set_score({x, x, y}, kStub);
  CHECK(three.set_score == doctest::Approx((1.0 + 0.4 + 0.4) / 3.0));
  CHECK(three.pair_matrix[0][2] == three.pair_matrix[2][0]);

  CHECK_THROWS_AS(set_score({"only one."}, kStub), Error);
  CHECK_THROWS_AS(split_answer(" ", kStub), Error);
  CHECK_THROWS_AS(pair_score("a.", "b.", kStub, {1.5, true}), ConfigError);
}

TEST_CASE("symmetry, bounds, monotonicity and permutation invariance on random answers") {
  gen::Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    auto a = gen::answer(rng), b = gen::answer(rng);
    double rho = gen::unit(rng);
    auto sa = split_answer(a, kStub), sb = split_answer(b, kStub);
    auto ab = pair_score(sa, sb, rho), ba = pair_score(sb, sa, rho);
    CHECK(ab.raw == ba.raw);
    CHECK(ab.normalized == ba.normalized);
    CHECK(ab.covered_ab >= 0);
    CHECK(static_cast<std::size_t>(ab.covered_ab) <= ab.k_a);
    CHECK(ab.normalized >= 0.0);
    CHECK(ab.normalized <= 1.0);
    CHECK(pair_score(sa, sa, rho).normalized == 1.0);
    auto higher = pair_score(sa, sb, std::min(1.0, rho + 0.1));
    CHECK(higher.raw <= ab.raw);
    CHECK(higher.normalized <= ab.normalized);
  }
  for (int i = 0; i < 30; ++i) {
    std::vector<std::string> set{gen::answer(rng), gen::answer(rng), gen::answer(rng), gen::answer(rng)};
    double base = set_score(set, kStub).set_score;
    std::shuffle(set.begin(), set.end(), rng);
    CHECK(set_score(set, kStub).set_score == doctest::Approx(base).epsilon(1e-12));
  }
}
