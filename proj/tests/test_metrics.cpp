#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>

#include "dialkit/metrics.hpp"
#include "support/oracles.hpp"

using namespace dialkit;
using Catch::Approx;

TEST_CASE("mrr counts exact string matches") {
  CHECK(mrr({{"04189", "04189"}}) == 1.0);
  CHECK(mrr({{"04189", "04189"}, {"04188", "04189"}}) == 0.5);
  CHECK(mrr({{"0418", "04189"}}) == 0.0);  // length mismatch is a mismatch
  CHECK_THROWS_AS(mrr({}), EmptyEvaluationSet);
}

TEST_CASE("levenshtein on known pairs") {
  CHECK(levenshtein("04189", "04189") == 0);
  CHECK(levenshtein("0418", "04189") == 1);
  CHECK(levenshtein("123", "321") == 2);
  CHECK(levenshtein("", "1234") == 4);
  CHECK(levenshtein("1234", "") == 4);
}

TEST_CASE("levenshtein equals the recursive oracle on short strings") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (std::size_t j = rng() % 5; j > 0; --j) a.push_back(static_cast<char>('0' + rng() % 10));
    for (std::size_t j = rng() % 5; j > 0; --j) b.push_back(static_cast<char>('0' + rng() % 10));
    REQUIRE(levenshtein(a, b) == oracles::levenshtein(a, b));
  }
}

TEST_CASE("levenshtein is a metric") {
  std::mt19937_64 rng(42);
  auto random_string = [&rng]() {
    std::string s;
    for (std::size_t j = rng() % 6; j > 0; --j) s.push_back(static_cast<char>('0' + rng() % 4));
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = random_string(), b = random_string(), c = random_string();
    REQUIRE(levenshtein(a, b) == levenshtein(b, a));
    REQUIRE((levenshtein(a, b) == 0) == (a == b));
    REQUIRE(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("drr normalizes edit distance by the longest string") {
  CHECK(drr({{"04189", "04189"}}) == 1.0);
  CHECK(drr({{"0418", "04189"}}) == Approx(0.8));
  CHECK(drr({{"04189", "04189"}, {"0418", "04189"}}) == Approx(0.9));
  CHECK_THROWS_AS(drr({}), EmptyEvaluationSet);
}

TEST_CASE("mae reads the strings as integers") {
  CHECK(mae({{"04190", "04189"}}) == 1.0);
  CHECK(mae({{"14189", "04189"}}) == 10000.0);
  CHECK(mae({{"04190", "04189"}, {"04189", "04189"}}) == Approx(0.5));
  CHECK_THROWS_AS(mae({}), EmptyEvaluationSet);
  CHECK_THROWS_AS(mae({{"04A89", "04189"}}), ParseError);
}

TEST_CASE("tolerant_mrr applies an absolute error budget") {
  CHECK(tolerant_mrr({{"04190", "04189"}}, 1) == 1.0);
  CHECK(tolerant_mrr({{"04191", "04189"}}, 1) == 0.0);
}

TEST_CASE("tolerance zero reproduces mrr on equal-length numeric pairs") {
  std::mt19937_64 rng(43);
  std::vector<ReadingPair> pairs;
  for (int i = 0; i < 50; ++i) {
    std::string pred, gt;
    for (int j = 0; j < 5; ++j) {
      pred.push_back(static_cast<char>('0' + rng() % 10));
      gt.push_back(static_cast<char>('0' + rng() % 10));
    }
    if (rng() % 3 == 0) pred = gt;
    pairs.push_back({pred, gt});
  }
  REQUIRE(tolerant_mrr(pairs, 0) == mrr(pairs));
}

TEST_CASE("error positions are counted left to right on equal lengths") {
  const auto single = error_position_distribution({{"04199", "04189"}});
  REQUIRE(single.size() == 1);
  CHECK(single.at(4) == 1.0);

  const auto two = error_position_distribution({{"04199", "04189"}, {"14189", "04189"}});
  REQUIRE(two.size() == 2);
  CHECK(two.at(1) == Approx(0.5));
  CHECK(two.at(4) == Approx(0.5));

  CHECK(error_position_distribution({{"04189", "04189"}}).empty());
  // unequal lengths are excluded here, tallied separately
  CHECK(error_position_distribution({{"0418", "04189"}}).empty());
  CHECK(unequal_length_count({{"0418", "04189"}, {"04189", "04189"}}) == 1);
}

TEST_CASE("magnitude histogram buckets absolute errors") {
  auto hist = magnitude_histogram({{"04190", "04189"}});
  auto count_of = [](const std::vector<std::pair<std::string, std::size_t>>& h,
                     const std::string& key) {
    for (const auto& [k, v] : h) {
      if (k == key) return v;
    }
    return std::size_t{9999};
  };
  CHECK(count_of(hist, "1") == 1);

  hist = magnitude_histogram({{"04290", "04189"}});  // |4290 - 4189| = 101
  CHECK(count_of(hist, "100-999") == 1);
  CHECK(count_of(hist, "1") == 0);

  hist = magnitude_histogram({{"04189", "04189"}});
  for (const auto& [bucket, count] : hist) CHECK(count == 0);
}

TEST_CASE("histogram counts sum to the number of erroneous meters") {
  std::mt19937_64 rng(44);
  std::vector<ReadingPair> pairs;
  std::size_t erroneous = 0;
  for (int i = 0; i < 200; ++i) {
    std::string pred, gt;
    for (int j = 0; j < 4; ++j) {
      pred.push_back(static_cast<char>('0' + rng() % 10));
      gt.push_back(static_cast<char>('0' + rng() % 10));
    }
    if (std::stoll(pred) != std::stoll(gt)) ++erroneous;
    pairs.push_back({pred, gt});
  }
  std::size_t total = 0;
  for (const auto& [bucket, count] : magnitude_histogram(pairs)) total += count;
  REQUIRE(total == erroneous);
}

TEST_CASE("aggregate metrics are order invariant and bounded") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ReadingPair> pairs;
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      std::string pred, gt;
      const int len = 4 + static_cast<int>(rng() % 2);
      for (int j = 0; j < len; ++j) {
        pred.push_back(static_cast<char>('0' + rng() % 10));
        gt.push_back(static_cast<char>('0' + rng() % 10));
      }
      if (rng() % 4 == 0) pred = gt;
      if (rng() % 7 == 0) pred.pop_back();  // an undetected dial
      pairs.push_back({pred, gt});
    }
    auto shuffled = pairs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    REQUIRE(mrr(pairs) == mrr(shuffled));
    REQUIRE(drr(pairs) == Approx(drr(shuffled)).epsilon(1e-14));
    REQUIRE(mae(pairs) == Approx(mae(shuffled)).epsilon(1e-14));
    REQUIRE(tolerant_mrr(pairs, 1) == tolerant_mrr(shuffled, 1));
    REQUIRE(error_position_distribution(pairs) == error_position_distribution(shuffled));
    REQUIRE(magnitude_histogram(pairs) == magnitude_histogram(shuffled));

    REQUIRE(mrr(pairs) >= 0.0);
    REQUIRE(mrr(pairs) <= drr(pairs));
    REQUIRE(drr(pairs) <= 1.0);
  }
}

TEST_CASE("mrr bounded by tolerant mrr on equal-length pairs") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ReadingPair> pairs;
    for (int i = 0; i < 20; ++i) {
      std::string pred, gt;
      for (int j = 0; j < 5; ++j) {
        pred.push_back(static_cast<char>('0' + rng() % 10));
        gt.push_back(static_cast<char>('0' + rng() % 10));
      }
      if (rng() % 3 == 0) pred = gt;
      pairs.push_back({pred, gt});
    }
    for (unsigned long long tol : {0ULL, 1ULL, 10ULL}) {
      REQUIRE(mrr(pairs) <= tolerant_mrr(pairs, tol));
    }
  }
}

TEST_CASE("mse and rmse") {
  CHECK(mse({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(mse({0.0}, {3.0}) == 9.0);
  CHECK(mse({1.0, 3.0}, {2.0, 2.0}) == 1.0);
  CHECK(rmse({0.0}, {3.0}) == 3.0);
  CHECK_THROWS_AS(mse({1.0}, {1.0, 2.0}), ShapeMismatch);
  CHECK_THROWS_AS(mse({}, {}), ShapeMismatch);
}

namespace {

DetectionScene perfect_scene() {
  DetectionScene scene;
  scene.image_id = "s0";
  scene.ground_truth.push_back({BBox{10.0, 10.0, 4.0, 4.0}, 0});
  scene.predictions.push_back({BBox{10.0, 10.0, 4.0, 4.0}, 0, 0.9});
  return scene;
}

}  // namespace

TEST_CASE("mean_ap on a perfect detection") {
  const auto result = mean_ap({perfect_scene()});
  CHECK(result.per_class.at(0) == 1.0);
  CHECK(result.map == 1.0);
}

TEST_CASE("a duplicate detection after the hit does not hurt AP") {
  DetectionScene scene = perfect_scene();
  scene.predictions.push_back({BBox{10.2, 10.0, 4.0, 4.0}, 0, 0.8});  // duplicate, lower conf
  const auto result = mean_ap({scene});
  // recall saturates on the first detection; the envelope keeps AP at 1
  CHECK(result.per_class.at(0) == 1.0);
}

TEST_CASE("mean_ap requires ground truth") {
  DetectionScene scene;
  scene.image_id = "empty";
  scene.predictions.push_back({BBox{1.0, 1.0, 2.0, 2.0}, 0, 0.5});
  CHECK_THROWS_AS(mean_ap({scene}), EmptyGroundTruth);
  CHECK_THROWS_AS(mean_ap({}), EmptyGroundTruth);
}

TEST_CASE("mean_ap ignores classes without ground truth") {
  DetectionScene scene = perfect_scene();
  scene.predictions.push_back({BBox{30.0, 30.0, 4.0, 4.0}, 7, 0.99});  // class 7 has no GT
  const auto result = mean_ap({scene});
  REQUIRE(result.per_class.size() == 1);
  CHECK(result.map == 1.0);
}

TEST_CASE("mean_ap equals the brute-force oracle on random scenes") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> pos(0.0, 40.0);
  std::uniform_real_distribution<double> ext(2.0, 10.0);
  std::uniform_real_distribution<double> conf(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<DetectionScene> scenes;
    const int n_scenes = 1 + static_cast<int>(rng() % 3);
    bool any_gt = false;
    for (int s = 0; s < n_scenes; ++s) {
      DetectionScene scene;
      scene.image_id = "s" + std::to_string(s);
      const int n_gt = static_cast<int>(rng() % 5);
      const int n_det = static_cast<int>(rng() % 6);
      for (int g = 0; g < n_gt; ++g) {
        scene.ground_truth.push_back({BBox{pos(rng), pos(rng), ext(rng), ext(rng)},
                                      static_cast<int>(rng() % 3)});
        any_gt = true;
      }
      for (int d = 0; d < n_det; ++d) {
        scene.predictions.push_back({BBox{pos(rng), pos(rng), ext(rng), ext(rng)},
                                     static_cast<int>(rng() % 3), conf(rng)});
      }
      scenes.push_back(std::move(scene));
    }
    if (!any_gt) continue;
    const auto fast = mean_ap(scenes);
    const auto slow = oracles::mean_ap(scenes);
    REQUIRE(fast.per_class.size() == slow.per_class.size());
    for (const auto& [cls, ap] : fast.per_class) {
      REQUIRE(ap == Approx(slow.per_class.at(cls)).margin(1e-12));
      REQUIRE(ap >= 0.0);
      REQUIRE(ap <= 1.0);
    }
    REQUIRE(fast.map == Approx(slow.map).margin(1e-12));
  }
}

TEST_CASE("compute_report assembles every field") {
  const std::vector<ReadingPair> pairs = {{"04189", "04189"}, {"04190", "04189"},
                                          {"0418", "04189"}};
  const auto report = compute_report(pairs, {0, 1});
  CHECK(report.n_meters == 3);
  CHECK(report.mrr == Approx(1.0 / 3.0));
  CHECK(report.tolerant_mrr.at(1) == Approx(2.0 / 3.0));
  CHECK(report.unequal_length_count == 1);
  std::size_t total = 0;
  for (const auto& [bucket, count] : report.magnitude_histogram) total += count;
  CHECK(total == 2);
}
