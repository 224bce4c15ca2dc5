#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dialkit/correction.hpp"
#include "dialkit/dial_model.hpp"
#include "support/oracles.hpp"

using namespace dialkit;
using Catch::Approx;

namespace {

std::vector<DialValue> dials(std::initializer_list<double> vs) {
  std::vector<DialValue> out;
  for (double v : vs) out.emplace_back(v);
  return out;
}

CorrectionThresholds reference_thresholds() {
  CorrectionThresholds t;
  t.carry_up = {0.75, 2.5, true};
  t.carry_down = {0.25, 7.5, true};
  return t;
}

}  // namespace

TEST_CASE("correct_dial carry-up worked example") {
  const auto out = correct_dial(DialValue(3.9), DialValue(2.2), reference_thresholds());
  CHECK(out.digit == 4);
  CHECK(out.direction == +1);
  CHECK(out.corrected.value() == Approx(4.22).epsilon(1e-12));
  // one-decimal display form
  CHECK(std::floor(out.corrected.value() * 10.0) / 10.0 == Approx(4.2));
}

TEST_CASE("correct_dial leaves consistent pairs alone") {
  const auto out = correct_dial(DialValue(3.2), DialValue(2.2), reference_thresholds());
  CHECK(out.digit == 3);
  CHECK(out.direction == 0);
  CHECK(out.corrected.value() == Approx(3.22).epsilon(1e-12));
}

TEST_CASE("correct_dial carry-down") {
  const auto out = correct_dial(DialValue(4.1), DialValue(9.8), reference_thresholds());
  CHECK(out.digit == 3);
  CHECK(out.direction == -1);
  CHECK(out.corrected.value() == Approx(3.98).epsilon(1e-12));
}

TEST_CASE("correct_sequence applies a single carry-up") {
  const auto digits = correct_sequence(dials({0.4, 4.1, 1.8, 3.9, 2.2}), reference_thresholds());
  REQUIRE(digits == std::vector<int>{0, 4, 1, 4, 2});
}

TEST_CASE("correct_sequence cascades carries right to left") {
  // dial 3 wraps 9 -> 0 with corrected value 0.02, which then pulls dial 2 up
  const auto digits = correct_sequence(dials({0.0, 3.9, 9.9, 0.2}), reference_thresholds());
  REQUIRE(digits == std::vector<int>{0, 4, 0, 0});
}

TEST_CASE("correct_sequence on integral values is plain floor") {
  const auto digits = correct_sequence(dials({1.0, 2.0, 3.0, 4.0, 5.0}), reference_thresholds());
  REQUIRE(digits == std::vector<int>{1, 2, 3, 4, 5});
  // high neighbors included: integral values carry no evidence, nothing fires
  const auto nines = correct_sequence(dials({9.0, 1.0, 8.0, 9.0, 9.0}), reference_thresholds());
  REQUIRE(nines == std::vector<int>{9, 1, 8, 9, 9});
}

TEST_CASE("correct_sequence rejects unsupported lengths") {
  CHECK_THROWS_AS(correct_sequence(dials({3.9, 9.9, 0.2}), reference_thresholds()), UnsupportedDialCount);
}

TEST_CASE("disabled directions reduce to per-dial floor") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<DialValue> values;
    const int k = (i % 2 == 0) ? 4 : 5;
    for (int d = 0; d < k; ++d) values.emplace_back(value(rng));
    const auto digits = correct_sequence(values, disabled_thresholds());
    for (int d = 0; d < k; ++d) {
      REQUIRE(digits[static_cast<std::size_t>(d)] ==
              values[static_cast<std::size_t>(d)].floor_digit());
    }
  }
}

TEST_CASE("no rule fires on mechanically consistent values") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const int k = (i % 2 == 0) ? 4 : 5;
    const double limit = (k == 4) ? 1e4 : 1e5;
    const double c = unit(rng) * limit;
    const auto values = decompose_consumption(c, k);
    CorrectionThresholds t;
    t.carry_up = {0.5 + 0.499 * unit(rng) + 1e-6, 4.999 * unit(rng) + 1e-6, true};
    t.carry_down = {0.499 * unit(rng) + 1e-6, 5.0 + 4.999 * unit(rng) + 1e-6, true};
    const auto trace = correct_sequence_trace(values, t);
    for (std::size_t d = 0; d < trace.size(); ++d) {
      REQUIRE(trace[d].direction == 0);
      REQUIRE(trace[d].digit == values[d].floor_digit());
      REQUIRE(std::abs(trace[d].corrected.value() - values[d].value()) < 1e-9);
    }
  }
}

TEST_CASE("trigger regions shrink monotonically with tighter thresholds") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const DialValue v_cur(10.0 * unit(rng));
    const DialValue v_next(10.0 * unit(rng));
    CorrectionThresholds loose;
    loose.carry_up = {0.5 + 0.4 * unit(rng) + 0.001, 0.5 + 4.0 * unit(rng), true};
    loose.carry_down = {0.1 + 0.35 * unit(rng), 5.5 + 4.0 * unit(rng) - 0.001, true};
    CorrectionThresholds tight = loose;
    tight.carry_up.cur_frac_min = std::min(0.999, loose.carry_up.cur_frac_min + 0.04);
    tight.carry_up.next_val_max = std::max(0.001, loose.carry_up.next_val_max - 0.4);
    tight.carry_down.cur_frac_max = std::max(0.001, loose.carry_down.cur_frac_max - 0.04);
    tight.carry_down.next_val_min = std::min(9.999, loose.carry_down.next_val_min + 0.4);
    const auto with_loose = correct_dial(v_cur, v_next, loose);
    const auto with_tight = correct_dial(v_cur, v_next, tight);
    if (with_tight.direction != 0) {
      REQUIRE(with_loose.direction == with_tight.direction);
    }
  }
}

TEST_CASE("validate_thresholds rejects out-of-range values") {
  CorrectionThresholds t = reference_thresholds();
  t.carry_up.cur_frac_min = 0.5;
  CHECK_THROWS_AS(validate_thresholds(t), ValidationError);
  t = reference_thresholds();
  t.carry_up.next_val_max = 5.0;
  CHECK_THROWS_AS(validate_thresholds(t), ValidationError);
  t = reference_thresholds();
  t.carry_down.cur_frac_max = 0.5;
  CHECK_THROWS_AS(validate_thresholds(t), ValidationError);
  t = reference_thresholds();
  t.carry_down.next_val_min = 10.0;
  CHECK_THROWS_AS(validate_thresholds(t), ValidationError);
  CHECK_NOTHROW(validate_thresholds(reference_thresholds()));
}

namespace {

CalibrationGrid singleton_grid() {
  CalibrationGrid g;
  g.cur_frac_min = {0.75};
  g.next_val_max = {2.5};
  g.cur_frac_max = {0.25};
  g.next_val_min = {7.5};
  return g;
}

bool same_point(const CorrectionThresholds& a, const CorrectionThresholds& b) {
  return a.carry_up.cur_frac_min == b.carry_up.cur_frac_min &&
         a.carry_up.next_val_max == b.carry_up.next_val_max &&
         a.carry_down.cur_frac_max == b.carry_down.cur_frac_max &&
         a.carry_down.next_val_min == b.carry_down.next_val_min;
}

}  // namespace

TEST_CASE("calibrate returns the singleton grid point") {
  const std::vector<CalibrationSample> samples = {{dials({0.4, 4.1, 1.8, 3.9, 2.2}), "04142"}};
  const auto t = calibrate(samples, singleton_grid());
  REQUIRE(same_point(t, reference_thresholds()));
}

TEST_CASE("calibrate tie-break picks the lexicographically smallest point") {
  // Integral values: no rule can fire anywhere, every point ties.
  const std::vector<CalibrationSample> samples = {{dials({1.0, 2.0, 3.0, 4.0}), "1234"}};
  CalibrationGrid g;
  g.cur_frac_min = {0.6, 0.8};
  g.next_val_max = {1.5, 3.5};
  g.cur_frac_max = {0.2, 0.4};
  g.next_val_min = {6.5, 8.5};
  const auto t = calibrate(samples, g);
  CHECK(t.carry_up.cur_frac_min == 0.6);
  CHECK(t.carry_up.next_val_max == 1.5);
  CHECK(t.carry_down.cur_frac_max == 0.2);
  CHECK(t.carry_down.next_val_min == 6.5);
}

TEST_CASE("calibrate prefers the point that fixes more meters") {
  // With frac bound 0.75 the carry-up repairs the first three meters and
  // leaves the other two matching; tightening the bound to 0.95 repairs
  // only the last one. Ground truths traced by hand, right to left.
  std::vector<CalibrationSample> samples = {
      {dials({0.4, 4.1, 1.8, 3.9, 2.2}), "04142"},
      {dials({3.4, 6.9, 1.2, 4.5, 5.6}), "37145"},
      {dials({5.75, 0.8, 4.4, 3.3, 6.2}), "60436"},
      {dials({2.2, 3.3, 4.4, 5.5, 6.6}), "23456"},
      {dials({1.97, 2.2, 3.3, 4.4, 5.5}), "22345"},
  };
  CalibrationGrid g;
  g.cur_frac_min = {0.75, 0.95};
  g.next_val_max = {2.5};
  g.cur_frac_max = {0.25};
  g.next_val_min = {7.5};
  const auto t = calibrate(samples, g);
  CHECK(t.carry_up.cur_frac_min == 0.75);
  // Re-derive both candidate scores with the independent oracle.
  const auto oracle_best = oracles::oracle_calibrate(samples, g);
  REQUIRE(same_point(t, oracle_best));
}

TEST_CASE("calibrate rejects empty input and bad grids") {
  CHECK_THROWS_AS(calibrate({}, singleton_grid()), EmptyCalibrationSet);
  CHECK_THROWS_AS(oracles::oracle_calibrate({}, singleton_grid()), EmptyCalibrationSet);
  CalibrationGrid g = singleton_grid();
  g.next_val_max = {};
  const std::vector<CalibrationSample> samples = {{dials({1.0, 2.0, 3.0, 4.0}), "1234"}};
  CHECK_THROWS_AS(calibrate(samples, g), ValidationError);
  g = singleton_grid();
  g.cur_frac_min = {0.9, 0.7};  // unsorted
  CHECK_THROWS_AS(calibrate(samples, g), ValidationError);
  CHECK_THROWS_AS(calibrate({{dials({1.0, 2.0, 3.0, 4.0}), "123"}}, singleton_grid()),
                  ValidationError);
}

TEST_CASE("calibrate agrees with the naive oracle on random inputs") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = (trial % 2 == 0) ? 4 : 5;
    std::vector<CalibrationSample> samples;
    const int n = 2 + static_cast<int>(rng() % 8);
    for (int s = 0; s < n; ++s) {
      const double limit = (k == 4) ? 1e4 : 1e5;
      const double c = unit(rng) * (limit - 1.0);
      auto values = decompose_consumption(c, k);
      // jitter one dial to create correction opportunities
      const auto j = rng() % values.size();
      double noisy = values[j].value() + 0.3 * (unit(rng) - 0.5);
      noisy = std::fmod(noisy + 10.0, 10.0);
      values[j] = DialValue(noisy);
      samples.push_back({values, true_reading(c, k)});
    }
    CalibrationGrid g;
    const int per_list = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < per_list; ++i) {
      g.cur_frac_min.push_back(0.55 + 0.1 * i);
      g.next_val_max.push_back(0.5 + 1.0 * i);
      g.cur_frac_max.push_back(0.1 + 0.1 * i);
      g.next_val_min.push_back(6.0 + 1.0 * i);
    }
    const auto fast = calibrate(samples, g);
    const auto slow = oracles::oracle_calibrate(samples, g);
    REQUIRE(same_point(fast, slow));
  }
}
