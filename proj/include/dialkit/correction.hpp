#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dialkit/dial_model.hpp"
#include "dialkit/errors.hpp"
#include "dialkit/metrics.hpp"

namespace dialkit {

/// Carry a dial's digit up by one when its own fraction is high but the next
/// (less significant) dial reads low: the pointer has effectively completed
/// the step the next dial already shows.
struct CarryUpRule {
  double cur_frac_min = 0.75;  // fire when frac(v_cur) >= this, in (0.5, 1)
  double next_val_max = 2.5;   // ... and v_next < this, in (0, 5)
  bool enabled = true;
};

/// The symmetric rule: fraction low, next dial high, digit goes down by one.
struct CarryDownRule {
  double cur_frac_max = 0.25;  // fire when frac(v_cur) <= this, in (0, 0.5)
  double next_val_min = 7.5;   // ... and v_next >= this, in (5, 10)
  bool enabled = true;
};

/// The two threshold pairs governing cross-dial carry correction.
struct CorrectionThresholds {
  CarryUpRule carry_up;
  CarryDownRule carry_down;
};

inline void validate_thresholds(const CorrectionThresholds& t) {
  auto in_open = [](double v, double lo, double hi) { return v > lo && v < hi; };
  if (!in_open(t.carry_up.cur_frac_min, 0.5, 1.0)) {
    throw ValidationError("carry_up.cur_frac_min", "must be in (0.5, 1)");
  }
  if (!in_open(t.carry_up.next_val_max, 0.0, 5.0)) {
    throw ValidationError("carry_up.next_val_max", "must be in (0, 5)");
  }
  if (!in_open(t.carry_down.cur_frac_max, 0.0, 0.5)) {
    throw ValidationError("carry_down.cur_frac_max", "must be in (0, 0.5)");
  }
  if (!in_open(t.carry_down.next_val_min, 5.0, 10.0)) {
    throw ValidationError("carry_down.next_val_min", "must be in (5, 10)");
  }
}

inline CorrectionThresholds default_thresholds() { return CorrectionThresholds{}; }

inline CorrectionThresholds disabled_thresholds() {
  CorrectionThresholds t;
  t.carry_up.enabled = false;
  t.carry_down.enabled = false;
  return t;
}

/// Outcome of correcting one dial against its right-hand neighbor.
struct DialCorrection {
  int digit = 0;                  // final digit, modulo-10 wrapped
  DialValue corrected;            // digit + v_next / 10 (raw value if no neighbor)
  int direction = 0;              // +1 carry-up, -1 carry-down, 0 no rule fired
  bool fired() const noexcept { return direction != 0; }
};

/// Applies the carry rules to one dial given the (already corrected) value
/// of the dial immediately to its right. An exactly integral current value
/// carries no sub-digit evidence and never triggers a carry, so discrete
/// (argmax) readings pass through unchanged.
inline DialCorrection correct_dial(DialValue v_cur, DialValue v_next,
                                   const CorrectionThresholds& t) {
  const double f = v_cur.frac();
  const int d = v_cur.floor_digit();
  DialCorrection out;
  if (t.carry_up.enabled && f >= t.carry_up.cur_frac_min &&
      v_next.value() < t.carry_up.next_val_max) {
    out.digit = (d + 1) % 10;
    out.direction = +1;
  } else if (t.carry_down.enabled && f > 0.0 && f <= t.carry_down.cur_frac_max &&
             v_next.value() >= t.carry_down.next_val_min) {
    out.digit = (d + 9) % 10;
    out.direction = -1;
  } else {
    out.digit = d;
  }
  out.corrected = DialValue(out.digit + v_next.value() / 10.0);
  return out;
}

/// Right-to-left correction pass over a whole counter. Each dial is checked
/// against the corrected value of its right-hand neighbor, so carries can
/// cascade (... 9.9, 0.1 patterns). The rightmost dial has no neighbor and
/// keeps floor(v) and its raw value.
inline std::vector<DialCorrection> correct_sequence_trace(const std::vector<DialValue>& values,
                                                          const CorrectionThresholds& t) {
  const int k = static_cast<int>(values.size());
  check_dial_count(k);
  std::vector<DialCorrection> trace(values.size());
  auto& last = trace.back();
  last.digit = values.back().floor_digit();
  last.corrected = values.back();
  for (int i = k - 2; i >= 0; --i) {
    const auto idx = static_cast<std::size_t>(i);
    trace[idx] = correct_dial(values[idx], trace[idx + 1].corrected, t);
  }
  return trace;
}

/// Digits only, for callers that do not need the trace.
inline std::vector<int> correct_sequence(const std::vector<DialValue>& values,
                                         const CorrectionThresholds& t) {
  std::vector<int> digits;
  digits.reserve(values.size());
  for (const auto& c : correct_sequence_trace(values, t)) digits.push_back(c.digit);
  return digits;
}

inline std::string digits_to_string(const std::vector<int>& digits) {
  std::string s;
  s.reserve(digits.size());
  for (int d : digits) s.push_back(static_cast<char>('0' + d));
  return s;
}

// ---------------------------------------------------------------------------
// Threshold calibration

/// One validation meter: uncorrected per-dial values plus the true reading.
struct CalibrationSample {
  std::vector<DialValue> values;
  std::string gt_reading;
};

/// Candidate lists for the four thresholds. Lists must be non-empty, sorted
/// ascending, and inside the corresponding threshold ranges.
struct CalibrationGrid {
  std::vector<double> cur_frac_min;
  std::vector<double> next_val_max;
  std::vector<double> cur_frac_max;
  std::vector<double> next_val_min;
};

/// The search lattice used when no grid is supplied: fractions in steps of
/// 0.05, neighbor bounds in steps of 0.5, carry-down mirrored from carry-up.
inline CalibrationGrid default_grid() {
  CalibrationGrid g;
  for (int i = 1; i <= 9; ++i) {
    g.cur_frac_min.push_back(0.5 + 0.05 * i);   // 0.55 .. 0.95
    g.cur_frac_max.push_back(0.05 * i);         // 0.05 .. 0.45
    g.next_val_max.push_back(0.5 * i);          // 0.5 .. 4.5
    g.next_val_min.push_back(5.0 + 0.5 * i);    // 5.5 .. 9.5
  }
  return g;
}

inline void validate_grid(const CalibrationGrid& grid) {
  auto check = [](const std::vector<double>& list, double lo, double hi, const char* name) {
    if (list.empty()) throw ValidationError(name, "candidate list must be non-empty");
    double prev = lo;
    for (double v : list) {
      if (!(v > lo && v < hi)) {
        throw ValidationError(name, "candidate " + std::to_string(v) + " outside (" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + ")");
      }
      if (v < prev) throw ValidationError(name, "candidate list must be sorted ascending");
      prev = v;
    }
  };
  check(grid.cur_frac_min, 0.5, 1.0, "grid.cur_frac_min");
  check(grid.next_val_max, 0.0, 5.0, "grid.next_val_max");
  check(grid.cur_frac_max, 0.0, 0.5, "grid.cur_frac_max");
  check(grid.next_val_min, 5.0, 10.0, "grid.next_val_min");
}

namespace detail {

/// Score of one grid point over the calibration set, ordered so that better
/// compares greater: more exact matches, then higher dial-rate sum, then
/// lower total absolute error.
struct CalibrationScore {
  std::size_t matches = 0;
  double drr_sum = 0.0;
  unsigned long long total_abs_error = 0;

  bool operator>(const CalibrationScore& other) const {
    if (matches != other.matches) return matches > other.matches;
    if (drr_sum != other.drr_sum) return drr_sum > other.drr_sum;
    return total_abs_error < other.total_abs_error;
  }
};

inline CalibrationScore score_thresholds(const std::vector<CalibrationSample>& samples,
                                         const CorrectionThresholds& t) {
  CalibrationScore score;
  for (const auto& sample : samples) {
    const std::string pred = digits_to_string(correct_sequence(sample.values, t));
    if (pred == sample.gt_reading) ++score.matches;
    const auto longest = std::max(pred.size(), sample.gt_reading.size());
    score.drr_sum += 1.0 - static_cast<double>(levenshtein(pred, sample.gt_reading)) /
                               static_cast<double>(longest);
    const long long pi = parse_reading_int(pred);
    const long long gi = parse_reading_int(sample.gt_reading);
    score.total_abs_error += static_cast<unsigned long long>(pi > gi ? pi - gi : gi - pi);
  }
  return score;
}

}  // namespace detail

/// Exhaustive threshold search: evaluates every grid point and returns the
/// one with the best meter-match count, ties broken by higher dial rate,
/// then lower total absolute error, then the lexicographically smallest
/// (cur_frac_min, next_val_max, cur_frac_max, next_val_min) tuple. Fully
/// deterministic.
inline CorrectionThresholds calibrate(const std::vector<CalibrationSample>& samples,
                                      const CalibrationGrid& grid) {
  if (samples.empty()) throw EmptyCalibrationSet("no calibration samples");
  validate_grid(grid);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].values.size() != samples[i].gt_reading.size()) {
      throw ValidationError("samples[" + std::to_string(i) + "]",
                            "ground-truth length does not match dial count");
    }
  }

  bool have_best = false;
  detail::CalibrationScore best_score;
  CorrectionThresholds best;
  // Ascending nested iteration makes "first strictly-better wins" equal to
  // the lexicographic tie-break.
  for (double fmin : grid.cur_frac_min) {
    for (double vmax : grid.next_val_max) {
      for (double fmax : grid.cur_frac_max) {
        for (double vmin : grid.next_val_min) {
          CorrectionThresholds t;
          t.carry_up = {fmin, vmax, true};
          t.carry_down = {fmax, vmin, true};
          const auto score = detail::score_thresholds(samples, t);
          if (!have_best || score > best_score) {
            have_best = true;
            best_score = score;
            best = t;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace dialkit
