#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dialkit/errors.hpp"
#include "dialkit/geometry.hpp"

namespace dialkit {

/// One meter's predicted digit string next to its ground truth.
struct ReadingPair {
  std::string pred;
  std::string gt;
};

inline void validate_reading_pair(const ReadingPair& pair, const std::string& where = "pair") {
  auto check = [&](const std::string& s, const char* field) {
    if (s.empty()) throw ValidationError(where + "." + field, "must be non-empty");
    for (char ch : s) {
      if (ch < '0' || ch > '9') {
        throw ValidationError(where + "." + field, "must contain digits only");
      }
    }
  };
  check(pair.pred, "pred");
  check(pair.gt, "gt");
}

namespace detail {

inline void require_pairs(const std::vector<ReadingPair>& pairs) {
  if (pairs.empty()) throw EmptyEvaluationSet("no reading pairs to evaluate");
}

inline long long parse_reading_int(const std::string& s) {
  if (s.empty()) throw ParseError(0, "empty reading string");
  long long v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') {
      throw ParseError(0, "non-digit character in reading \"" + s + "\"");
    }
    v = v * 10 + (ch - '0');
  }
  return v;
}

inline unsigned long long abs_reading_error(const ReadingPair& p) {
  const long long a = parse_reading_int(p.pred);
  const long long b = parse_reading_int(p.gt);
  return static_cast<unsigned long long>(a > b ? a - b : b - a);
}

}  // namespace detail

/// Fraction of meters whose predicted string matches ground truth exactly.
inline double mrr(const std::vector<ReadingPair>& pairs) {
  detail::require_pairs(pairs);
  std::size_t matches = 0;
  for (const auto& p : pairs) {
    if (p.pred == p.gt) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(pairs.size());
}

/// Minimum number of single-character insertions, deletions and
/// substitutions turning a into b.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = b.size();
  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
    }
  }
  return row[n];
}

/// Mean per-meter dial recognition rate: 1 - lev(pred, gt) / max(|pred|, |gt|).
inline double drr(const std::vector<ReadingPair>& pairs) {
  detail::require_pairs(pairs);
  double sum = 0.0;
  for (const auto& p : pairs) {
    const auto longest = std::max(p.pred.size(), p.gt.size());
    sum += 1.0 - static_cast<double>(levenshtein(p.pred, p.gt)) / static_cast<double>(longest);
  }
  return sum / static_cast<double>(pairs.size());
}

/// Mean absolute difference between readings interpreted as integers (kWh).
inline double mae(const std::vector<ReadingPair>& pairs) {
  detail::require_pairs(pairs);
  double sum = 0.0;
  for (const auto& p : pairs) {
    sum += static_cast<double>(detail::abs_reading_error(p));
  }
  return sum / static_cast<double>(pairs.size());
}

/// Fraction of meters whose absolute integer error is at most `tolerance`.
inline double tolerant_mrr(const std::vector<ReadingPair>& pairs, unsigned long long tolerance) {
  detail::require_pairs(pairs);
  std::size_t within = 0;
  for (const auto& p : pairs) {
    if (detail::abs_reading_error(p) <= tolerance) ++within;
  }
  return static_cast<double>(within) / static_cast<double>(pairs.size());
}

/// Where the mistakes land: for equal-length pairs, the fraction of all
/// mismatched positions falling on each dial position (1 = leftmost).
/// Unequal-length pairs are excluded; tally them with unequal_length_count.
inline std::map<int, double> error_position_distribution(const std::vector<ReadingPair>& pairs) {
  detail::require_pairs(pairs);
  std::map<int, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& p : pairs) {
    if (p.pred.size() != p.gt.size()) continue;
    for (std::size_t i = 0; i < p.gt.size(); ++i) {
      if (p.pred[i] != p.gt[i]) {
        ++counts[static_cast<int>(i) + 1];
        ++total;
      }
    }
  }
  std::map<int, double> dist;
  for (const auto& [pos, count] : counts) {
    dist[pos] = static_cast<double>(count) / static_cast<double>(total);
  }
  return dist;
}

inline std::size_t unequal_length_count(const std::vector<ReadingPair>& pairs) {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(),
                    [](const ReadingPair& p) { return p.pred.size() != p.gt.size(); }));
}

inline constexpr const char* kMagnitudeBuckets[] = {"1", "2-9", "10-99", "100-999", "1000+"};

/// Bucket label for a nonzero absolute reading error.
inline const char* magnitude_bucket(unsigned long long err) {
  if (err <= 1) return kMagnitudeBuckets[0];
  if (err <= 9) return kMagnitudeBuckets[1];
  if (err <= 99) return kMagnitudeBuckets[2];
  if (err <= 999) return kMagnitudeBuckets[3];
  return kMagnitudeBuckets[4];
}

/// Histogram of erroneous meters by absolute error magnitude, decimal-decade
/// buckets with the exact-1 bucket kept separate. Correct meters (error 0)
/// are excluded; counts sum to the number of pairs with nonzero error.
inline std::vector<std::pair<std::string, std::size_t>> magnitude_histogram(
    const std::vector<ReadingPair>& pairs) {
  detail::require_pairs(pairs);
  std::vector<std::pair<std::string, std::size_t>> hist;
  for (const char* b : kMagnitudeBuckets) hist.emplace_back(b, 0);
  for (const auto& p : pairs) {
    const auto err = detail::abs_reading_error(p);
    if (err == 0) continue;
    const std::string bucket = magnitude_bucket(err);
    for (auto& [name, count] : hist) {
      if (name == bucket) {
        ++count;
        break;
      }
    }
  }
  return hist;
}

/// Mean squared residual between predictions and targets.
inline double mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw ShapeMismatch("predictions (" + std::to_string(predictions.size()) +
                        ") and targets (" + std::to_string(targets.size()) +
                        ") must have equal non-zero lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    sum += e * e;
  }
  return sum / static_cast<double>(predictions.size());
}

inline double rmse(const std::vector<double>& predictions, const std::vector<double>& targets) {
  return std::sqrt(mse(predictions, targets));
}

// ---------------------------------------------------------------------------
// Detection evaluation (mAP)

struct GroundTruthBox {
  BBox box;
  int cls = 0;
};

struct PredictedBox {
  BBox box;
  int cls = 0;
  double confidence = 0.0;
};

/// One image's detections next to its ground-truth boxes.
struct DetectionScene {
  std::string image_id;
  std::vector<PredictedBox> predictions;
  std::vector<GroundTruthBox> ground_truth;
};

struct ApResult {
  std::map<int, double> per_class;  // classes with at least one GT box
  double map = 0.0;
};

/// Mean average precision at a single IoU threshold. Detections are ranked
/// by descending confidence (ties keep scene/input order); each one is a TP
/// if it overlaps an unmatched same-class GT box at IoU >= threshold,
/// matching the highest-IoU candidate first. AP integrates the
/// precision-recall curve with the precision envelope (all-point
/// interpolation). Classes without ground truth do not enter the mean.
inline ApResult mean_ap(const std::vector<DetectionScene>& scenes, double iou_threshold = 0.5) {
  std::vector<int> classes;
  std::size_t total_gt = 0;
  for (const auto& scene : scenes) {
    for (const auto& gt : scene.ground_truth) {
      ++total_gt;
      if (std::find(classes.begin(), classes.end(), gt.cls) == classes.end()) {
        classes.push_back(gt.cls);
      }
    }
  }
  if (total_gt == 0) throw EmptyGroundTruth("no ground-truth boxes in any scene");
  std::sort(classes.begin(), classes.end());

  ApResult result;
  for (int cls : classes) {
    struct RankedDet {
      double confidence;
      std::size_t scene;
      const BBox* box;
    };
    std::vector<RankedDet> dets;
    std::size_t n_gt = 0;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      for (const auto& det : scenes[s].predictions) {
        if (det.cls == cls) dets.push_back({det.confidence, s, &det.box});
      }
      for (const auto& gt : scenes[s].ground_truth) {
        if (gt.cls == cls) ++n_gt;
      }
    }
    std::stable_sort(dets.begin(), dets.end(),
                     [](const RankedDet& a, const RankedDet& b) {
                       return a.confidence > b.confidence;
                     });

    std::vector<std::vector<bool>> matched(scenes.size());
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      matched[s].assign(scenes[s].ground_truth.size(), false);
    }

    std::vector<double> precision, recall;
    std::size_t tp = 0;
    for (std::size_t rank = 0; rank < dets.size(); ++rank) {
      const auto& det = dets[rank];
      const auto& gts = scenes[det.scene].ground_truth;
      double best_iou = 0.0;
      std::size_t best = gts.size();
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gts[g].cls != cls || matched[det.scene][g]) continue;
        const double overlap = iou(*det.box, gts[g].box);
        if (overlap > best_iou) {
          best_iou = overlap;
          best = g;
        }
      }
      if (best != gts.size() && best_iou >= iou_threshold) {
        matched[det.scene][best] = true;
        ++tp;
      }
      precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
      recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
    }

    // Envelope: precision made non-increasing from the right, then integrate
    // over recall increments.
    for (std::size_t i = precision.size(); i-- > 1;) {
      precision[i - 1] = std::max(precision[i - 1], precision[i]);
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < precision.size(); ++i) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
    result.per_class[cls] = ap;
  }

  double sum = 0.0;
  for (const auto& [cls, ap] : result.per_class) sum += ap;
  result.map = sum / static_cast<double>(result.per_class.size());
  return result;
}

// ---------------------------------------------------------------------------
// Aggregate report

/// Everything the evaluation protocol reports for one batch of meters.
struct MetricsReport {
  std::size_t n_meters = 0;
  double mrr = 0.0;
  double drr = 0.0;
  double mae = 0.0;
  std::map<unsigned long long, double> tolerant_mrr;
  std::map<int, double> position_errors;
  std::vector<std::pair<std::string, std::size_t>> magnitude_histogram;
  std::size_t unequal_length_count = 0;
};

inline MetricsReport compute_report(const std::vector<ReadingPair>& pairs,
                                    const std::vector<unsigned long long>& tolerances = {0, 1}) {
  detail::require_pairs(pairs);
  MetricsReport report;
  report.n_meters = pairs.size();
  report.mrr = mrr(pairs);
  report.drr = drr(pairs);
  report.mae = mae(pairs);
  for (auto tol : tolerances) {
    report.tolerant_mrr[tol] = tolerant_mrr(pairs, tol);
  }
  report.position_errors = error_position_distribution(pairs);
  report.magnitude_histogram = magnitude_histogram(pairs);
  report.unequal_length_count = unequal_length_count(pairs);
  return report;
}

}  // namespace dialkit
