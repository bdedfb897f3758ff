#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "bearguard/types.hpp"

namespace bearguard {

// Outcome of matching one frame's predictions against its ground truth.
struct MatchResult {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  // (prediction index, ground-truth index, iou), one entry per matched pair;
  // no index appears twice.
  std::vector<std::tuple<std::size_t, std::size_t, double>> matched_pairs;
};

// The quantities the evaluation CLI reports. Construction checks that every
// ratio is in [0, 1] and that f1 is consistent with precision and recall.
struct MetricsReport {
  double map_value = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double fpr = 0.0;
  std::map<ObjectClass, double> per_class_video_misid;

  MetricsReport() = default;
  MetricsReport(double map_value, double precision, double recall, double fpr,
                std::map<ObjectClass, double> per_class_video_misid);
};

// Intersection over union of two valid boxes, in [0, 1].
double iou(const BoundingBox& a, const BoundingBox& b);

// Greedy matching of same-class predictions to ground truth. Predictions are
// visited in descending confidence (ties by ascending input index); each one
// takes the unmatched ground truth with the highest IoU at or above
// iou_threshold (ties by ascending ground-truth index). Unmatched predictions
// are false positives, unmatched ground truths false negatives.
// iou_threshold outside (0, 1] raises DomainError.
MatchResult match_greedy(const std::vector<Detection>& preds,
                         const std::vector<Detection>& gts,
                         double iou_threshold);

// One ranked prediction: its confidence and whether matching called it a
// true positive.
struct RankedPrediction {
  double confidence = 0.0;
  bool is_tp = false;
};

// All-point interpolated average precision: the area under the precision
// envelope (running max of precision from the right) as a function of
// recall. `ranked` must be sorted by descending confidence; total_gt must be
// positive and at least the number of true-positive flags.
double average_precision(const std::vector<RankedPrediction>& ranked,
                         std::size_t total_gt);

// Unweighted mean of per-class APs. Empty map raises DomainError.
double mean_average_precision(const std::map<ObjectClass, double>& per_class_ap);

// 2pr/(p+r), defined as 0 when p + r == 0.
double f1_score(double precision, double recall);

// fp / (fp + tn). Raises DomainError when fp + tn == 0.
double false_positive_rate(std::size_t fp, std::size_t tn);

// Per non-bear class, the fraction of its segments decided BearDetected.
// Entries whose true class is Bear are ignored; classes with no segments do
// not appear in the result.
std::map<ObjectClass, double> video_misclassification_rate(
    const std::vector<std::pair<ObjectClass, SegmentDecision>>& segments);

}  // namespace bearguard
