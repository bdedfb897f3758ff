#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <json.hpp>

#include "bearguard/annotations.hpp"
#include "bearguard/metrics.hpp"
#include "bearguard/segment_filter.hpp"

namespace bearguard {

struct EvalOptions {
  double iou_threshold = 0.5;
  FilterConfig filter;
};

struct DatasetEvalResult {
  MetricsReport report;
  std::map<ObjectClass, double> per_class_ap;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::size_t total_ground_truth = 0;
  std::size_t total_predictions = 0;
  // Segment-level negatives: tumbling (or sliding, per options) windows with
  // no bear ground truth anywhere in their frames.
  std::size_t negative_segments = 0;
  std::size_t flagged_negative_segments = 0;
};

// Evaluates a prediction set against ground truth over a shared frame range.
//
// Detection level: per-frame greedy matching at options.iou_threshold,
// per-class all-point AP over the pooled ranking, micro-averaged precision
// and recall across classes. AP is computed for classes with at least one
// ground-truth box; predictions of unseen classes still count as false
// positives.
//
// Segment level: the frame range is windowed with options.filter applied to
// the predictions. FPR is the fraction of no-bear-ground-truth segments that
// the filter flags; the per-class video misidentification rate counts, for
// each non-bear class, the fraction of flagged segments among those
// containing that class (and no bear).
//
// With no ground truth at all, every rate reports as zero.
DatasetEvalResult evaluate_dataset(const std::vector<FrameAnnotations>& gt,
                                   const std::vector<FrameAnnotations>& preds,
                                   const EvalOptions& options);

// JSON form of the result, as printed by the CLI and metrics.json.
nlohmann::ordered_json eval_result_to_json(const DatasetEvalResult& result,
                                           const EvalOptions& options);

}  // namespace bearguard
