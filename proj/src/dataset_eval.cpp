#include "bearguard/dataset_eval.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace bearguard {

namespace {

using ByFrame = std::map<std::int64_t, std::vector<Detection>>;

ByFrame index_by_frame(const std::vector<FrameAnnotations>& frames) {
  ByFrame out;
  for (const auto& f : frames) {
    auto& dets = out[f.frame_index];
    dets.insert(dets.end(), f.detections.begin(), f.detections.end());
  }
  return out;
}

std::vector<Detection> of_class(const std::vector<Detection>& dets,
                                ObjectClass cls) {
  std::vector<Detection> out;
  for (const auto& d : dets) {
    if (d.object_class == cls) out.push_back(d);
  }
  return out;
}

// One prediction's fate, tagged with its pooled-ranking sort key.
struct PooledPrediction {
  double confidence;
  std::int64_t frame_index;
  std::size_t index_in_frame;
  bool is_tp;
};

}  // namespace

DatasetEvalResult evaluate_dataset(const std::vector<FrameAnnotations>& gt,
                                   const std::vector<FrameAnnotations>& preds,
                                   const EvalOptions& options) {
  options.filter.validate();
  if (!(options.iou_threshold > 0.0) || options.iou_threshold > 1.0) {
    throw DomainError("evaluate: iou threshold outside (0, 1]");
  }
  DatasetEvalResult result;

  ByFrame gt_by_frame = index_by_frame(gt);
  ByFrame pred_by_frame = index_by_frame(preds);

  std::set<std::int64_t> frame_indices;
  std::map<ObjectClass, std::size_t> gt_counts;
  for (const auto& [idx, dets] : gt_by_frame) {
    frame_indices.insert(idx);
    for (const auto& d : dets) ++gt_counts[d.object_class];
  }
  for (const auto& [idx, dets] : pred_by_frame) {
    frame_indices.insert(idx);
    result.total_predictions += dets.size();
  }
  for (const auto& [cls, n] : gt_counts) result.total_ground_truth += n;

  // Detection level, per class with ground truth.
  for (const auto& [cls, class_gt_total] : gt_counts) {
    std::vector<PooledPrediction> pooled;
    for (const auto& [frame, dets] : pred_by_frame) {
      std::vector<Detection> frame_preds = of_class(dets, cls);
      if (frame_preds.empty()) continue;
      auto gt_it = gt_by_frame.find(frame);
      std::vector<Detection> frame_gts =
          gt_it == gt_by_frame.end() ? std::vector<Detection>{}
                                     : of_class(gt_it->second, cls);
      MatchResult match =
          match_greedy(frame_preds, frame_gts, options.iou_threshold);
      std::vector<bool> tp_flags(frame_preds.size(), false);
      for (const auto& [pi, gi, v] : match.matched_pairs) tp_flags[pi] = true;
      for (std::size_t i = 0; i < frame_preds.size(); ++i) {
        pooled.push_back(PooledPrediction{frame_preds[i].confidence, frame, i,
                                          tp_flags[i]});
      }
    }
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const PooledPrediction& a, const PooledPrediction& b) {
                       if (a.confidence != b.confidence) {
                         return a.confidence > b.confidence;
                       }
                       if (a.frame_index != b.frame_index) {
                         return a.frame_index < b.frame_index;
                       }
                       return a.index_in_frame < b.index_in_frame;
                     });
    std::vector<RankedPrediction> ranked;
    ranked.reserve(pooled.size());
    std::size_t class_tp = 0;
    for (const auto& p : pooled) {
      ranked.push_back(RankedPrediction{p.confidence, p.is_tp});
      if (p.is_tp) ++class_tp;
    }
    result.per_class_ap[cls] = average_precision(ranked, class_gt_total);
    result.true_positives += class_tp;
    result.false_negatives += class_gt_total - class_tp;
  }
  result.false_positives = result.total_predictions - result.true_positives;

  double map_value = result.per_class_ap.empty()
                         ? 0.0
                         : mean_average_precision(result.per_class_ap);
  double precision =
      result.total_predictions == 0
          ? 0.0
          : static_cast<double>(result.true_positives) /
                static_cast<double>(result.total_predictions);
  double recall = result.total_ground_truth == 0
                      ? 0.0
                      : static_cast<double>(result.true_positives) /
                            static_cast<double>(result.total_ground_truth);

  // Segment level over the shared frame range [0, max index].
  std::map<ObjectClass, double> misid;
  std::size_t negatives = 0;
  std::size_t flagged_negatives = 0;
  if (!frame_indices.empty()) {
    const std::int64_t max_frame = *frame_indices.rbegin();
    const double frame_period = 0.1;  // synthetic timeline, decisions ignore it
    std::vector<Frame> pred_frames;
    pred_frames.reserve(static_cast<std::size_t>(max_frame) + 1);
    for (std::int64_t i = 0; i <= max_frame; ++i) {
      auto it = pred_by_frame.find(i);
      pred_frames.emplace_back(
          i, static_cast<double>(i) * frame_period,
          it == pred_by_frame.end() ? std::vector<Detection>{} : it->second);
    }
    std::vector<Segment> segments = segment_stream(pred_frames, options.filter);
    std::vector<std::pair<ObjectClass, SegmentDecision>> labeled;
    for (const Segment& seg : segments) {
      bool bear_gt = false;
      std::set<ObjectClass> classes;
      for (const Frame& f : seg.frames) {
        auto it = gt_by_frame.find(f.index);
        if (it == gt_by_frame.end()) continue;
        for (const Detection& d : it->second) {
          if (d.object_class == ObjectClass::Bear) bear_gt = true;
          classes.insert(d.object_class);
        }
      }
      if (bear_gt) continue;
      ++negatives;
      if (seg.decision == SegmentDecision::BearDetected) ++flagged_negatives;
      for (ObjectClass cls : classes) labeled.emplace_back(cls, seg.decision);
    }
    misid = video_misclassification_rate(labeled);
  }
  result.negative_segments = negatives;
  result.flagged_negative_segments = flagged_negatives;
  double fpr = negatives == 0 ? 0.0
                              : false_positive_rate(flagged_negatives,
                                                    negatives - flagged_negatives);

  result.report =
      MetricsReport(map_value, precision, recall, fpr, std::move(misid));
  return result;
}

nlohmann::ordered_json eval_result_to_json(const DatasetEvalResult& result,
                                           const EvalOptions& options) {
  nlohmann::ordered_json j;
  j["map"] = result.report.map_value;
  j["precision"] = result.report.precision;
  j["recall"] = result.report.recall;
  j["f1"] = result.report.f1;
  j["fpr"] = result.report.fpr;
  nlohmann::ordered_json misid = nlohmann::ordered_json::object();
  for (const auto& [cls, rate] : result.report.per_class_video_misid) {
    misid[to_string(cls)] = rate;
  }
  j["video_misid"] = std::move(misid);
  nlohmann::ordered_json ap = nlohmann::ordered_json::object();
  for (const auto& [cls, value] : result.per_class_ap) {
    ap[to_string(cls)] = value;
  }
  j["per_class_ap"] = std::move(ap);
  j["counts"] = {{"true_positives", result.true_positives},
                 {"false_positives", result.false_positives},
                 {"false_negatives", result.false_negatives},
                 {"ground_truth", result.total_ground_truth},
                 {"predictions", result.total_predictions},
                 {"negative_segments", result.negative_segments},
                 {"flagged_negative_segments", result.flagged_negative_segments}};
  j["iou_threshold"] = options.iou_threshold;
  j["segment_length"] = options.filter.segment_length;
  j["bear_threshold"] = options.filter.bear_threshold;
  j["windowing"] = to_string(options.filter.windowing);
  return j;
}

}  // namespace bearguard
