#include "bearguard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bearguard {

namespace {

void check_ratio(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << "metrics report: " << name << " = " << v << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

}  // namespace

MetricsReport::MetricsReport(double map_value, double precision, double recall,
                             double fpr,
                             std::map<ObjectClass, double> per_class_video_misid)
    : map_value(map_value),
      precision(precision),
      recall(recall),
      f1(f1_score(precision, recall)),
      fpr(fpr),
      per_class_video_misid(std::move(per_class_video_misid)) {
  check_ratio(map_value, "mAP");
  check_ratio(precision, "precision");
  check_ratio(recall, "recall");
  check_ratio(f1, "f1");
  check_ratio(fpr, "fpr");
  for (const auto& [cls, rate] : this->per_class_video_misid) {
    check_ratio(rate, ("video misid rate for " + to_string(cls)).c_str());
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  double iy =
      std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  double inter = ix * iy;
  double uni = a.area() + b.area() - inter;
  return inter / uni;  // valid boxes have positive area, so uni > 0
}

MatchResult match_greedy(const std::vector<Detection>& preds,
                         const std::vector<Detection>& gts,
                         double iou_threshold) {
  if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
    std::ostringstream os;
    os << "match_greedy: iou threshold " << iou_threshold << " outside (0, 1]";
    throw DomainError(os.str());
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&preds](std::size_t a, std::size_t b) {
                     return preds[a].confidence > preds[b].confidence;
                   });

  MatchResult result;
  std::vector<bool> gt_taken(gts.size(), false);
  for (std::size_t pi : order) {
    double best_iou = 0.0;
    std::size_t best_gt = gts.size();
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_taken[gi]) continue;
      double v = iou(preds[pi].bbox, gts[gi].bbox);
      if (v >= iou_threshold && v > best_iou) {
        best_iou = v;
        best_gt = gi;
      }
    }
    if (best_gt < gts.size()) {
      gt_taken[best_gt] = true;
      result.matched_pairs.emplace_back(pi, best_gt, best_iou);
      ++result.true_positives;
    } else {
      ++result.false_positives;
    }
  }
  result.false_negatives =
      static_cast<int>(gts.size()) - result.true_positives;
  return result;
}

double average_precision(const std::vector<RankedPrediction>& ranked,
                         std::size_t total_gt) {
  if (total_gt == 0) throw DomainError("average_precision: no ground truth");
  std::size_t tp_total = 0;
  for (const auto& r : ranked) tp_total += r.is_tp ? 1 : 0;
  if (tp_total > total_gt) {
    throw DomainError(
        "average_precision: more true positives than ground truth");
  }
  if (ranked.empty() || tp_total == 0) return 0.0;

  const std::size_t n = ranked.size();
  std::vector<double> precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[i].is_tp) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Precision envelope: running max from the right.
  for (std::size_t i = n - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  // Recall rises by 1/total_gt at each true positive; the envelope value
  // there is that step's contribution to the area. Dividing once keeps a
  // perfect detector at exactly 1.
  double envelope_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ranked[i].is_tp) envelope_sum += precision[i];
  }
  return std::min(envelope_sum / static_cast<double>(total_gt), 1.0);
}

double mean_average_precision(
    const std::map<ObjectClass, double>& per_class_ap) {
  if (per_class_ap.empty()) {
    throw DomainError("mean_average_precision: empty per-class map");
  }
  double sum = 0.0;
  for (const auto& [cls, ap] : per_class_ap) sum += ap;
  return sum / static_cast<double>(per_class_ap.size());
}

double f1_score(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double false_positive_rate(std::size_t fp, std::size_t tn) {
  if (fp + tn == 0) {
    throw DomainError("false_positive_rate: no negatives (fp + tn == 0)");
  }
  return static_cast<double>(fp) / static_cast<double>(fp + tn);
}

std::map<ObjectClass, double> video_misclassification_rate(
    const std::vector<std::pair<ObjectClass, SegmentDecision>>& segments) {
  std::map<ObjectClass, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& [cls, decision] : segments) {
    if (cls == ObjectClass::Bear) continue;
    auto& [flagged, total] = counts[cls];
    ++total;
    if (decision == SegmentDecision::BearDetected) ++flagged;
  }
  std::map<ObjectClass, double> rates;
  for (const auto& [cls, c] : counts) {
    rates[cls] = static_cast<double>(c.first) / static_cast<double>(c.second);
  }
  return rates;
}

}  // namespace bearguard
