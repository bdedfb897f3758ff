// Generates the bundled evaluation fixture (data/fixtures/map914).
//
// The dataset is laid out so the reported numbers are exact arithmetic:
// per class, `lead_fp` false positives rank above every true positive and
// `trail_fp` rank below, true positives coincide with their ground-truth
// boxes, and false-positive boxes overlap nothing. All-point AP for such a
// class is (tp/gt) * (tp/(lead_fp+tp)), so with
//
//   class           gt   tp   lead_fp  trail_fp
//   Bear           400  380         6        10
//   Yak            250  232         1         6
//   TibetanMastiff 250  230         4         5
//   Human          100   94         5         4
//
// mAP = 0.91401, recall = 936/1000 = 0.936, precision = 936/977 -> F1 =
// 0.94689. Six of the bear false positives carry high confidence and sit in
// six distinct no-bear segments out of 158, so the segment-level FPR is
// 6/158 = 0.03797.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <vector>

#include "bearguard/annotations.hpp"
#include "bearguard/types.hpp"

using namespace bearguard;

namespace {

struct Dataset {
  std::map<std::int64_t, std::vector<Detection>> gt;
  std::map<std::int64_t, std::vector<Detection>> preds;
};

// Ground-truth boxes sit on a row near the top of the frame, false
// positives on a separate row near the bottom; nothing ever overlaps.
BoundingBox gt_box(int slot) { return BoundingBox(8.0 + 36.0 * slot, 40.0, 28.0, 28.0); }
BoundingBox fp_box(int slot) { return BoundingBox(8.0 + 36.0 * slot, 180.0, 28.0, 28.0); }

double tp_confidence(int i, int tp_total) {
  return 0.95 - 0.2 * (i + 1) / (tp_total + 1);
}
double lead_fp_confidence(int j) { return 0.99 - 0.004 * j; }
double trail_fp_confidence(int j) { return 0.30 + 0.003 * j; }

// Places `count` ground-truth boxes for `cls`, `per_segment` of them in the
// leading frames of each segment starting at `first_segment`. The first
// `tp_count` of them get an exactly coincident prediction.
void fill_block(Dataset& ds, ObjectClass cls, int count, int tp_count,
                int first_segment, int per_segment, int extra_segments,
                int& tp_emitted, int tp_total) {
  int emitted = 0;
  int segment = first_segment;
  while (emitted < count) {
    int in_this_segment = per_segment + (extra_segments > 0 ? 1 : 0);
    if (extra_segments > 0) --extra_segments;
    for (int f = 0; f < in_this_segment && emitted < count; ++f) {
      std::int64_t frame = static_cast<std::int64_t>(segment) * 10 + f;
      ds.gt[frame].emplace_back(cls, 1.0, gt_box(0));
      if (emitted < tp_count) {
        ds.preds[frame].emplace_back(cls, tp_confidence(tp_emitted, tp_total),
                                     gt_box(0));
        ++tp_emitted;
      }
      ++emitted;
    }
    ++segment;
  }
}

void write_csv(const std::map<std::int64_t, std::vector<Detection>>& data,
               const std::filesystem::path& path) {
  std::vector<FrameAnnotations> frames;
  for (const auto& [index, dets] : data) {
    frames.push_back(FrameAnnotations{index, dets});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << path << "\n";
    std::exit(1);
  }
  write_annotations(frames, out);
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out_dir =
      argc > 1 ? argv[1] : "data/fixtures/map914";
  std::filesystem::create_directories(out_dir);

  Dataset ds;

  // Yak block: segments 0..44, 6 gt per segment in the first 25, 5 after.
  int tp_emitted = 0;
  fill_block(ds, ObjectClass::Yak, 250, 232, 0, 5, 25, tp_emitted, 232);

  // Tibetan mastiff block: segments 45..85, 7 gt in the first 4 segments.
  tp_emitted = 0;
  fill_block(ds, ObjectClass::TibetanMastiff, 250, 230, 45, 6, 4, tp_emitted,
             230);

  // Human block: segments 86..135, 2 gt per segment.
  tp_emitted = 0;
  fill_block(ds, ObjectClass::Human, 100, 94, 86, 2, 0, tp_emitted, 94);

  // Bear block: segments 158..165, 5 gt per frame across 80 frames.
  {
    int tp = 0;
    int emitted = 0;
    for (std::int64_t frame = 1580; frame < 1660; ++frame) {
      for (int slot = 0; slot < 5; ++slot) {
        ds.gt[frame].emplace_back(ObjectClass::Bear, 1.0, gt_box(slot));
        if (emitted < 380) {
          ds.preds[frame].emplace_back(ObjectClass::Bear,
                                       tp_confidence(tp, 380), gt_box(slot));
          ++tp;
        }
        ++emitted;
      }
    }
  }

  // High-confidence bear false positives: one per flagged no-bear segment
  // (two in labeled blocks, four in the empty block).
  {
    const std::int64_t flagged_frames[] = {100, 600, 1400, 1450, 1500, 1550};
    int j = 0;
    for (std::int64_t frame : flagged_frames) {
      ds.preds[frame].emplace_back(ObjectClass::Bear, lead_fp_confidence(j++),
                                   fp_box(0));
    }
  }
  // Low-confidence bear false positives in unflagged empty-block segments.
  {
    const std::int64_t frames[] = {1362, 1372, 1382, 1392, 1412,
                                   1422, 1432, 1442, 1462, 1472};
    int j = 0;
    for (std::int64_t frame : frames) {
      ds.preds[frame].emplace_back(ObjectClass::Bear, trail_fp_confidence(j++),
                                   fp_box(1));
    }
  }
  // Non-bear false positives, high confidence first, stragglers after.
  {
    int j = 0;
    ds.preds[5].emplace_back(ObjectClass::Yak, lead_fp_confidence(j++), fp_box(0));
    j = 0;
    for (std::int64_t frame : {455, 465, 475, 485}) {
      ds.preds[frame].emplace_back(ObjectClass::TibetanMastiff,
                                   lead_fp_confidence(j++), fp_box(0));
    }
    j = 0;
    for (std::int64_t frame : {865, 875, 885, 895, 905}) {
      ds.preds[frame].emplace_back(ObjectClass::Human, lead_fp_confidence(j++),
                                   fp_box(0));
    }
    j = 0;
    for (std::int64_t frame : {201, 211, 221, 231, 241, 251}) {
      ds.preds[frame].emplace_back(ObjectClass::Yak, trail_fp_confidence(j++),
                                   fp_box(1));
    }
    j = 0;
    for (std::int64_t frame : {701, 711, 721, 731, 741}) {
      ds.preds[frame].emplace_back(ObjectClass::TibetanMastiff,
                                   trail_fp_confidence(j++), fp_box(1));
    }
    j = 0;
    for (std::int64_t frame : {1001, 1011, 1021, 1031}) {
      ds.preds[frame].emplace_back(ObjectClass::Human, trail_fp_confidence(j++),
                                   fp_box(1));
    }
  }

  write_csv(ds.gt, out_dir / "ground_truth.csv");
  write_csv(ds.preds, out_dir / "predictions.csv");

  std::size_t gt_total = 0;
  std::size_t pred_total = 0;
  for (const auto& [f, d] : ds.gt) gt_total += d.size();
  for (const auto& [f, d] : ds.preds) pred_total += d.size();
  std::cout << "wrote " << (out_dir / "ground_truth.csv").string() << " ("
            << gt_total << " boxes) and "
            << (out_dir / "predictions.csv").string() << " (" << pred_total
            << " boxes)\n";
  return 0;
}
