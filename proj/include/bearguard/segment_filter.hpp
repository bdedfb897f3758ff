#pragma once

#include <vector>

#include "bearguard/types.hpp"

namespace bearguard {

enum class Windowing { Tumbling, Sliding };

std::string to_string(Windowing w);
Windowing windowing_from_string(const std::string& name);

// The video-based decision rule: a segment is a bear detection when at least
// one of its frames carries a bear detection at or above the threshold.
struct FilterConfig {
  int segment_length = 10;
  double bear_threshold = 0.70;
  Windowing windowing = Windowing::Tumbling;

  void validate() const;
};

// Classifies exactly cfg.segment_length consecutive frames.
// max_bear_confidence is the maximum bear-class confidence over all frames
// (0 when no bear detection exists); the decision is BearDetected iff that
// maximum is >= cfg.bear_threshold. Equality counts as detected.
Segment classify_segment(std::vector<Frame> frames, const FilterConfig& cfg);

// Windows an ordered frame stream into segments. Tumbling: consecutive
// non-overlapping windows, trailing partial window discarded. Sliding: one
// window ending at every frame position >= segment_length - 1.
std::vector<Segment> segment_stream(const std::vector<Frame>& frames,
                                    const FilterConfig& cfg);

}  // namespace bearguard
