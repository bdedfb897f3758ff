#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bearguard/types.hpp"

namespace bearguard {

// Detections (predicted or ground truth) attached to one frame index.
struct FrameAnnotations {
  std::int64_t frame_index = 0;
  std::vector<Detection> detections;
};

// Parses the dataset CSV format:
//
//   frame,class,conf,x,y,w,h
//   0,Bear,1.0,10,10,50,50
//
// Rows are grouped by frame index and returned in ascending frame order.
// Unknown class names and boxes that violate the frame invariants raise
// ParseError naming the 1-based line number.
std::vector<FrameAnnotations> read_annotations(std::istream& source);

// Writes the same CSV format. Rows come out sorted by frame index.
void write_annotations(const std::vector<FrameAnnotations>& frames,
                       std::ostream& sink);

}  // namespace bearguard
