#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bearguard/errors.hpp"

namespace bearguard {

// All detections live in the detector's scaled input frame, not in the
// sensor-native resolution.
inline constexpr double kDetectionFrameSize = 224.0;

// The detector emits at most this many boxes per frame.
inline constexpr int kMaxDetectionsPerFrame = 10;

// Axis-aligned box in the 224x224 detection frame, top-left origin.
// The constructor rejects degenerate or out-of-frame boxes, so downstream
// code can assume validity.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  BoundingBox() = default;
  BoundingBox(double x, double y, double w, double h);

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }

  bool operator==(const BoundingBox&) const = default;
};

enum class ObjectClass { Bear, Human, Yak, TibetanMastiff, Other };

constexpr ObjectClass kAllClasses[] = {ObjectClass::Bear, ObjectClass::Human,
                                       ObjectClass::Yak,
                                       ObjectClass::TibetanMastiff,
                                       ObjectClass::Other};

std::string to_string(ObjectClass c);
// Throws ParseError naming the offending value.
ObjectClass object_class_from_string(const std::string& name);

struct Detection {
  ObjectClass object_class = ObjectClass::Other;
  double confidence = 0.0;  // in [0, 1]
  BoundingBox bbox;

  Detection() = default;
  Detection(ObjectClass object_class, double confidence, BoundingBox bbox);

  bool operator==(const Detection&) const = default;
};

enum class Lighting { Day, Night };

std::string to_string(Lighting l);
Lighting lighting_from_string(const std::string& name);

// One frame of detector output. Holds at most kMaxDetectionsPerFrame boxes.
struct Frame {
  std::int64_t index = 0;
  double timestamp = 0.0;  // seconds since stream start
  std::vector<Detection> detections;
  Lighting lighting = Lighting::Day;

  Frame() = default;
  Frame(std::int64_t index, double timestamp, std::vector<Detection> detections,
        Lighting lighting = Lighting::Day);
};

// Rejects streams whose indices or timestamps do not strictly increase.
void check_frame_stream(const std::vector<Frame>& frames);

enum class SegmentDecision { NoBear, BearDetected };

std::string to_string(SegmentDecision d);

// A fixed-length window of consecutive frames classified as a whole.
struct Segment {
  std::vector<Frame> frames;
  SegmentDecision decision = SegmentDecision::NoBear;
  double max_bear_confidence = 0.0;

  double start_time() const { return frames.front().timestamp; }
  double end_time() const { return frames.back().timestamp; }
};

}  // namespace bearguard
