#include "bearguard/types.hpp"

#include <cmath>
#include <sstream>

namespace bearguard {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

BoundingBox::BoundingBox(double x, double y, double w, double h)
    : x(x), y(y), w(w), h(h) {
  if (!finite(x) || !finite(y) || !finite(w) || !finite(h)) {
    throw DomainError("bounding box: non-finite coordinate");
  }
  if (w <= 0.0 || h <= 0.0) {
    std::ostringstream os;
    os << "bounding box: width and height must be positive, got w=" << w
       << " h=" << h;
    throw DomainError(os.str());
  }
  if (x < 0.0 || y < 0.0 || x + w > kDetectionFrameSize ||
      y + h > kDetectionFrameSize) {
    std::ostringstream os;
    os << "bounding box: [" << x << "," << y << "," << w << "," << h
       << "] leaves the " << kDetectionFrameSize << "x" << kDetectionFrameSize
       << " detection frame";
    throw DomainError(os.str());
  }
}

std::string to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Bear:
      return "Bear";
    case ObjectClass::Human:
      return "Human";
    case ObjectClass::Yak:
      return "Yak";
    case ObjectClass::TibetanMastiff:
      return "TibetanMastiff";
    case ObjectClass::Other:
      return "Other";
  }
  throw DomainError("unknown ObjectClass enum value");
}

ObjectClass object_class_from_string(const std::string& name) {
  for (ObjectClass c : kAllClasses) {
    if (to_string(c) == name) return c;
  }
  throw ParseError("unknown object class \"" + name + "\"");
}

Detection::Detection(ObjectClass object_class, double confidence,
                     BoundingBox bbox)
    : object_class(object_class), confidence(confidence), bbox(bbox) {
  if (!finite(confidence) || confidence < 0.0 || confidence > 1.0) {
    std::ostringstream os;
    os << "detection: confidence " << confidence << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

std::string to_string(Lighting l) {
  return l == Lighting::Day ? "Day" : "Night";
}

Lighting lighting_from_string(const std::string& name) {
  if (name == "Day") return Lighting::Day;
  if (name == "Night") return Lighting::Night;
  throw ParseError("unknown lighting \"" + name + "\" (expected Day or Night)");
}

Frame::Frame(std::int64_t index, double timestamp,
             std::vector<Detection> detections, Lighting lighting)
    : index(index),
      timestamp(timestamp),
      detections(std::move(detections)),
      lighting(lighting) {
  if (!finite(timestamp) || timestamp < 0.0) {
    throw DomainError("frame: timestamp must be finite and non-negative");
  }
  if (static_cast<int>(this->detections.size()) > kMaxDetectionsPerFrame) {
    std::ostringstream os;
    os << "frame " << index << ": " << this->detections.size()
       << " detections exceed the per-frame limit of "
       << kMaxDetectionsPerFrame;
    throw DomainError(os.str());
  }
}

void check_frame_stream(const std::vector<Frame>& frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].index <= frames[i - 1].index) {
      std::ostringstream os;
      os << "frame stream: index " << frames[i].index << " at position " << i
         << " does not increase";
      throw DomainError(os.str());
    }
    if (frames[i].timestamp <= frames[i - 1].timestamp) {
      std::ostringstream os;
      os << "frame stream: timestamp " << frames[i].timestamp
         << " at position " << i << " does not increase";
      throw DomainError(os.str());
    }
  }
}

std::string to_string(SegmentDecision d) {
  return d == SegmentDecision::BearDetected ? "BearDetected" : "NoBear";
}

}  // namespace bearguard
