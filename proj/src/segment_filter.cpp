#include "bearguard/segment_filter.hpp"

#include <sstream>

namespace bearguard {

std::string to_string(Windowing w) {
  return w == Windowing::Tumbling ? "Tumbling" : "Sliding";
}

Windowing windowing_from_string(const std::string& name) {
  if (name == "Tumbling") return Windowing::Tumbling;
  if (name == "Sliding") return Windowing::Sliding;
  throw ParseError("unknown windowing \"" + name +
                   "\" (expected Tumbling or Sliding)");
}

void FilterConfig::validate() const {
  if (segment_length < 1) {
    throw DomainError("filter config: segment_length must be >= 1");
  }
  if (!(bear_threshold > 0.0) || bear_threshold > 1.0) {
    std::ostringstream os;
    os << "filter config: bear_threshold " << bear_threshold
       << " outside (0, 1]";
    throw DomainError(os.str());
  }
}

Segment classify_segment(std::vector<Frame> frames, const FilterConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(frames.size()) != cfg.segment_length) {
    std::ostringstream os;
    os << "classify_segment: got " << frames.size() << " frames, expected "
       << cfg.segment_length;
    throw DomainError(os.str());
  }
  double max_conf = 0.0;
  for (const Frame& f : frames) {
    for (const Detection& d : f.detections) {
      if (d.object_class == ObjectClass::Bear && d.confidence > max_conf) {
        max_conf = d.confidence;
      }
    }
  }
  Segment s;
  s.frames = std::move(frames);
  s.max_bear_confidence = max_conf;
  s.decision = max_conf >= cfg.bear_threshold ? SegmentDecision::BearDetected
                                              : SegmentDecision::NoBear;
  return s;
}

std::vector<Segment> segment_stream(const std::vector<Frame>& frames,
                                    const FilterConfig& cfg) {
  cfg.validate();
  check_frame_stream(frames);
  const std::size_t len = static_cast<std::size_t>(cfg.segment_length);
  std::vector<Segment> segments;
  if (frames.size() < len) return segments;

  if (cfg.windowing == Windowing::Tumbling) {
    segments.reserve(frames.size() / len);
    for (std::size_t start = 0; start + len <= frames.size(); start += len) {
      segments.push_back(classify_segment(
          std::vector<Frame>(frames.begin() + static_cast<std::ptrdiff_t>(start),
                             frames.begin() + static_cast<std::ptrdiff_t>(start + len)),
          cfg));
    }
  } else {
    segments.reserve(frames.size() - len + 1);
    for (std::size_t start = 0; start + len <= frames.size(); ++start) {
      segments.push_back(classify_segment(
          std::vector<Frame>(frames.begin() + static_cast<std::ptrdiff_t>(start),
                             frames.begin() + static_cast<std::ptrdiff_t>(start + len)),
          cfg));
    }
  }
  return segments;
}

}  // namespace bearguard
