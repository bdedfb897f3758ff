#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "bearguard/annotations.hpp"
#include "bearguard/controller.hpp"
#include "bearguard/dataset_eval.hpp"
#include "bearguard/segment_filter.hpp"
#include "bearguard/types.hpp"

namespace bearguard {

// Camera at the origin of a flat ground plane, facing +x.
struct CameraSpec {
  double horizontal_fov_deg = 90.0;
  double vertical_fov_deg = 60.0;
  double max_detection_range_m = 25.0;
  double frame_rate_fps = 10.0;

  void validate() const;
};

struct Waypoint {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Ground-plane path of one entity. Position is linearly interpolated between
// waypoints and clamped to the endpoints outside their span.
struct EntityTrack {
  ObjectClass entity_class = ObjectClass::Other;
  std::vector<Waypoint> waypoints;
  double size_m = 1.0;  // nominal body length, drives the projected box

  void validate() const;
  // (x, y) position at time t.
  std::pair<double, double> position_at(double t) const;
};

struct ConfidenceParams {
  double mean = 0.85;
  double spread = 0.1;
};

// Stochastic model of the detector's per-frame behaviour.
struct DetectorProfile {
  // Probability per frame that a visible entity yields a correct-class
  // detection (scaled by night_degradation at night).
  double true_positive_rate = 0.95;
  // Per class: probability per frame that a visible entity of that class
  // yields a bear detection at or above confusion_conf_min.
  std::map<ObjectClass, double> confusion;
  // Confidence distribution of correct-class detections, truncated to [0,1].
  std::map<ObjectClass, ConfidenceParams> confidence;
  // Misfire confidences are uniform in [confusion_conf_min, 1]; keep this at
  // or above the filter threshold so a misfire always flips its segment.
  double confusion_conf_min = 0.70;
  double night_degradation = 1.0;  // multiplies TPR at night, in (0, 1]
  std::uint64_t seed = 0;

  void validate() const;
  ConfidenceParams confidence_for(ObjectClass c) const;
};

struct Scenario {
  CameraSpec camera;
  std::vector<EntityTrack> tracks;
  double duration_s = 0.0;
  Lighting lighting = Lighting::Day;
  DetectorProfile detector;

  void validate() const;
  std::size_t frame_count() const;
};

// True when the position lies within max_detection_range of the camera and
// within half the horizontal FoV of the +x axis (both bounds inclusive).
bool visible(const CameraSpec& camera, double x, double y);

// Pinhole projection of an entity (modeled as a sphere of diameter size_m)
// into the 224x224 detection frame, clamped to the frame. Callers must have
// checked visibility.
BoundingBox project_bbox(const CameraSpec& camera, double x, double y,
                         double size_m);

// Generates the frame stream one frame at a time; render_frames drains it.
// Frames are at times i / frame_rate. Detections are capped at the per-frame
// box limit in track order.
class FrameRenderer {
 public:
  explicit FrameRenderer(const Scenario& scenario);

  bool done() const { return next_index_ >= total_frames_; }
  Frame next();

 private:
  const Scenario& scenario_;
  std::mt19937_64 rng_;
  std::size_t next_index_ = 0;
  std::size_t total_frames_ = 0;
};

std::vector<Frame> render_frames(const Scenario& scenario);

// Ground truth the renderer's detections are judged against: every visible
// entity, with its projected box at confidence 1. Purely geometric, no RNG.
std::vector<FrameAnnotations> ground_truth_frames(const Scenario& scenario);

struct PipelineResult {
  std::vector<Segment> segments;
  std::vector<EventRecord> events;  // SegmentDecision + controller events
  DatasetEvalResult evaluation;
};

// The full chain: render -> segment -> controller -> metrics, all driven by
// the scenario seed. Deterministic end to end.
PipelineResult run_pipeline(const Scenario& scenario,
                            const FilterConfig& filter_cfg,
                            const ControllerConfig& ctrl_cfg);

// Streams tumbling segments through `fn(segment)` without materializing the
// whole frame vector; used for long Monte-Carlo runs. Produces exactly the
// segments segment_stream would.
template <typename Fn>
void for_each_tumbling_segment(const Scenario& scenario,
                               const FilterConfig& cfg, Fn&& fn) {
  cfg.validate();
  FrameRenderer renderer(scenario);
  std::vector<Frame> window;
  window.reserve(static_cast<std::size_t>(cfg.segment_length));
  while (!renderer.done()) {
    window.push_back(renderer.next());
    if (static_cast<int>(window.size()) == cfg.segment_length) {
      fn(classify_segment(std::move(window), cfg));
      window.clear();
    }
  }
}

}  // namespace bearguard
