#include "bearguard/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bearguard/random.hpp"

namespace bearguard {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void CameraSpec::validate() const {
  if (!(horizontal_fov_deg > 0.0) || horizontal_fov_deg >= 180.0 ||
      !(vertical_fov_deg > 0.0) || vertical_fov_deg >= 180.0) {
    std::ostringstream os;
    os << "camera: fov " << horizontal_fov_deg << "x" << vertical_fov_deg
       << " degrees outside (0, 180)";
    throw DomainError(os.str());
  }
  if (max_detection_range_m <= 0.0) {
    throw DomainError("camera: max detection range must be positive");
  }
  if (frame_rate_fps <= 0.0) {
    throw DomainError("camera: frame rate must be positive");
  }
}

void EntityTrack::validate() const {
  if (waypoints.empty()) {
    throw DomainError("track: needs at least one waypoint");
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i].time <= waypoints[i - 1].time) {
      std::ostringstream os;
      os << "track: waypoint time " << waypoints[i].time << " at position "
         << i << " does not increase";
      throw DomainError(os.str());
    }
  }
  if (size_m <= 0.0) {
    throw DomainError("track: entity size must be positive");
  }
}

std::pair<double, double> EntityTrack::position_at(double t) const {
  if (t <= waypoints.front().time) {
    return {waypoints.front().x, waypoints.front().y};
  }
  if (t >= waypoints.back().time) {
    return {waypoints.back().x, waypoints.back().y};
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (t <= waypoints[i].time) {
      const Waypoint& a = waypoints[i - 1];
      const Waypoint& b = waypoints[i];
      double u = (t - a.time) / (b.time - a.time);
      return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
    }
  }
  return {waypoints.back().x, waypoints.back().y};
}

void DetectorProfile::validate() const {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0) || p > 1.0) {
      std::ostringstream os;
      os << "detector profile: " << name << " = " << p << " outside [0, 1]";
      throw DomainError(os.str());
    }
  };
  check_prob(true_positive_rate, "true_positive_rate");
  for (const auto& [cls, p] : confusion) {
    check_prob(p, ("confusion[" + to_string(cls) + "]").c_str());
  }
  for (const auto& [cls, params] : confidence) {
    check_prob(params.mean, ("confidence mean for " + to_string(cls)).c_str());
    if (params.spread < 0.0) {
      throw DomainError("detector profile: confidence spread must be >= 0");
    }
  }
  check_prob(confusion_conf_min, "confusion_conf_min");
  if (!(night_degradation > 0.0) || night_degradation > 1.0) {
    std::ostringstream os;
    os << "detector profile: night_degradation " << night_degradation
       << " outside (0, 1]";
    throw DomainError(os.str());
  }
}

ConfidenceParams DetectorProfile::confidence_for(ObjectClass c) const {
  auto it = confidence.find(c);
  return it == confidence.end() ? ConfidenceParams{} : it->second;
}

void Scenario::validate() const {
  camera.validate();
  detector.validate();
  if (duration_s <= 0.0) {
    throw DomainError("scenario: duration must be positive");
  }
  for (const EntityTrack& t : tracks) {
    t.validate();
    for (const Waypoint& w : t.waypoints) {
      if (w.time < 0.0 || w.time > duration_s) {
        std::ostringstream os;
        os << "scenario: waypoint at t=" << w.time
           << " outside [0, " << duration_s << "]";
        throw DomainError(os.str());
      }
    }
  }
}

std::size_t Scenario::frame_count() const {
  return static_cast<std::size_t>(
      std::llround(camera.frame_rate_fps * duration_s));
}

bool visible(const CameraSpec& camera, double x, double y) {
  double range = std::hypot(x, y);
  if (range > camera.max_detection_range_m) return false;
  double azimuth_deg = std::atan2(y, x) * 180.0 / kPi;
  return std::abs(azimuth_deg) <= camera.horizontal_fov_deg / 2.0;
}

BoundingBox project_bbox(const CameraSpec& camera, double x, double y,
                         double size_m) {
  double range = std::hypot(x, y);
  // Angular diameter of a sphere of diameter size_m at this range.
  double angular_deg =
      range == 0.0 ? 180.0
                   : 2.0 * std::atan(size_m / (2.0 * range)) * 180.0 / kPi;

  double w = angular_deg / camera.horizontal_fov_deg * kDetectionFrameSize;
  double h = angular_deg / camera.vertical_fov_deg * kDetectionFrameSize;
  w = std::clamp(w, 1.0, kDetectionFrameSize);
  h = std::clamp(h, 1.0, kDetectionFrameSize);

  // Positive azimuth (toward +y) lands left of frame center.
  double azimuth_deg = std::atan2(y, x) * 180.0 / kPi;
  double center_u = kDetectionFrameSize / 2.0 *
                    (1.0 - azimuth_deg / (camera.horizontal_fov_deg / 2.0));
  double center_v = kDetectionFrameSize / 2.0;  // entities sit on the ground plane

  double bx = std::clamp(center_u - w / 2.0, 0.0, kDetectionFrameSize - w);
  double by = std::clamp(center_v - h / 2.0, 0.0, kDetectionFrameSize - h);
  return BoundingBox(bx, by, w, h);
}

FrameRenderer::FrameRenderer(const Scenario& scenario)
    : scenario_(scenario), rng_(scenario.detector.seed) {
  scenario.validate();
  total_frames_ = scenario.frame_count();
}

Frame FrameRenderer::next() {
  const std::size_t i = next_index_++;
  const double t = static_cast<double>(i) / scenario_.camera.frame_rate_fps;
  const DetectorProfile& det = scenario_.detector;
  const bool night = scenario_.lighting == Lighting::Night;
  const double tpr =
      det.true_positive_rate * (night ? det.night_degradation : 1.0);

  std::vector<Detection> detections;
  for (const EntityTrack& track : scenario_.tracks) {
    auto [x, y] = track.position_at(t);
    if (!visible(scenario_.camera, x, y)) continue;
    BoundingBox box = project_bbox(scenario_.camera, x, y, track.size_m);

    if (bernoulli(rng_, tpr)) {
      ConfidenceParams params = det.confidence_for(track.entity_class);
      double conf = truncated_normal01(rng_, params.mean, params.spread);
      if (static_cast<int>(detections.size()) < kMaxDetectionsPerFrame) {
        detections.emplace_back(track.entity_class, conf, box);
      }
    }
    auto confusion_it = det.confusion.find(track.entity_class);
    if (confusion_it != det.confusion.end() &&
        bernoulli(rng_, confusion_it->second)) {
      double conf = uniform_in(rng_, det.confusion_conf_min, 1.0);
      if (static_cast<int>(detections.size()) < kMaxDetectionsPerFrame) {
        detections.emplace_back(ObjectClass::Bear, conf, box);
      }
    }
  }
  return Frame(static_cast<std::int64_t>(i), t, std::move(detections),
               scenario_.lighting);
}

std::vector<Frame> render_frames(const Scenario& scenario) {
  FrameRenderer renderer(scenario);
  std::vector<Frame> frames;
  frames.reserve(scenario.frame_count());
  while (!renderer.done()) frames.push_back(renderer.next());
  return frames;
}

std::vector<FrameAnnotations> ground_truth_frames(const Scenario& scenario) {
  scenario.validate();
  std::vector<FrameAnnotations> out;
  const std::size_t n = scenario.frame_count();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / scenario.camera.frame_rate_fps;
    FrameAnnotations fa;
    fa.frame_index = static_cast<std::int64_t>(i);
    for (const EntityTrack& track : scenario.tracks) {
      auto [x, y] = track.position_at(t);
      if (!visible(scenario.camera, x, y)) continue;
      fa.detections.emplace_back(
          track.entity_class, 1.0,
          project_bbox(scenario.camera, x, y, track.size_m));
    }
    if (!fa.detections.empty()) out.push_back(std::move(fa));
  }
  return out;
}

PipelineResult run_pipeline(const Scenario& scenario,
                            const FilterConfig& filter_cfg,
                            const ControllerConfig& ctrl_cfg) {
  filter_cfg.validate();
  ctrl_cfg.validate();

  PipelineResult result;
  std::vector<Frame> frames = render_frames(scenario);
  result.segments = segment_stream(frames, filter_cfg);

  ControllerState state = ControllerState::initial(ctrl_cfg);
  std::size_t segment_index = 0;
  for (const Segment& seg : result.segments) {
    const double now = seg.end_time();
    const bool human =
        segment_has_human(seg, ctrl_cfg.human_confidence_threshold);

    nlohmann::ordered_json payload;
    payload["segment"] = segment_index;
    payload["decision"] = to_string(seg.decision);
    payload["max_bear_confidence"] = seg.max_bear_confidence;
    payload["human_present"] = human;
    result.events.emplace_back(ctrl_cfg.device_id, now,
                               EventKind::SegmentDecision, std::move(payload));

    auto [next, event] = step(state, seg, human, now, ctrl_cfg);
    state = std::move(next);
    if (event) result.events.push_back(std::move(*event));
    ++segment_index;
  }

  std::vector<FrameAnnotations> preds;
  for (const Frame& f : frames) {
    if (f.detections.empty()) continue;
    preds.push_back(FrameAnnotations{f.index, f.detections});
  }
  EvalOptions options;
  options.filter = filter_cfg;
  result.evaluation =
      evaluate_dataset(ground_truth_frames(scenario), preds, options);
  return result;
}

}  // namespace bearguard
