#include "dlamps/geometry.hpp"

#include <cmath>

namespace dlamps {

ViewingGeometry::ViewingGeometry(double distance_cm_, double pixel_pitch_cm_)
    : distance_cm(distance_cm_), pixel_pitch_cm(pixel_pitch_cm_) {
  if (!(distance_cm > 0.0) || !std::isfinite(distance_cm)) {
    throw ConfigError("viewing distance_cm must be > 0");
  }
  if (!(pixel_pitch_cm > 0.0) || !std::isfinite(pixel_pitch_cm)) {
    throw ConfigError("pixel_pitch_cm must be > 0");
  }
}

SequenceSpec::SequenceSpec(int frame_count_, double fps_)
    : frame_count(frame_count_), fps(fps_) {
  if (frame_count < 1) {
    throw ConfigError("sequence frame_count must be >= 1");
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw ConfigError("sequence fps must be > 0");
  }
}

double cm_to_px(double length_cm, const ViewingGeometry& geom) {
  return length_cm / geom.pixel_pitch_cm;
}

double px_to_cm(double length_px, const ViewingGeometry& geom) {
  return length_px * geom.pixel_pitch_cm;
}

double visual_angle_deg(double extent_cm, const ViewingGeometry& geom) {
  const double radians = 2.0 * std::atan(extent_cm / (2.0 * geom.distance_cm));
  return radians * (180.0 / 3.14159265358979323846);
}

}  // namespace dlamps
