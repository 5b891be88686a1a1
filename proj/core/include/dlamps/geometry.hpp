#pragma once

#include "dlamps/errors.hpp"

namespace dlamps {

/// Physical viewing setup: observer distance and the pixel pitch of the
/// display or print carrying the target image.
struct ViewingGeometry {
  double distance_cm;
  double pixel_pitch_cm;

  ViewingGeometry(double distance_cm, double pixel_pitch_cm);
};

/// Frame count and rate of a generated sequence.
struct SequenceSpec {
  int frame_count;
  double fps;

  SequenceSpec(int frame_count, double fps);
};

double cm_to_px(double length_cm, const ViewingGeometry& geom);
double px_to_cm(double length_px, const ViewingGeometry& geom);

/// Angular extent 2*atan(extent / (2*distance)), in degrees.
double visual_angle_deg(double extent_cm, const ViewingGeometry& geom);

}  // namespace dlamps
