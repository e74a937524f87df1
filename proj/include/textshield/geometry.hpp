#pragma once

#include "textshield/types.hpp"

namespace textshield {

struct GeomScalars {
  double iou = 0;
  double diou = 0;
  double center_distance = 0;
  double enclosing_diagonal = 0;
};

BBox enclosing_box(const BBox& a, const BBox& b);
double intersection_area(const BBox& a, const BBox& b);

/// Touching or disjoint boxes give 0.
double iou(const BBox& a, const BBox& b);

/// iou - rho^2 / c^2 with rho the centre distance and c the diagonal of the
/// smallest enclosing box. Range (-1, 1]; not clamped.
double diou(const BBox& a, const BBox& b);

GeomScalars box_scalars(const BBox& a, const BBox& b);

}  // namespace textshield
