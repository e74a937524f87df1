#include "textshield/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace textshield {

BBox enclosing_box(const BBox& a, const BBox& b) {
  return BBox{std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0.0;
  return w * h;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

GeomScalars box_scalars(const BBox& a, const BBox& b) {
  GeomScalars s;
  s.iou = iou(a, b);
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  const double rho2 = dx * dx + dy * dy;
  const BBox c = enclosing_box(a, b);
  const double c2 = c.width() * c.width() + c.height() * c.height();
  s.center_distance = std::sqrt(rho2);
  s.enclosing_diagonal = std::sqrt(c2);
  s.diou = s.iou - rho2 / c2;
  return s;
}

double diou(const BBox& a, const BBox& b) { return box_scalars(a, b).diou; }

}  // namespace textshield
