#include "swnet/geometry.h"

#include <algorithm>
#include <array>
#include <string>

namespace swnet {

Domain::Domain(double side) : side_(side) {
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw ValidationError("domain side must be positive and finite, got " + std::to_string(side));
  }
}

int annulus_index(double d, double r) {
  if (!(r > 0.0)) throw ValidationError("annulus width r must be positive");
  if (!(d >= 0.0)) throw ValidationError("distance must be non-negative");
  return static_cast<int>(std::floor(d / r));
}

void check_ball_exclusion(const Domain& dom, Point center, double radius) {
  if (!(radius >= 0.0)) throw ValidationError("exclusion radius must be non-negative");
  const std::array<Point, 4> corners = {
      Point{0.0, 0.0}, Point{dom.side(), 0.0}, Point{0.0, dom.side()},
      Point{dom.side(), dom.side()}};
  // The ball is convex, so it covers the square iff it holds every corner.
  const bool covers = std::all_of(corners.begin(), corners.end(),
                                  [&](Point c) { return dist(c, center) < radius; });
  if (covers) throw ValidationError("exclusion ball covers the whole domain");
}

double region_area_minus_ball(const Domain& dom, const Rect& rect, Point center,
                              double radius, double cell) {
  if (!rect.within(dom)) throw ValidationError("rectangle must lie inside the domain");
  if (!(radius >= 0.0)) throw ValidationError("exclusion radius must be non-negative");
  const double full = rect.area();
  if (radius == 0.0) return full;
  if (cell <= 0.0) cell = radius / 200.0;
  const std::array<Point, 4> corners = {Point{rect.x0, rect.y0}, Point{rect.x1, rect.y0},
                                        Point{rect.x0, rect.y1}, Point{rect.x1, rect.y1}};
  if (std::all_of(corners.begin(), corners.end(), [&](Point c) { return dist(c, center) <= radius; })) {
    return 0.0;
  }

  // Only the overlap of rect with the ball's bounding box can lose area.
  const double bx0 = std::max(rect.x0, center.x - radius);
  const double bx1 = std::min(rect.x1, center.x + radius);
  const double by0 = std::max(rect.y0, center.y - radius);
  const double by1 = std::min(rect.y1, center.y + radius);
  if (bx0 >= bx1 || by0 >= by1) return full;

  const auto nx = static_cast<std::size_t>(std::ceil((bx1 - bx0) / cell));
  const auto ny = static_cast<std::size_t>(std::ceil((by1 - by0) / cell));
  const double hx = (bx1 - bx0) / static_cast<double>(nx);
  const double hy = (by1 - by0) / static_cast<double>(ny);
  const double r2 = radius * radius;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    const double dx = bx0 + (static_cast<double>(i) + 0.5) * hx - center.x;
    for (std::size_t j = 0; j < ny; ++j) {
      const double dy = by0 + (static_cast<double>(j) + 0.5) * hy - center.y;
      if (dx * dx + dy * dy < r2) ++inside;
    }
  }
  return full - static_cast<double>(inside) * hx * hy;
}

}  // namespace swnet
