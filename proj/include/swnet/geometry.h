#pragma once

#include <cmath>
#include <cstddef>

#include "swnet/errors.h"
#include "swnet/rng.h"

namespace swnet {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double dist(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

// The square [0, side] x [0, side].
class Domain {
 public:
  explicit Domain(double side);

  double side() const { return side_; }
  double area() const { return side_ * side_; }
  Point center() const { return {side_ / 2, side_ / 2}; }
  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= side_ && p.y >= 0.0 && p.y <= side_;
  }

 private:
  double side_;
};

// Closed axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  bool within(const Domain& dom) const {
    return x0 >= 0.0 && y0 >= 0.0 && x1 <= dom.side() && y1 <= dom.side();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

// The k with k*r <= d < (k+1)*r. Throws ValidationError if r <= 0 or d < 0.
int annulus_index(double d, double r);

template <std::uniform_random_bit_generator G>
Point sample_uniform_domain(G& gen, const Domain& dom) {
  const double u = unit_uniform(gen);
  const double v = unit_uniform(gen);
  return {u * dom.side(), v * dom.side()};
}

// Throws ValidationError when the open ball B(center, radius) covers the square.
void check_ball_exclusion(const Domain& dom, Point center, double radius);

// Uniform on dom minus the open ball B(center, radius), by rejection from the
// square.
template <std::uniform_random_bit_generator G>
Point sample_uniform_minus_ball(G& gen, const Domain& dom, Point center, double radius) {
  check_ball_exclusion(dom, center, radius);
  for (;;) {
    const Point p = sample_uniform_domain(gen, dom);
    if (dist(p, center) >= radius) return p;
  }
}

// area(rect - B(center, radius)) by midpoint quadrature over the part of rect
// that can meet the ball. `cell` is the grid spacing; 0 selects radius / 200.
double region_area_minus_ball(const Domain& dom, const Rect& rect, Point center,
                              double radius, double cell = 0.0);

}  // namespace swnet
