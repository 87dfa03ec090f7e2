#include "swnet/spatial_grid.h"

#include <algorithm>
#include <cmath>

#include "swnet/errors.h"

namespace swnet {

SpatialGrid::SpatialGrid(std::span<const Point> points, double side, double cell) : cell_(cell) {
  if (!(cell > 0.0) || !(side > 0.0)) throw ValidationError("grid needs positive side and cell");
  cells_ = std::max(1, static_cast<int>(std::ceil(side / cell)));
  const auto ncell = static_cast<std::size_t>(cells_) * cells_;
  start_.assign(ncell + 1, 0);
  std::vector<std::uint32_t> bucket(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto c = static_cast<std::size_t>(cell_of(points[i].y)) * cells_ + cell_of(points[i].x);
    bucket[i] = static_cast<std::uint32_t>(c);
    ++start_[c + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
  order_.resize(points.size());
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    order_[fill[bucket[i]]++] = static_cast<std::uint32_t>(i);
  }
}

int SpatialGrid::cell_of(double v) const {
  const int c = static_cast<int>(std::floor(v / cell_));
  return std::clamp(c, 0, cells_ - 1);
}

}  // namespace swnet
