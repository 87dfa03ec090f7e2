#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swnet/geometry.h"

namespace swnet {

// Bucket grid over points in a square domain. Cells are `cell` wide, so a
// query of radius <= cell touches at most 3x3 cells.
class SpatialGrid {
 public:
  SpatialGrid() = default;
  SpatialGrid(std::span<const Point> points, double side, double cell);

  // Calls fn(index) for every point p with dist(p, center) < radius.
  // Requires radius <= cell.
  template <typename Fn>
  void for_each_within(std::span<const Point> points, Point center, double radius, Fn&& fn) const {
    if (cells_ == 0) return;
    const int cx = cell_of(center.x);
    const int cy = cell_of(center.y);
    for (int gy = cy - 1; gy <= cy + 1; ++gy) {
      if (gy < 0 || gy >= cells_) continue;
      for (int gx = cx - 1; gx <= cx + 1; ++gx) {
        if (gx < 0 || gx >= cells_) continue;
        const auto c = static_cast<std::size_t>(gy) * cells_ + static_cast<std::size_t>(gx);
        for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
          const std::uint32_t idx = order_[k];
          if (dist(points[idx], center) < radius) fn(idx);
        }
      }
    }
  }

  double cell() const { return cell_; }
  int cells_per_side() const { return cells_; }

 private:
  int cell_of(double v) const;

  double cell_ = 0.0;
  int cells_ = 0;
  std::vector<std::uint32_t> start_;  // CSR offsets, size cells^2 + 1
  std::vector<std::uint32_t> order_;  // point indices grouped by cell
};

}  // namespace swnet
