#pragma once

// 2-D geometry on a square observation window, with either toroidal
// wrap-around distances (the unbiased finite surrogate of an infinite plane)
// or plain Euclidean distances for guard-zone measurements, plus a uniform
// grid index for nearest-neighbor queries.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace hcn {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryMode { torus, guard_zone };

inline double axis_delta(double a, double b, double side, bool wrap) {
  double d = std::fabs(a - b);
  if (wrap && d > 0.5 * side) {
    d = side - d;
  }
  return d;
}

inline double distance_sq(const Point2& a, const Point2& b, double side,
                          bool wrap) {
  const double dx = axis_delta(a.x, b.x, side, wrap);
  const double dy = axis_delta(a.y, b.y, side, wrap);
  return dx * dx + dy * dy;
}

// Uniform bucket grid over the window; nearest() expands cell rings around
// the query until no unscanned cell can beat the best hit.
class NearestGrid {
 public:
  NearestGrid(const std::vector<Point2>& points, double side, bool wrap)
      : points_(&points), side_(side), wrap_(wrap) {
    const std::size_t n = points.size();
    cells_per_side_ = 1;
    if (n > 1) {
      cells_per_side_ = static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0));
      if (cells_per_side_ < 1) cells_per_side_ = 1;
    }
    cell_width_ = side_ / cells_per_side_;
    buckets_.assign(static_cast<std::size_t>(cells_per_side_) * cells_per_side_, {});
    for (std::size_t i = 0; i < n; ++i) {
      buckets_[bucket_index(cell_coord(points[i].x), cell_coord(points[i].y))]
          .push_back(static_cast<int>(i));
    }
  }

  struct Hit {
    int index = -1;
    double dist_sq = std::numeric_limits<double>::infinity();
  };

  bool empty() const { return points_->empty(); }

  Hit nearest(const Point2& q) const {
    Hit best;
    if (points_->empty()) {
      return best;
    }
    const int cx = cell_coord(q.x);
    const int cy = cell_coord(q.y);
    const int max_ring = wrap_ ? (cells_per_side_ + 1) / 2 : cells_per_side_ - 1;
    for (int ring = 0; ring <= max_ring; ++ring) {
      scan_ring(q, cx, cy, ring, best);
      // points in rings beyond `ring` are at least ring*cell_width_ away
      const double safe = static_cast<double>(ring) * cell_width_;
      if (best.index >= 0 && best.dist_sq <= safe * safe) {
        break;
      }
    }
    return best;
  }

 private:
  int cell_coord(double v) const {
    int c = static_cast<int>(v / cell_width_);
    if (c < 0) c = 0;
    if (c >= cells_per_side_) c = cells_per_side_ - 1;
    return c;
  }

  std::size_t bucket_index(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * cells_per_side_ + cx;
  }

  void scan_bucket(const Point2& q, int cx, int cy, Hit& best) const {
    for (int idx : buckets_[bucket_index(cx, cy)]) {
      const double d2 = distance_sq(q, (*points_)[static_cast<std::size_t>(idx)],
                                    side_, wrap_);
      if (d2 < best.dist_sq) {
        best.dist_sq = d2;
        best.index = idx;
      }
    }
  }

  void scan_ring(const Point2& q, int cx, int cy, int ring, Hit& best) const {
    if (ring == 0) {
      scan_bucket(q, cx, cy, best);
      return;
    }
    for (int dx = -ring; dx <= ring; ++dx) {
      for (int dy = -ring; dy <= ring; ++dy) {
        if (std::abs(dx) != ring && std::abs(dy) != ring) {
          continue;
        }
        int nx = cx + dx;
        int ny = cy + dy;
        if (wrap_) {
          nx = ((nx % cells_per_side_) + cells_per_side_) % cells_per_side_;
          ny = ((ny % cells_per_side_) + cells_per_side_) % cells_per_side_;
        } else if (nx < 0 || ny < 0 || nx >= cells_per_side_ ||
                   ny >= cells_per_side_) {
          continue;
        }
        scan_bucket(q, nx, ny, best);
      }
    }
  }

  const std::vector<Point2>* points_;
  double side_;
  bool wrap_;
  int cells_per_side_ = 1;
  double cell_width_ = 0.0;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace hcn
