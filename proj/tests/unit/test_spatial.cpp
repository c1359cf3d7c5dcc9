#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hcn/rng.hpp"
#include "hcn/spatial.hpp"

namespace {

hcn::NearestGrid::Hit brute_nearest(const std::vector<hcn::Point2>& pts,
                                    const hcn::Point2& q, double side,
                                    bool wrap) {
  hcn::NearestGrid::Hit best;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d2 = hcn::distance_sq(q, pts[i], side, wrap);
    if (d2 < best.dist_sq) {
      best.dist_sq = d2;
      best.index = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("toroidal distances wrap across the window edge") {
  const double side = 10.0;
  const hcn::Point2 a{0.5, 5.0};
  const hcn::Point2 b{9.5, 5.0};
  CHECK(hcn::distance_sq(a, b, side, true) == Catch::Approx(1.0));
  CHECK(hcn::distance_sq(a, b, side, false) == Catch::Approx(81.0));

  const hcn::Point2 c{0.2, 0.2};
  const hcn::Point2 d{9.9, 9.9};
  CHECK(hcn::distance_sq(c, d, side, true) == Catch::Approx(0.09 + 0.09));
}

TEST_CASE("grid nearest agrees with brute force", "[property]") {
  hcn::RngStream rng(301, 0, 0);
  for (bool wrap : {true, false}) {
    for (int round = 0; round < 20; ++round) {
      const double side = rng.uniform(1.0, 10.0);
      const int n = 1 + static_cast<int>(rng.uniform_index(300));
      std::vector<hcn::Point2> pts(n);
      for (auto& pt : pts) {
        pt.x = rng.uniform(0.0, side);
        pt.y = rng.uniform(0.0, side);
      }
      const hcn::NearestGrid grid(pts, side, wrap);
      for (int qi = 0; qi < 50; ++qi) {
        const hcn::Point2 q{rng.uniform(0.0, side), rng.uniform(0.0, side)};
        const auto fast = grid.nearest(q);
        const auto slow = brute_nearest(pts, q, side, wrap);
        CHECK(fast.index == slow.index);
        CHECK(fast.dist_sq == Catch::Approx(slow.dist_sq).margin(0.0));
      }
    }
  }
}

TEST_CASE("grid handles degenerate inputs") {
  const std::vector<hcn::Point2> none;
  const hcn::NearestGrid empty(none, 5.0, true);
  CHECK(empty.empty());
  CHECK(empty.nearest(hcn::Point2{1.0, 1.0}).index == -1);

  const std::vector<hcn::Point2> one{{2.0, 3.0}};
  const hcn::NearestGrid single(one, 5.0, true);
  const auto hit = single.nearest(hcn::Point2{4.9, 3.0});
  CHECK(hit.index == 0);
  CHECK(hit.dist_sq == Catch::Approx(2.1 * 2.1).epsilon(1e-12));

  // clustered points in one corner still resolve across the wrap
  std::vector<hcn::Point2> cluster;
  for (int i = 0; i < 64; ++i) {
    cluster.push_back(hcn::Point2{0.01 + 0.001 * i, 0.02});
  }
  const hcn::NearestGrid grid(cluster, 8.0, true);
  const auto far = grid.nearest(hcn::Point2{7.9, 0.02});
  CHECK(far.index == 0);
}
