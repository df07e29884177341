#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "hetnet/errors.hpp"
#include "hetnet/geometry.hpp"

using namespace hetnet;

namespace {

PointSet make_points(std::initializer_list<std::pair<double, double>> pts, double side) {
  PointSet out{Eigen::Matrix2Xd(2, static_cast<Index>(pts.size())), 1.0, Window(side)};
  Index i = 0;
  for (auto [x, y] : pts) out.coords.col(i++) = Eigen::Vector2d(x, y);
  return out;
}

// Exhaustive oracle written against the definition of the toroidal metric.
std::vector<std::pair<double, Index>> brute_sorted(const PointSet& pts,
                                                   const Eigen::Vector2d& q) {
  const double side = pts.window.side();
  std::vector<std::pair<double, Index>> all;
  for (Index i = 0; i < pts.size(); ++i) {
    double best = INFINITY;
    for (int sx = -1; sx <= 1; ++sx) {
      for (int sy = -1; sy <= 1; ++sy) {
        const double dx = pts.coords(0, i) + sx * side - q.x();
        const double dy = pts.coords(1, i) + sy * side - q.y();
        best = std::min(best, std::hypot(dx, dy));
      }
    }
    all.emplace_back(best, i);
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST_CASE("window rejects non-positive sides") {
  CHECK_THROWS_AS(Window(0.0), ParameterError);
  CHECK_THROWS_AS(Window(-3.0), ParameterError);
  CHECK(Window(100.0).area() == doctest::Approx(1e4));
}

TEST_CASE("sample_ppp rejects bad intensity") {
  Rng rng(1);
  CHECK_THROWS_AS(sample_ppp(0.0, Window(100), rng), ParameterError);
  CHECK_THROWS_AS(sample_ppp(-0.1, Window(100), rng), ParameterError);
}

TEST_CASE("sample_ppp counts are Poisson and points stay in the window") {
  Rng rng(2024);
  const Window w(100.0);
  const int draws = 10000;
  double sum = 0.0, sum_sq = 0.0;
  bool inside = true;
  for (int i = 0; i < draws; ++i) {
    const PointSet p = sample_ppp(0.01, w, rng);
    const double n = static_cast<double>(p.size());
    sum += n;
    sum_sq += n * n;
    inside = inside && (p.coords.array() >= 0.0).all() && (p.coords.array() < 100.0).all();
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  CHECK(inside);
  CHECK(std::abs(mean - 100.0) <= 4.0 * std::sqrt(100.0 / draws));
  CHECK(var / mean >= 0.9);
  CHECK(var / mean <= 1.1);
}

TEST_CASE("sample_ppp positions pass a 4x4 chi-square uniformity test") {
  Rng rng(77);
  const Window w(100.0);
  std::array<double, 16> counts{};
  double total = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const PointSet p = sample_ppp(0.01, w, rng);
    for (Index i = 0; i < p.size(); ++i) {
      const int cx = static_cast<int>(p.coords(0, i) / 25.0);
      const int cy = static_cast<int>(p.coords(1, i) / 25.0);
      counts[cy * 4 + cx] += 1.0;
      total += 1.0;
    }
  }
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - total / 16) * (c - total / 16) / (total / 16);
  // upper 1e-3 quantile of chi-square with 15 degrees of freedom
  CHECK(chi2 < 37.697);
}

TEST_CASE("toroidal distance wraps and is a metric") {
  const Eigen::Vector2d a(0, 0), b(9, 0);
  CHECK(toroidal_distance(a, b, 10.0) == doctest::Approx(1.0));
  CHECK(toroidal_distance(Eigen::Vector2d(0.5, 9.5), Eigen::Vector2d(9.5, 0.5), 10.0) ==
        doctest::Approx(std::sqrt(2.0)));

  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d p(u(rng), u(rng)), q(u(rng), u(rng)), r(u(rng), u(rng));
    const double pq = toroidal_distance(p, q, 10.0);
    CHECK(pq == doctest::Approx(toroidal_distance(q, p, 10.0)));
    CHECK(pq <= toroidal_distance(p, r, 10.0) + toroidal_distance(r, q, 10.0) + 1e-12);
    CHECK(pq <= std::sqrt(50.0) + 1e-12);
  }
}

TEST_CASE("toroidal primitives work for float scalars") {
  const Eigen::Vector2f a(0.0f, 0.0f), b(9.0f, 0.0f);
  CHECK(toroidal_distance(a, b, 10.0f) == doctest::Approx(1.0));
}

TEST_CASE("nearest_k examples") {
  const PointSet single = make_points({{0, 0}}, 100.0);
  const auto one = nearest_k(single, Eigen::Vector2d(1, 0), 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].index == 0);
  CHECK(one[0].distance == doctest::Approx(1.0));

  const PointSet wrap = make_points({{9, 0}}, 10.0);
  CHECK(nearest_k(wrap, Eigen::Vector2d(0, 0), 1)[0].distance == doctest::Approx(1.0));

  CHECK_THROWS_AS(nearest_k(single, Eigen::Vector2d(1, 0), 2), ParameterError);
  CHECK_THROWS_AS(nearest_k(single, Eigen::Vector2d(1, 0), 0), ParameterError);
}

TEST_CASE("nearest_k breaks ties by lower index") {
  const PointSet pts = make_points({{5, 6}, {6, 5}, {4, 5}}, 10.0);
  const auto out = nearest_k(pts, Eigen::Vector2d(5, 5), 3);
  CHECK(out[0].index == 0);
  CHECK(out[1].index == 1);
  CHECK(out[2].index == 2);
}

TEST_CASE("nearest_k and NeighborIndex match the exhaustive oracle") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PointSet pts = sample_ppp(trial % 2 ? 0.005 : 0.05, Window(100.0), rng);
    if (pts.size() < 5) continue;
    const NeighborIndex index(pts);
    const Eigen::Vector2d q(u(rng), u(rng));
    const auto expected = brute_sorted(pts, q);
    for (Index k : {Index{1}, Index{5}}) {
      const auto direct = nearest_k(pts, q, k);
      const auto fast = index.nearest_k(q, k);
      REQUIRE(direct.size() == static_cast<std::size_t>(k));
      for (Index j = 0; j < k; ++j) {
        CHECK(direct[j].index == expected[j].second);
        CHECK(direct[j].distance == doctest::Approx(expected[j].first).epsilon(1e-12));
        CHECK(fast[j] == direct[j]);
      }
    }
    CHECK(index.nearest(q) == nearest_k(pts, q, 1)[0]);
  }
}

TEST_CASE("place_users rejects an empty MBS set") {
  Rng rng(1);
  const PointSet empty{Eigen::Matrix2Xd(2, 0), 0.01, Window(100.0)};
  CHECK_THROWS_AS(place_users(empty, Window(100.0), rng), ParameterError);
}

TEST_CASE("one MBS: the user is uniform on the whole window") {
  Rng rng(5);
  const PointSet mbs = make_points({{30, 70}}, 10.0);
  // Distance from a uniform point on a 10x10 torus to a fixed point:
  // P[d <= 5] = pi*25/100 (the disc of radius 5 fits the fundamental square).
  const int n = 20000;
  int within = 0;
  for (int i = 0; i < n; ++i) {
    PointSet m = mbs;
    m.coords.col(0) = Eigen::Vector2d(3.0, 7.0);
    const UserPlacement users = place_users(m, Window(10.0), rng);
    REQUIRE(users.size() == 1);
    within += users.dist_to_mbs[0] <= 5.0;
  }
  const double p = std::numbers::pi * 25.0 / 100.0;
  CHECK(std::abs(static_cast<double>(within) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("two MBSs: each user is nearer its owner") {
  Rng rng(6);
  const PointSet mbs = make_points({{20, 20}, {70, 60}}, 100.0);
  for (int i = 0; i < 500; ++i) {
    const UserPlacement users = place_users(mbs, Window(100.0), rng);
    for (Index u = 0; u < 2; ++u) {
      const double own = toroidal_distance(users.coords.col(u), mbs.point(u), 100.0);
      const double other = toroidal_distance(users.coords.col(u), mbs.point(1 - u), 100.0);
      CHECK(own < other);
      CHECK(users.dist_to_mbs[u] == doctest::Approx(own));
    }
  }
}

TEST_CASE("placed users are owned by their nearest MBS") {
  Rng rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const PointSet mbs = sample_ppp(0.01, Window(100.0), rng);
    if (mbs.empty()) continue;
    const UserPlacement users = place_users(mbs, Window(100.0), rng);
    REQUIRE(users.size() == mbs.size());
    for (Index u = 0; u < users.size(); ++u) {
      const auto nn = nearest_k(mbs, users.coords.col(u), 1);
      CHECK(nn[0].index == users.mbs_index[u]);
      CHECK(users.dist_to_mbs[u] == doctest::Approx(nn[0].distance));
    }
  }
}

TEST_CASE("user-to-MBS distances sit below the PPP nearest-neighbour law") {
  // Voronoi-uniform users are closer to their MBS than the Rayleigh law of
  // a PPP user: the empirical CDF lies on or above 1 - exp(-pi lambda r^2).
  Rng rng(9);
  const double lambda = 0.01;
  std::vector<double> d;
  for (int rep = 0; rep < 300; ++rep) {
    const PointSet mbs = sample_ppp(lambda, Window(100.0), rng);
    const UserPlacement users = place_users(mbs, Window(100.0), rng);
    for (Index u = 0; u < users.size(); ++u) d.push_back(users.dist_to_mbs[u]);
  }
  std::sort(d.begin(), d.end());
  for (double r : {2.0, 4.0, 6.0, 8.0, 10.0}) {
    const double emp = static_cast<double>(std::upper_bound(d.begin(), d.end(), r) - d.begin()) /
                       static_cast<double>(d.size());
    const double ppp = 1.0 - std::exp(-std::numbers::pi * lambda * r * r);
    CHECK(emp >= ppp - 0.01);
    CHECK(emp - ppp < 0.15);
  }
}
