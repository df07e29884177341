#include "hetnet/geometry.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "hetnet/errors.hpp"

namespace hetnet {

namespace {

constexpr std::size_t kMaxPlacementDraws = 100'000'000;

double uniform_coord(double side, Rng& rng) {
  double x = side * uniform01(rng);
  // side * u can round up to side for u just below 1
  return x < side ? x : std::nextafter(side, 0.0);
}

bool closer(const std::pair<double, Index>& a, const std::pair<double, Index>& b) {
  return a.first < b.first || (a.first == b.first && a.second < b.second);
}

std::vector<Neighbor> finish(std::vector<std::pair<double, Index>>& cand, Index k) {
  std::partial_sort(cand.begin(), cand.begin() + k, cand.end(), closer);
  std::vector<Neighbor> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    out.push_back({cand[i].second, std::sqrt(cand[i].first)});
  }
  return out;
}

void check_k(const PointSet& points, Index k) {
  if (k < 1) throw ParameterError("nearest_k: k must be positive");
  if (k > points.size()) {
    throw ParameterError("nearest_k: k = " + std::to_string(k) +
                         " exceeds point count " + std::to_string(points.size()));
  }
}

}  // namespace

Window::Window(double side_length) : side_(side_length) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw ParameterError("window side_length must be positive and finite");
  }
}

PointSet sample_ppp(double intensity, const Window& window, Rng& rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw ParameterError("sample_ppp: intensity must be positive and finite");
  }
  std::poisson_distribution<long long> count_dist(intensity * window.area());
  const long long n = count_dist(rng);

  PointSet out{Eigen::Matrix2Xd(2, n), intensity, window};
  for (long long i = 0; i < n; ++i) {
    out.coords(0, i) = uniform_coord(window.side(), rng);
    out.coords(1, i) = uniform_coord(window.side(), rng);
  }
  return out;
}

std::vector<Neighbor> nearest_k(const PointSet& points,
                                const Eigen::Vector2d& query, Index k) {
  check_k(points, k);
  const double side = points.window.side();
  std::vector<std::pair<double, Index>> cand;
  cand.reserve(static_cast<std::size_t>(points.size()));
  for (Index i = 0; i < points.size(); ++i) {
    cand.emplace_back(toroidal_distance_sq(query, points.point(i), side), i);
  }
  return finish(cand, k);
}

NeighborIndex::NeighborIndex(const PointSet& points) : points_(&points) {
  const Index n = points.size();
  grid_ = std::max<Index>(1, static_cast<Index>(std::sqrt(static_cast<double>(n))));
  cell_side_ = points.window.side() / static_cast<double>(grid_);

  std::vector<Index> cell(static_cast<std::size_t>(n));
  offsets_.assign(static_cast<std::size_t>(grid_ * grid_ + 1), 0);
  for (Index i = 0; i < n; ++i) {
    const Index c = cell_of(points.coords(1, i)) * grid_ + cell_of(points.coords(0, i));
    cell[i] = c;
    ++offsets_[c + 1];
  }
  for (std::size_t c = 1; c < offsets_.size(); ++c) offsets_[c] += offsets_[c - 1];
  members_.resize(static_cast<std::size_t>(n));
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (Index i = 0; i < n; ++i) members_[fill[cell[i]]++] = i;
}

Index NeighborIndex::cell_of(double coord) const {
  return std::clamp<Index>(static_cast<Index>(coord / cell_side_), 0, grid_ - 1);
}

std::vector<Neighbor> NeighborIndex::nearest_k(const Eigen::Vector2d& query,
                                               Index k) const {
  check_k(*points_, k);
  const double side = points_->window.side();
  const Index cx = cell_of(query.x());
  const Index cy = cell_of(query.y());

  std::vector<std::pair<double, Index>> cand;
  for (Index ring = 0;; ++ring) {
    if (2 * ring + 1 >= grid_) return hetnet::nearest_k(*points_, query, k);
    for (Index dy = -ring; dy <= ring; ++dy) {
      const bool edge_row = (dy == -ring || dy == ring);
      for (Index dx = -ring; dx <= ring; dx += (edge_row ? 1 : 2 * ring)) {
        const Index gx = ((cx + dx) % grid_ + grid_) % grid_;
        const Index gy = ((cy + dy) % grid_ + grid_) % grid_;
        const Index c = gy * grid_ + gx;
        for (Index m = offsets_[c]; m < offsets_[c + 1]; ++m) {
          const Index i = members_[m];
          cand.emplace_back(toroidal_distance_sq(query, points_->point(i), side), i);
        }
        if (ring == 0) break;
      }
    }
    if (static_cast<Index>(cand.size()) >= k) {
      std::nth_element(cand.begin(), cand.begin() + (k - 1), cand.end(), closer);
      const double reach = static_cast<double>(ring) * cell_side_;
      if (cand[k - 1].first < reach * reach) return finish(cand, k);
    }
  }
}

Neighbor NeighborIndex::nearest(const Eigen::Vector2d& query) const {
  check_k(*points_, 1);
  const double side = points_->window.side();
  const Index cx = cell_of(query.x());
  const Index cy = cell_of(query.y());

  double best_d2 = std::numeric_limits<double>::infinity();
  Index best = -1;
  auto consider = [&](Index i) {
    const double d2 = toroidal_distance_sq(query, points_->point(i), side);
    if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
      best_d2 = d2;
      best = i;
    }
  };
  for (Index ring = 0;; ++ring) {
    if (2 * ring + 1 >= grid_) {
      for (Index i = 0; i < points_->size(); ++i) consider(i);
      return {best, std::sqrt(best_d2)};
    }
    for (Index dy = -ring; dy <= ring; ++dy) {
      const bool edge_row = (dy == -ring || dy == ring);
      for (Index dx = -ring; dx <= ring; dx += (edge_row ? 1 : 2 * ring)) {
        const Index gx = ((cx + dx) % grid_ + grid_) % grid_;
        const Index gy = ((cy + dy) % grid_ + grid_) % grid_;
        const Index c = gy * grid_ + gx;
        for (Index m = offsets_[c]; m < offsets_[c + 1]; ++m) consider(members_[m]);
        if (ring == 0) break;
      }
    }
    const double reach = static_cast<double>(ring) * cell_side_;
    if (best >= 0 && best_d2 < reach * reach) return {best, std::sqrt(best_d2)};
  }
}

UserPlacement place_users(const PointSet& mbs, const Window& window, Rng& rng) {
  if (mbs.empty()) throw ParameterError("place_users: MBS set is empty");
  if (mbs.window.side() != window.side()) {
    throw ParameterError("place_users: MBS set was sampled on a different window");
  }
  const Index n = mbs.size();
  const NeighborIndex index(mbs);

  UserPlacement out;
  out.coords.resize(2, n);
  out.dist_to_mbs.resize(n);
  out.mbs_index.resize(static_cast<std::size_t>(n));
  std::vector<char> filled(static_cast<std::size_t>(n), 0);

  Index remaining = n;
  while (remaining > 0) {
    if (out.draws >= kMaxPlacementDraws) {
      throw std::runtime_error("place_users: rejection sampler exceeded draw budget "
                               "(coincident MBS points?)");
    }
    ++out.draws;
    const Eigen::Vector2d p(uniform_coord(window.side(), rng),
                            uniform_coord(window.side(), rng));
    const Neighbor owner = index.nearest(p);
    if (filled[owner.index]) continue;
    filled[owner.index] = 1;
    out.coords.col(owner.index) = p;
    out.dist_to_mbs[owner.index] = owner.distance;
    out.mbs_index[owner.index] = owner.index;
    --remaining;
  }
  return out;
}

}  // namespace hetnet
