#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <vector>

#include "hetnet/random.hpp"

namespace hetnet {

using Index = Eigen::Index;

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Square observation window [0, side)^2 with wrap-around metric.
class Window {
 public:
  explicit Window(double side_length = 100.0);

  double side() const { return side_; }
  double area() const { return side_ * side_; }

 private:
  double side_;
};

/// Shortest signed offset from `a` to `b` on a torus of the given side,
/// per coordinate, each component in [-side/2, side/2]. Both points must lie
/// in the window [0, side)^2.
template <typename DerivedA, typename DerivedB>
auto toroidal_delta(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b,
                    typename DerivedA::Scalar side) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar half = side / 2;
  Point2<Scalar> d = b - a;
  for (int i = 0; i < 2; ++i) {
    if (d[i] > half) {
      d[i] -= side;
    } else if (d[i] < -half) {
      d[i] += side;
    }
  }
  return d;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar toroidal_distance_sq(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    typename DerivedA::Scalar side) {
  return toroidal_delta(a, b, side).squaredNorm();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar toroidal_distance(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    typename DerivedA::Scalar side) {
  return std::sqrt(toroidal_distance_sq(a, b, side));
}

/// A finite sample of a homogeneous point process, one point per column.
struct PointSet {
  Eigen::Matrix2Xd coords;
  double intensity = 0.0;
  Window window;

  Index size() const { return coords.cols(); }
  bool empty() const { return coords.cols() == 0; }
  auto point(Index i) const { return coords.col(i); }
};

struct Neighbor {
  Index index;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Draws a homogeneous PPP: Poisson(intensity * area) points, i.i.d. uniform.
PointSet sample_ppp(double intensity, const Window& window, Rng& rng);

/// The k nearest points to `query` under the toroidal metric, ascending by
/// distance, ties broken by lower index. Exhaustive scan.
std::vector<Neighbor> nearest_k(const PointSet& points,
                                const Eigen::Vector2d& query, Index k);

/// Bucket grid over a PointSet for repeated nearest-neighbour queries.
/// Returns exactly what nearest_k returns.
class NeighborIndex {
 public:
  explicit NeighborIndex(const PointSet& points);

  std::vector<Neighbor> nearest_k(const Eigen::Vector2d& query, Index k) const;
  Neighbor nearest(const Eigen::Vector2d& query) const;

  const PointSet& points() const { return *points_; }

 private:
  Index cell_of(double coord) const;

  const PointSet* points_;
  Index grid_ = 1;
  double cell_side_ = 0.0;
  // CSR layout: indices of points in cell c are
  // members_[offsets_[c] .. offsets_[c+1]).
  std::vector<Index> offsets_;
  std::vector<Index> members_;
};

/// One uplink user per MBS, uniform within that MBS's (toroidal) Voronoi cell.
/// User i belongs to MBS i.
struct UserPlacement {
  Eigen::Matrix2Xd coords;
  std::vector<Index> mbs_index;
  Eigen::VectorXd dist_to_mbs;
  /// Uniform window draws consumed by the rejection sampler.
  std::size_t draws = 0;

  Index size() const { return coords.cols(); }
};

/// Rejection sampler: uniform points on the window are assigned to their
/// nearest MBS and the first arrival in each cell is kept.
UserPlacement place_users(const PointSet& mbs, const Window& window, Rng& rng);

}  // namespace hetnet
