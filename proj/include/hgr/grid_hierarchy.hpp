#pragma once

#include <bit>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hgr/error.hpp"
#include "hgr/ndarray.hpp"

namespace hgr {

/// Blend weights a refined node assigns to its two bracketing coarse nodes.
template <class Real>
struct node_weights {
  Real to_left;
  Real to_right;
};

namespace detail {

// Weights for a node sitting between two coarse neighbors, from the fine
// spacings on each side. Shared by interpolation and by the transfer stencil
// so that the transfer operator is exactly the transpose of prolongation.
template <class Real>
node_weights<Real> refined_node_weights(Real h_left, Real h_right) {
  const Real span = h_left + h_right;
  return {h_right / span, h_left / span};
}

inline bool is_pow2_plus_1(std::size_t n) {
  return n >= 2 && std::has_single_bit(n - 1);
}

}  // namespace detail

/// Dyadic level structure over nonuniform per-dimension node coordinates.
///
/// Level L (the finest) holds every node; each coarser level keeps every
/// second node of the level above, in every dimension simultaneously, down
/// to level 0. L equals the smallest per-dimension refinement depth, so a
/// dimension of size 2^k + 1 has 2^(k-L+l) + 1 nodes at level l.
///
/// Immutable after construction; safe to share across threads.
class GridHierarchy {
 public:
  GridHierarchy() = default;

  explicit GridHierarchy(std::vector<std::vector<double>> coords_per_dim)
      : coords_(std::move(coords_per_dim)) {
    detail::require(!coords_.empty() && coords_.size() <= max_rank,
                    "grid must have 1 to 3 dimensions");
    int min_depth = -1;
    for (std::size_t d = 0; d < coords_.size(); ++d) {
      const auto& c = coords_[d];
      detail::require(detail::is_pow2_plus_1(c.size()),
                      "dimension size must be 2^k+1 (dimension " + std::to_string(d) +
                          " has " + std::to_string(c.size()) + " nodes)");
      for (std::size_t i = 0; i + 1 < c.size(); ++i)
        detail::require(c[i] < c[i + 1],
                        "coordinates must be strictly increasing (dimension " +
                            std::to_string(d) + ")");
      const int depth = std::countr_zero(c.size() - 1);
      if (min_depth < 0 || depth < min_depth) min_depth = depth;
    }
    levels_ = min_depth;
    build_caches();
  }

  /// Hierarchy over integer coordinates 0..n-1 per dimension.
  static GridHierarchy uniform(const std::vector<std::size_t>& sizes) {
    std::vector<std::vector<double>> coords(sizes.size());
    for (std::size_t d = 0; d < sizes.size(); ++d) {
      coords[d].resize(sizes[d]);
      for (std::size_t i = 0; i < sizes[d]; ++i) coords[d][i] = static_cast<double>(i);
    }
    return GridHierarchy(std::move(coords));
  }

  int rank() const { return static_cast<int>(coords_.size()); }

  /// Number of refinement levels above the coarsest; level index runs 0..levels().
  int levels() const { return levels_; }

  /// Coefficient classes: one per refinement level plus the coarsest nodal class.
  int class_count() const { return levels_ + 1; }

  const std::vector<double>& coords(int d) const { return coords_[check_dim(d)]; }

  std::size_t finest_extent(int d) const { return coords_[check_dim(d)].size(); }

  std::vector<std::size_t> finest_extents() const {
    std::vector<std::size_t> e(coords_.size());
    for (std::size_t d = 0; d < coords_.size(); ++d) e[d] = coords_[d].size();
    return e;
  }

  /// Distance, in finest-grid index units, between consecutive level-l nodes.
  std::size_t level_stride(int level) const {
    return std::size_t{1} << static_cast<unsigned>(levels_ - check_level(level));
  }

  std::size_t level_extent(int level, int d) const {
    return (finest_extent(d) - 1) / level_stride(level) + 1;
  }

  std::vector<std::size_t> level_extents(int level) const {
    std::vector<std::size_t> e(coords_.size());
    for (int d = 0; d < rank(); ++d) e[static_cast<std::size_t>(d)] = level_extent(level, d);
    return e;
  }

  std::size_t level_node_count(int level) const {
    std::size_t n = 1;
    for (int d = 0; d < rank(); ++d) n *= level_extent(level, d);
    return n;
  }

  /// Spacings between consecutive level-l nodes along dimension d.
  const std::vector<double>& spacings(int level, int d) const {
    return spacings_[static_cast<std::size_t>(check_level(level))][check_dim(d)];
  }

  /// Per refined node (odd level-l index 2q+1 along d): weights toward the
  /// bracketing coarse nodes q and q+1 of level l-1. Requires level >= 1.
  const std::vector<node_weights<double>>& refined_weights(int level, int d) const {
    detail::require(level >= 1 && level <= levels_, "level out of range");
    return weights_[static_cast<std::size_t>(level - 1)][check_dim(d)];
  }

  /// Smallest level containing the given finest-grid index (its class).
  int node_class(std::span<const std::size_t> finest_index) const {
    int cls = 0;
    for (int d = 0; d < rank(); ++d) {
      const std::size_t i = finest_index[static_cast<std::size_t>(d)];
      if (i == 0) continue;
      const int tz = std::countr_zero(i);
      if (levels_ - tz > cls) cls = levels_ - tz;
    }
    return cls;
  }

  /// Number of nodes introduced by class `cls` (class 0 = coarsest nodes).
  std::size_t class_node_count(int cls) const {
    check_level(cls);
    if (cls == 0) return level_node_count(0);
    return level_node_count(cls) - level_node_count(cls - 1);
  }

 private:
  std::size_t check_dim(int d) const {
    detail::require(d >= 0 && d < rank(), "dimension index out of range");
    return static_cast<std::size_t>(d);
  }

  int check_level(int level) const {
    detail::require(level >= 0 && level <= levels_, "level out of range");
    return level;
  }

  void build_caches() {
    spacings_.resize(static_cast<std::size_t>(levels_) + 1);
    weights_.resize(static_cast<std::size_t>(levels_));
    for (int l = 0; l <= levels_; ++l) {
      auto& per_dim = spacings_[static_cast<std::size_t>(l)];
      per_dim.resize(coords_.size());
      const std::size_t stride = std::size_t{1} << static_cast<unsigned>(levels_ - l);
      for (std::size_t d = 0; d < coords_.size(); ++d) {
        const auto& c = coords_[d];
        const std::size_t n = (c.size() - 1) / stride;
        per_dim[d].resize(n);
        for (std::size_t i = 0; i < n; ++i)
          per_dim[d][i] = c[(i + 1) * stride] - c[i * stride];
      }
    }
    for (int l = 1; l <= levels_; ++l) {
      auto& per_dim = weights_[static_cast<std::size_t>(l - 1)];
      per_dim.resize(coords_.size());
      for (std::size_t d = 0; d < coords_.size(); ++d) {
        const auto& h = spacings_[static_cast<std::size_t>(l)][d];
        per_dim[d].resize(h.size() / 2);
        for (std::size_t q = 0; q < h.size() / 2; ++q)
          per_dim[d][q] = detail::refined_node_weights(h[2 * q], h[2 * q + 1]);
      }
    }
  }

  std::vector<std::vector<double>> coords_;
  int levels_ = 0;
  std::vector<std::vector<std::vector<double>>> spacings_;               // [level][dim]
  std::vector<std::vector<std::vector<node_weights<double>>>> weights_;  // [level-1][dim]
};

/// Builds the level structure over explicit per-dimension coordinates.
inline GridHierarchy build_hierarchy(std::vector<std::vector<double>> coords_per_dim) {
  return GridHierarchy(std::move(coords_per_dim));
}

/// Strided window selecting the level-l nodes of a finest-shape array.
template <class T>
ndview<T> level_view(ndarray<T>& a, const GridHierarchy& g, int level) {
  detail::require(a.extents() == g.finest_extents(),
                  "array shape does not match the finest grid");
  auto stride = detail::natural_strides(a.extents());
  const std::size_t step = g.level_stride(level);
  for (auto& s : stride) s *= step;
  return {a.data(), detail::padded_extents(g.level_extents(level)), stride};
}

template <class T>
ndview<const T> level_view(const ndarray<T>& a, const GridHierarchy& g, int level) {
  detail::require(a.extents() == g.finest_extents(),
                  "array shape does not match the finest grid");
  auto stride = detail::natural_strides(a.extents());
  const std::size_t step = g.level_stride(level);
  for (auto& s : stride) s *= step;
  return {a.data(), detail::padded_extents(g.level_extents(level)), stride};
}

}  // namespace hgr
