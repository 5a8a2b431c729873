#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hgr/grid_hierarchy.hpp"
#include "hgr/ndarray.hpp"
#include "hgr/parallel.hpp"

namespace hgr {
namespace detail {

// Visits every level-`level` node absent from level `level-1` (any odd index
// component) and hands the callback the multilinear interpolation of the
// bracketing coarse nodes. A node odd in m dimensions blends 2^m neighbors.
// Callback: fn(i0, i1, i2, interpolated) with level-l indices padded to rank 3.
// Nodes are independent, so rows are split across workers; per-node arithmetic
// order is fixed and results match a sequential pass bit for bit.
template <class T, class Fn>
void for_each_refined_node(const GridHierarchy& g, int level, ndview<const T> coarse, Fn&& fn) {
  const int rank = g.rank();
  const auto ext = padded_extents(g.level_extents(level));
  const node_weights<double>* wt[3] = {nullptr, nullptr, nullptr};
  for (int d = 0; d < rank; ++d) wt[d] = g.refined_weights(level, d).data();

  auto rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i0 = row_begin; i0 < row_end; ++i0) {
      for (std::size_t i1 = 0; i1 < ext[1]; ++i1) {
        for (std::size_t i2 = 0; i2 < ext[2]; ++i2) {
          const unsigned parity =
              static_cast<unsigned>(i0 & 1u) | (static_cast<unsigned>(i1 & 1u) << 1) |
              (static_cast<unsigned>(i2 & 1u) << 2);
          if (parity == 0) continue;  // node also exists on the coarse level
          const std::size_t base[3] = {i0 >> 1, i1 >> 1, i2 >> 1};
          int odd_dims[3];
          int m = 0;
          for (int d = 0; d < 3; ++d)
            if (parity & (1u << d)) odd_dims[m++] = d;
          T acc = T(0);
          for (unsigned corner = 0; corner < (1u << m); ++corner) {
            std::size_t at[3] = {base[0], base[1], base[2]};
            T w = T(1);
            for (int b = 0; b < m; ++b) {
              const int d = odd_dims[b];
              const node_weights<double>& nw = wt[d][base[d]];
              if (corner & (1u << b)) {
                at[d] += 1;
                w *= static_cast<T>(nw.to_right);
              } else {
                w *= static_cast<T>(nw.to_left);
              }
            }
            acc += w * coarse(at[0], at[1], at[2]);
          }
          fn(i0, i1, i2, acc);
        }
      }
    }
  };

  const std::size_t inner = ext[1] * ext[2];
  const std::size_t grain = std::max<std::size_t>(1, 16384 / std::max<std::size_t>(inner, 1));
  parallel_for(ext[0], grain, rows);
}

template <class T>
void check_level_shape(const ndarray<T>& a, const GridHierarchy& g, int level, const char* what) {
  require(a.extents() == g.level_extents(level), std::string(what) + ": shape mismatch");
}

}  // namespace detail

/// Values at coarse (level-1) nodes copied through; every node unique to
/// `level` receives the tensor-product linear blend of its coarse brackets.
template <class T>
ndarray<T> interpolate_to_fine(const ndarray<T>& coarse, const GridHierarchy& g, int level) {
  detail::require(level >= 1 && level <= g.levels(), "level out of range");
  detail::check_level_shape(coarse, g, level - 1, "interpolate_to_fine");
  ndarray<T> fine(g.level_extents(level));
  auto out = full_view(fine);
  auto in = full_view(coarse);
  const auto cext = detail::padded_extents(coarse.extents());
  for (std::size_t q0 = 0; q0 < cext[0]; ++q0)
    for (std::size_t q1 = 0; q1 < cext[1]; ++q1)
      for (std::size_t q2 = 0; q2 < cext[2]; ++q2)
        out(2 * q0, 2 * q1, 2 * q2) = in(q0, q1, q2);
  detail::for_each_refined_node<T>(
      g, level, in,
      [&](std::size_t i0, std::size_t i1, std::size_t i2, T interp) { out(i0, i1, i2) = interp; });
  return fine;
}

/// Difference between the level-l data and the interpolation of its own
/// coarse restriction; exact zeros at nodes shared with level l-1.
template <class T>
ndarray<T> compute_coefficients(const ndarray<T>& fine, const GridHierarchy& g, int level) {
  detail::require(level >= 1 && level <= g.levels(), "level out of range");
  detail::check_level_shape(fine, g, level, "compute_coefficients");
  ndarray<T> coeffs(g.level_extents(level));  // zero-initialized
  auto out = full_view(coeffs);
  auto in = full_view(fine);
  // restriction = every second node of the input, read in place
  ndview<const T> restricted{in.ptr, detail::padded_extents(g.level_extents(level - 1)),
                             {in.stride[0] * 2, in.stride[1] * 2, in.stride[2] * 2}};
  detail::for_each_refined_node<T>(
      g, level, restricted, [&](std::size_t i0, std::size_t i1, std::size_t i2, T interp) {
        out(i0, i1, i2) = in(i0, i1, i2) - interp;
      });
  return coeffs;
}

/// Inverse of compute_coefficients: interpolation of the coarse values plus
/// the stored coefficients. Expects coeffs to be zero at coarse positions.
template <class T>
ndarray<T> apply_coefficients(const ndarray<T>& coarse, const ndarray<T>& coeffs,
                              const GridHierarchy& g, int level) {
  detail::require(level >= 1 && level <= g.levels(), "level out of range");
  detail::check_level_shape(coarse, g, level - 1, "apply_coefficients");
  detail::check_level_shape(coeffs, g, level, "apply_coefficients");
  ndarray<T> fine = interpolate_to_fine(coarse, g, level);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] += coeffs[i];
  return fine;
}

}  // namespace hgr
