#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hgr/grid_hierarchy.hpp"
#include "hgr/ndarray.hpp"
#include "hgr/parallel.hpp"

namespace hgr {

/// Tridiagonal operator over one grid line. The mass form is symmetric and
/// diagonally dominant: row i = (h_{i-1}, 2(h_{i-1}+h_i), h_i), boundary rows
/// keep only the existing interval.
template <class T>
struct TridiagonalOperator {
  std::vector<T> lower;  // lower[i-1] multiplies x_{i-1} in row i
  std::vector<T> main;
  std::vector<T> upper;  // upper[i] multiplies x_{i+1} in row i

  std::size_t size() const { return main.size(); }

  static TridiagonalOperator mass_matrix(std::span<const T> spacings) {
    detail::require(!spacings.empty(), "mass matrix needs at least one interval");
    const std::size_t n = spacings.size() + 1;
    TridiagonalOperator op;
    op.lower.resize(n - 1);
    op.main.resize(n);
    op.upper.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      const T left = i > 0 ? spacings[i - 1] : T(0);
      const T right = i + 1 < n ? spacings[i] : T(0);
      op.main[i] = T(2) * (left + right);
      if (i > 0) op.lower[i - 1] = left;
      if (i + 1 < n) op.upper[i] = right;
    }
    return op;
  }

  std::vector<T> apply(std::span<const T> v) const {
    detail::require(v.size() == size(), "tridiagonal apply: length mismatch");
    const std::size_t n = size();
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      T acc = main[i] * v[i];
      if (i > 0) acc += lower[i - 1] * v[i - 1];
      if (i + 1 < n) acc += upper[i] * v[i + 1];
      out[i] = acc;
    }
    return out;
  }
};

/// (Mv)_i for the mass matrix built from the given spacings.
template <class T>
std::vector<T> mass_apply(std::span<const T> v, std::span<const T> h) {
  detail::require(v.size() == h.size() + 1, "mass_apply: |v| must equal |h|+1");
  return TridiagonalOperator<T>::mass_matrix(h).apply(v);
}

/// Transpose of prolongation: coarse row i gathers the fine node it coincides
/// with plus the two refined neighbors, weighted exactly as interpolation
/// would weight them toward coarse node i.
template <class T>
std::vector<T> transfer_apply(std::span<const T> v, std::span<const T> h) {
  detail::require(v.size() == h.size() + 1, "transfer_apply: |v| must equal |h|+1");
  detail::require(v.size() >= 3 && v.size() % 2 == 1,
                  "transfer_apply: fine fiber length must be odd");
  const std::size_t nc = (v.size() - 1) / 2 + 1;
  std::vector<T> out(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    T acc = T(0);
    if (i > 0) {
      const auto w = detail::refined_node_weights(h[2 * i - 2], h[2 * i - 1]);
      acc += w.to_right * v[2 * i - 1];
    }
    acc += v[2 * i];
    if (i + 1 < nc) {
      const auto w = detail::refined_node_weights(h[2 * i], h[2 * i + 1]);
      acc += w.to_left * v[2 * i + 1];
    }
    out[i] = acc;
  }
  return out;
}

/// Mass and transfer fused into one coarse-by-fine banded stencil, K = R*M.
/// Rows are built numerically from the product, giving at most five taps over
/// fine indices 2i-2..2i+2.
template <class T>
class MassTransOperator {
 public:
  explicit MassTransOperator(std::span<const T> fine_spacings) {
    detail::require(fine_spacings.size() >= 2 && fine_spacings.size() % 2 == 0,
                    "mass-trans: fine fiber length must be odd");
    nf_ = fine_spacings.size() + 1;
    nc_ = (nf_ - 1) / 2 + 1;
    const auto mass = TridiagonalOperator<T>::mass_matrix(fine_spacings);
    auto mass_entry = [&](std::size_t t, std::size_t j) -> T {
      if (j == t) return mass.main[t];
      if (j + 1 == t) return mass.lower[t - 1];
      if (j == t + 1) return mass.upper[t];
      return T(0);
    };
    taps_.resize(nc_);
    for (std::size_t i = 0; i < nc_; ++i) {
      // transfer row i: entries at fine 2i-1, 2i, 2i+1
      std::array<std::pair<std::size_t, T>, 3> row{};
      std::size_t row_n = 0;
      if (i > 0) {
        const auto w =
            detail::refined_node_weights(fine_spacings[2 * i - 2], fine_spacings[2 * i - 1]);
        row[row_n++] = {2 * i - 1, w.to_right};
      }
      row[row_n++] = {2 * i, T(1)};
      if (i + 1 < nc_) {
        const auto w = detail::refined_node_weights(fine_spacings[2 * i], fine_spacings[2 * i + 1]);
        row[row_n++] = {2 * i + 1, w.to_left};
      }
      taps_[i].fill(T(0));
      for (std::size_t k = 0; k < 5; ++k) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(2 * i) - 2 + static_cast<std::ptrdiff_t>(k);
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(nf_)) continue;
        T sum = T(0);
        for (std::size_t r = 0; r < row_n; ++r)
          sum += row[r].second * mass_entry(row[r].first, static_cast<std::size_t>(j));
        taps_[i][k] = sum;
      }
    }
  }

  std::size_t fine_size() const { return nf_; }
  std::size_t coarse_size() const { return nc_; }

  /// One strided fiber: out_i = sum_k taps[i][k] * in_{2i-2+k}. When
  /// zero_even_inputs is set, even fine indices read as zero (the fused
  /// "coefficients only" pass over an array that still holds nodal values).
  void apply_fiber(const T* in, std::size_t in_stride, bool zero_even_inputs, T* out,
                   std::size_t out_stride) const {
    for (std::size_t i = 0; i < nc_; ++i) {
      const std::ptrdiff_t j0 = static_cast<std::ptrdiff_t>(2 * i) - 2;
      T acc = T(0);
      for (std::size_t k = 0; k < 5; ++k) {
        const std::ptrdiff_t j = j0 + static_cast<std::ptrdiff_t>(k);
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(nf_)) continue;
        if (zero_even_inputs && (j & 1) == 0) continue;
        acc += taps_[i][k] * in[static_cast<std::size_t>(j) * in_stride];
      }
      out[i * out_stride] = acc;
    }
  }

  /// Dense row i (length fine_size), for inspection and tests.
  std::vector<T> row(std::size_t i) const {
    std::vector<T> r(nf_, T(0));
    for (std::size_t k = 0; k < 5; ++k) {
      const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(2 * i) - 2 + static_cast<std::ptrdiff_t>(k);
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(nf_)) r[static_cast<std::size_t>(j)] = taps_[i][k];
    }
    return r;
  }

 private:
  std::vector<std::array<T, 5>> taps_;
  std::size_t nf_ = 0;
  std::size_t nc_ = 0;
};

/// Fused transfer-of-mass product applied to one fiber.
template <class T>
std::vector<T> masstrans_apply(std::span<const T> v, std::span<const T> h) {
  detail::require(v.size() == h.size() + 1, "masstrans_apply: |v| must equal |h|+1");
  MassTransOperator<T> op(h);
  std::vector<T> out(op.coarse_size());
  op.apply_fiber(v.data(), 1, false, out.data(), 1);
  return out;
}

/// Direct tridiagonal solver for the mass matrix of one grid line: one forward
/// elimination, one back substitution, no pivoting (the matrix is diagonally
/// dominant). Factors once, then solves any number of fibers.
template <class T>
class ThomasSolver {
 public:
  explicit ThomasSolver(std::span<const T> spacings) {
    const auto op = TridiagonalOperator<T>::mass_matrix(spacings);
    const std::size_t n = op.size();
    pivot_ = op.main;
    mult_.resize(n - 1);
    upper_ = op.upper;
    for (std::size_t i = 1; i < n; ++i) {
      mult_[i - 1] = op.lower[i - 1] / pivot_[i - 1];
      pivot_[i] = op.main[i] - mult_[i - 1] * op.upper[i - 1];
    }
  }

  std::size_t size() const { return pivot_.size(); }

  void solve_fiber(T* x, std::size_t stride) const {
    const std::size_t n = size();
    for (std::size_t i = 1; i < n; ++i) x[i * stride] -= mult_[i - 1] * x[(i - 1) * stride];
    x[(n - 1) * stride] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      x[i * stride] = (x[i * stride] - upper_[i] * x[(i + 1) * stride]) / pivot_[i];
  }

 private:
  std::vector<T> pivot_;
  std::vector<T> mult_;
  std::vector<T> upper_;
};

/// Solves mass(h) * z = rhs.
template <class T>
std::vector<T> thomas_solve(std::span<const T> rhs, std::span<const T> h) {
  detail::require(rhs.size() == h.size() + 1, "thomas_solve: |rhs| must equal |h|+1");
  std::vector<T> x(rhs.begin(), rhs.end());
  ThomasSolver<T>(h).solve_fiber(x.data(), 1);
  return x;
}

namespace detail {

template <class T>
std::vector<T> spacings_as(const GridHierarchy& g, int level, int d) {
  const auto& h = g.spacings(level, d);
  return std::vector<T>(h.begin(), h.end());
}

// Applies `op` along dimension `dim` of `in`, writing the shrunken axis to
// `out`. Fibers are independent and batched across workers; per-fiber tap
// order is fixed, so the result is bit-identical to a sequential pass.
// When `mask` is set, inputs whose full multi-index is even in every
// dimension read as zero.
template <class T>
void masstrans_pass(const MassTransOperator<T>& op, ndview<const T> in, ndview<T> out, int dim,
                    bool mask) {
  const int a = dim == 0 ? 1 : 0;
  const int b = dim == 2 ? 1 : 2;
  const std::size_t na = in.shape[static_cast<std::size_t>(a)];
  const std::size_t nb = in.shape[static_cast<std::size_t>(b)];
  const std::size_t fibers = na * nb;
  const std::size_t grain = std::max<std::size_t>(1, 4096 / std::max<std::size_t>(op.fine_size(), 1));
  parallel_for(fibers, grain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const std::size_t ia = f / nb;
      const std::size_t ib = f % nb;
      const bool zero_even = mask && (ia % 2 == 0) && (ib % 2 == 0);
      const T* src = in.ptr + ia * in.stride[static_cast<std::size_t>(a)] +
                     ib * in.stride[static_cast<std::size_t>(b)];
      T* dst = out.ptr + ia * out.stride[static_cast<std::size_t>(a)] +
               ib * out.stride[static_cast<std::size_t>(b)];
      op.apply_fiber(src, in.stride[static_cast<std::size_t>(dim)], zero_even, dst,
                     out.stride[static_cast<std::size_t>(dim)]);
    }
  });
}

template <class T>
void thomas_pass(const ThomasSolver<T>& solver, ndview<T> data, int dim) {
  const int a = dim == 0 ? 1 : 0;
  const int b = dim == 2 ? 1 : 2;
  const std::size_t na = data.shape[static_cast<std::size_t>(a)];
  const std::size_t nb = data.shape[static_cast<std::size_t>(b)];
  const std::size_t grain = std::max<std::size_t>(1, 4096 / std::max<std::size_t>(solver.size(), 1));
  parallel_for(na * nb, grain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      const std::size_t ia = f / nb;
      const std::size_t ib = f % nb;
      T* x = data.ptr + ia * data.stride[static_cast<std::size_t>(a)] +
             ib * data.stride[static_cast<std::size_t>(b)];
      solver.solve_fiber(x, data.stride[static_cast<std::size_t>(dim)]);
    }
  });
}

// Scratch elements needed by correction_level beyond the output array.
inline std::size_t correction_workspace_elements(const GridHierarchy& g, int level) {
  const int rank = g.rank();
  if (rank == 1) return 0;
  const auto fine = padded_extents(g.level_extents(level));
  const auto coarse = padded_extents(g.level_extents(level - 1));
  std::size_t total = coarse[0] * fine[1] * fine[2];  // after the first pass
  if (rank == 3) total += coarse[0] * coarse[1] * fine[2];
  return total;
}

// Correction for the coefficient data seen through `fine` (level-l view,
// masked so coarse-aligned entries read as zero): one mass-trans pass per
// dimension in ascending order into the workspace, final pass straight into
// `out`, then a Thomas solve per dimension on `out` in place.
template <class T>
void correction_level(ndview<const T> fine, bool mask, const GridHierarchy& g, int level,
                      ndarray<T>& out, std::vector<T>& workspace) {
  const int rank = g.rank();
  detail::require(out.extents() == g.level_extents(level - 1),
                  "correction output shape mismatch");
  workspace.resize(std::max(workspace.size(), correction_workspace_elements(g, level)));

  std::vector<MassTransOperator<T>> ops;
  ops.reserve(static_cast<std::size_t>(rank));
  for (int d = 0; d < rank; ++d) {
    const auto h = spacings_as<T>(g, level, d);
    ops.emplace_back(std::span<const T>(h));
  }

  // shape after pass d: dims 0..d coarse, the rest fine
  auto stage_extents = [&](int d) {
    std::vector<std::size_t> e = g.level_extents(level);
    const auto coarse = g.level_extents(level - 1);
    for (int k = 0; k <= d; ++k)
      e[static_cast<std::size_t>(k)] = coarse[static_cast<std::size_t>(k)];
    return e;
  };

  ndview<const T> cur = fine;
  T* ws = workspace.data();
  std::size_t ws_used = 0;
  for (int d = 0; d < rank; ++d) {
    const auto ext = stage_extents(d);
    ndview<T> dst;
    if (d == rank - 1) {
      dst = full_view(out);
    } else {
      dst = ndview<T>{ws + ws_used, padded_extents(ext), natural_strides(ext)};
      ws_used += ndarray<T>::count_of(ext);
    }
    masstrans_pass(ops[static_cast<std::size_t>(d)], cur, dst, d, mask && d == 0);
    cur = as_const(dst);
  }

  for (int d = 0; d < rank; ++d) {
    const auto h = spacings_as<T>(g, level - 1, d);
    ThomasSolver<T> solver{std::span<const T>(h)};
    thomas_pass(solver, full_view(out), d);
  }
}

}  // namespace detail

/// L2-orthogonal projection of the level-l coefficient function onto the
/// level-(l-1) space: the load vector is one fused mass-trans pass per
/// dimension, then a batched Thomas solve per dimension, ascending order.
/// Entries of `coeffs` at nodes shared with level l-1 must be zero.
template <class T>
ndarray<T> compute_correction(const ndarray<T>& coeffs, const GridHierarchy& g, int level) {
  detail::require(level >= 1 && level <= g.levels(), "level out of range");
  detail::require(coeffs.extents() == g.level_extents(level),
                  "compute_correction: shape mismatch");
  // reject unmasked coarse positions
  auto in = full_view(coeffs);
  const auto cext = detail::padded_extents(g.level_extents(level - 1));
  for (std::size_t q0 = 0; q0 < cext[0]; ++q0)
    for (std::size_t q1 = 0; q1 < cext[1]; ++q1)
      for (std::size_t q2 = 0; q2 < cext[2]; ++q2)
        detail::require(in(2 * q0, 2 * q1, 2 * q2) == T(0),
                        "compute_correction: coefficients must be zero at coarse-grid positions");
  ndarray<T> z(g.level_extents(level - 1));
  std::vector<T> workspace;
  detail::correction_level(in, true, g, level, z, workspace);
  return z;
}

}  // namespace hgr
