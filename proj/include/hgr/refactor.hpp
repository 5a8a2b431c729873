#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hgr/correction.hpp"
#include "hgr/grid_hierarchy.hpp"
#include "hgr/ndarray.hpp"
#include "hgr/transforms.hpp"

namespace hgr {

/// In-place pyramid over the finest-shape array: nodes unique to level l hold
/// class-l coefficients, nodes of the coarsest grid hold corrected nodal
/// values (class 0).
template <class T>
struct RefactoredArray {
  ndarray<T> data;
  GridHierarchy hierarchy;

  static constexpr std::size_t precision_bytes = sizeof(T);
};

/// Transforms fine-grid data into the coefficient pyramid. Per level, finest
/// first: coefficients replace the refined nodes in place, then the projected
/// correction is added to the coarse nodal values. The correction load vector
/// lives in a workspace that never exceeds (n0+1)*(n1+1)*n2 elements.
template <class T>
RefactoredArray<T> decompose(ndarray<T> data, const GridHierarchy& g) {
  detail::require(data.extents() == g.finest_extents(),
                  "decompose: array shape does not match grid");
  for (std::size_t i = 0; i < data.size(); ++i)
    detail::require(std::isfinite(static_cast<double>(data[i])),
                    "decompose: input contains non-finite values");
  std::vector<T> workspace;
  for (int l = g.levels(); l >= 1; --l) {
    auto fine = level_view(data, g, l);
    auto coarse = level_view(data, g, l - 1);
    detail::for_each_refined_node<T>(
        g, l, as_const(coarse),
        [&](std::size_t i0, std::size_t i1, std::size_t i2, T interp) {
          fine(i0, i1, i2) -= interp;
        });
    ndarray<T> z(g.level_extents(l - 1));
    detail::correction_level(as_const(fine), true, g, l, z, workspace);
    const auto cext = detail::padded_extents(z.extents());
    std::size_t flat = 0;
    for (std::size_t q0 = 0; q0 < cext[0]; ++q0)
      for (std::size_t q1 = 0; q1 < cext[1]; ++q1)
        for (std::size_t q2 = 0; q2 < cext[2]; ++q2) coarse(q0, q1, q2) += z[flat++];
  }
  return {std::move(data), g};
}

/// Reconstructs a finest-shape approximation from coefficient classes
/// 0..upto_class; higher classes are treated as absent (all-zero), so their
/// levels reduce to pure interpolation. With upto_class == levels() this
/// inverts decompose up to floating-point rounding.
template <class T>
ndarray<T> recompose(const RefactoredArray<T>& r, int upto_class) {
  const GridHierarchy& g = r.hierarchy;
  detail::require(upto_class >= 0 && upto_class <= g.levels(),
                  "recompose: class index out of range");
  ndarray<T> data = r.data;
  std::vector<T> workspace;
  for (int l = 1; l <= g.levels(); ++l) {
    auto fine = level_view(data, g, l);
    auto coarse = level_view(data, g, l - 1);
    const bool with_coeffs = l <= upto_class;
    if (with_coeffs) {
      ndarray<T> z(g.level_extents(l - 1));
      detail::correction_level(as_const(fine), true, g, l, z, workspace);
      const auto cext = detail::padded_extents(z.extents());
      std::size_t flat = 0;
      for (std::size_t q0 = 0; q0 < cext[0]; ++q0)
        for (std::size_t q1 = 0; q1 < cext[1]; ++q1)
          for (std::size_t q2 = 0; q2 < cext[2]; ++q2) coarse(q0, q1, q2) -= z[flat++];
    }
    detail::for_each_refined_node<T>(
        g, l, as_const(coarse),
        [&](std::size_t i0, std::size_t i1, std::size_t i2, T interp) {
          fine(i0, i1, i2) = with_coeffs ? fine(i0, i1, i2) + interp : interp;
        });
  }
  return data;
}

/// Plain discrete error norms over all finest nodes.
struct ErrorReport {
  double l2_abs = 0;
  double l2_rel = 0;
  double linf_abs = 0;
  double linf_rel = 0;
};

template <class T>
ErrorReport error_report(const ndarray<T>& original, const ndarray<T>& reconstruction) {
  detail::require(original.extents() == reconstruction.extents(),
                  "error_report: shape mismatch");
  double sq_diff = 0, sq_orig = 0, max_diff = 0, max_orig = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const double a = static_cast<double>(original[i]);
    const double d = a - static_cast<double>(reconstruction[i]);
    sq_diff += d * d;
    sq_orig += a * a;
    max_diff = std::max(max_diff, std::abs(d));
    max_orig = std::max(max_orig, std::abs(a));
  }
  ErrorReport rep;
  rep.l2_abs = std::sqrt(sq_diff);
  rep.linf_abs = max_diff;
  const double inf = std::numeric_limits<double>::infinity();
  rep.l2_rel = sq_orig > 0 ? rep.l2_abs / std::sqrt(sq_orig) : (rep.l2_abs > 0 ? inf : 0.0);
  rep.linf_rel = max_orig > 0 ? rep.linf_abs / max_orig : (rep.linf_abs > 0 ? inf : 0.0);
  return rep;
}

/// One hierarchy level's values, contiguous in row-major order of the
/// finest-grid indices that belong to the class.
template <class T>
struct CoefficientClass {
  int level = 0;
  std::vector<T> values;
};

namespace detail {

// Walks the finest-grid indices of one class in row-major order. Array is
// ndarray<T> or const ndarray<T>; fn receives a matching reference.
template <class Array, class Fn>
void for_each_class_node(Array& data, const GridHierarchy& g, int cls, Fn&& fn) {
  auto view = level_view(data, g, cls);
  const auto ext = padded_extents(g.level_extents(cls));
  for (std::size_t i0 = 0; i0 < ext[0]; ++i0)
    for (std::size_t i1 = 0; i1 < ext[1]; ++i1)
      for (std::size_t i2 = 0; i2 < ext[2]; ++i2) {
        if (cls > 0 && (i0 & 1) == 0 && (i1 & 1) == 0 && (i2 & 1) == 0)
          continue;  // already present on the coarser level
        fn(view(i0, i1, i2));
      }
}

}  // namespace detail

template <class T>
CoefficientClass<T> extract_class(const RefactoredArray<T>& r, int cls) {
  CoefficientClass<T> out;
  out.level = cls;
  out.values.reserve(r.hierarchy.class_node_count(cls));
  detail::for_each_class_node(r.data, r.hierarchy, cls,
                              [&](const T& v) { out.values.push_back(v); });
  return out;
}

template <class T>
void scatter_class(RefactoredArray<T>& r, int cls, std::span<const T> values) {
  detail::require(values.size() == r.hierarchy.class_node_count(cls),
                  "scatter_class: value count does not match class size");
  std::size_t k = 0;
  detail::for_each_class_node(r.data, r.hierarchy, cls, [&](T& v) { v = values[k++]; });
}

template <class T>
void scatter_class(RefactoredArray<T>& r, int cls, const std::vector<T>& values) {
  scatter_class(r, cls, std::span<const T>(values));
}

}  // namespace hgr
