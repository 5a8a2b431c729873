#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hgr/error.hpp"

namespace hgr {

inline constexpr int max_rank = 3;

/// Dense row-major array of rank 1..3 (last dimension contiguous).
template <class T>
class ndarray {
 public:
  ndarray() = default;

  explicit ndarray(std::vector<std::size_t> extents)
      : extents_(std::move(extents)), data_(count_of(extents_)) {}

  ndarray(std::vector<std::size_t> extents, std::vector<T> values)
      : extents_(std::move(extents)), data_(std::move(values)) {
    detail::require(data_.size() == count_of(extents_),
                    "ndarray: value count does not match extents");
  }

  int rank() const { return static_cast<int>(extents_.size()); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  std::size_t extent(int d) const { return extents_[static_cast<std::size_t>(d)]; }
  std::size_t size() const { return data_.size(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  friend bool operator==(const ndarray& a, const ndarray& b) {
    return a.extents_ == b.extents_ && a.data_ == b.data_;
  }

  static std::size_t count_of(const std::vector<std::size_t>& extents) {
    detail::require(!extents.empty() && extents.size() <= max_rank,
                    "ndarray: rank must be between 1 and 3");
    std::size_t n = 1;
    for (std::size_t e : extents) n *= e;
    return n;
  }

 private:
  std::vector<std::size_t> extents_;
  std::vector<T> data_;
};

/// Non-owning strided window into an ndarray. Always padded to rank 3;
/// trailing padded dimensions have extent 1.
template <class T>
struct ndview {
  T* ptr = nullptr;
  std::array<std::size_t, 3> shape{1, 1, 1};
  std::array<std::size_t, 3> stride{0, 0, 0};

  T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return ptr[i * stride[0] + j * stride[1] + k * stride[2]];
  }
};

template <class T>
ndview<const T> as_const(ndview<T> v) {
  return {v.ptr, v.shape, v.stride};
}

namespace detail {

// Row-major strides padded to rank 3 (padded entries get stride 0).
inline std::array<std::size_t, 3> natural_strides(const std::vector<std::size_t>& extents) {
  std::array<std::size_t, 3> s{0, 0, 0};
  std::size_t acc = 1;
  for (int d = static_cast<int>(extents.size()) - 1; d >= 0; --d) {
    s[static_cast<std::size_t>(d)] = acc;
    acc *= extents[static_cast<std::size_t>(d)];
  }
  return s;
}

inline std::array<std::size_t, 3> padded_extents(const std::vector<std::size_t>& extents) {
  std::array<std::size_t, 3> e{1, 1, 1};
  for (std::size_t d = 0; d < extents.size(); ++d) e[d] = extents[d];
  return e;
}

}  // namespace detail

template <class T>
ndview<T> full_view(ndarray<T>& a) {
  return {a.data(), detail::padded_extents(a.extents()), detail::natural_strides(a.extents())};
}

template <class T>
ndview<const T> full_view(const ndarray<T>& a) {
  return {a.data(), detail::padded_extents(a.extents()), detail::natural_strides(a.extents())};
}

}  // namespace hgr
