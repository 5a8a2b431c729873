#pragma once

#include <stdexcept>
#include <string>

namespace hgr {

/// Thrown for all domain, format, and I/O failures in this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw error(what);
}

}  // namespace detail
}  // namespace hgr
