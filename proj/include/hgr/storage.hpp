#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include "hgr/error.hpp"
#include "hgr/refactor.hpp"

namespace hgr {

// Progressive binary layout (little-endian throughout):
//   magic "HGRF" | version u16 | precision u8 (4|8) | rank u8
//   per-dimension finest size u64
//   per-dimension coordinates f64
//   class count u16
//   per class: byte offset u64 (absolute), byte length u64
//   payload: class 0, class 1, ... (coarse first, so any prefix of classes
//   is one contiguous range right after the header)
static_assert(std::endian::native == std::endian::little,
              "the .hg container assumes a little-endian host");

inline constexpr std::array<char, 4> hg_magic{'H', 'G', 'R', 'F'};
inline constexpr std::uint16_t hg_format_version = 1;

struct HgClassRange {
  std::uint64_t offset = 0;
  std::uint64_t bytes = 0;
};

struct HgFileHeader {
  std::uint16_t version = hg_format_version;
  std::uint8_t precision_bytes = 0;  // 4 or 8
  std::uint8_t rank = 0;
  std::vector<std::uint64_t> extents;
  std::vector<std::vector<double>> coords;
  std::vector<HgClassRange> classes;  // coarse first
  std::uint64_t header_bytes = 0;     // offset of class 0
  std::uint64_t file_bytes = 0;

  int class_count() const { return static_cast<int>(classes.size()); }
  std::uint64_t class_elements(int cls) const {
    return classes[static_cast<std::size_t>(cls)].bytes / precision_bytes;
  }
  std::uint64_t total_elements() const {
    std::uint64_t n = 1;
    for (auto e : extents) n *= e;
    return n;
  }
};

namespace detail {

template <class U>
void put_pod(std::ostream& os, U value) {
  static_assert(std::is_trivially_copyable_v<U>);
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class U>
U get_pod(std::istream& is, const std::string& path) {
  static_assert(std::is_trivially_copyable_v<U>);
  U value{};
  is.read(reinterpret_cast<char*>(&value), sizeof value);
  require(bool(is), path + ": truncated file");
  return value;
}

inline std::uint64_t hg_header_bytes(int rank, const std::vector<std::uint64_t>& extents,
                                     int class_count) {
  std::uint64_t coords_bytes = 0;
  for (auto e : extents) coords_bytes += 8 * e;
  return 4 + 2 + 1 + 1 + 8 * static_cast<std::uint64_t>(rank) + coords_bytes + 2 +
         16 * static_cast<std::uint64_t>(class_count);
}

}  // namespace detail

/// Writes the refactored array; returns the total byte count. Identical
/// inputs produce byte-identical files.
template <class T>
std::uint64_t write_file(const RefactoredArray<T>& r, const std::string& path) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  const GridHierarchy& g = r.hierarchy;
  const int classes = g.class_count();
  std::vector<std::uint64_t> extents;
  for (int d = 0; d < g.rank(); ++d) extents.push_back(g.finest_extent(d));

  const std::uint64_t header_bytes = detail::hg_header_bytes(g.rank(), extents, classes);
  std::vector<HgClassRange> table(static_cast<std::size_t>(classes));
  std::uint64_t offset = header_bytes;
  for (int cls = 0; cls < classes; ++cls) {
    const std::uint64_t bytes = g.class_node_count(cls) * sizeof(T);
    table[static_cast<std::size_t>(cls)] = {offset, bytes};
    offset += bytes;
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  detail::require(bool(os), path + ": cannot open for writing");
  os.write(hg_magic.data(), hg_magic.size());
  detail::put_pod(os, hg_format_version);
  detail::put_pod(os, static_cast<std::uint8_t>(sizeof(T)));
  detail::put_pod(os, static_cast<std::uint8_t>(g.rank()));
  for (auto e : extents) detail::put_pod(os, e);
  for (int d = 0; d < g.rank(); ++d)
    os.write(reinterpret_cast<const char*>(g.coords(d).data()),
             static_cast<std::streamsize>(8 * g.coords(d).size()));
  detail::put_pod(os, static_cast<std::uint16_t>(classes));
  for (const auto& c : table) {
    detail::put_pod(os, c.offset);
    detail::put_pod(os, c.bytes);
  }
  for (int cls = 0; cls < classes; ++cls) {
    const auto payload = extract_class(r, cls);
    os.write(reinterpret_cast<const char*>(payload.values.data()),
             static_cast<std::streamsize>(payload.values.size() * sizeof(T)));
  }
  os.flush();
  detail::require(bool(os), path + ": write failed");
  return offset;
}

/// Header-only summary; payloads are not touched.
inline HgFileHeader read_info(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  detail::require(bool(is), path + ": cannot open");
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  detail::require(bool(is) && magic == hg_magic, path + ": not an HGRF file (bad magic)");
  HgFileHeader h;
  h.version = detail::get_pod<std::uint16_t>(is, path);
  detail::require(h.version == hg_format_version,
                  path + ": unsupported format version " + std::to_string(h.version));
  h.precision_bytes = detail::get_pod<std::uint8_t>(is, path);
  detail::require(h.precision_bytes == 4 || h.precision_bytes == 8,
                  path + ": invalid precision code");
  h.rank = detail::get_pod<std::uint8_t>(is, path);
  detail::require(h.rank >= 1 && h.rank <= max_rank, path + ": invalid dimension count");
  h.extents.resize(h.rank);
  for (auto& e : h.extents) {
    e = detail::get_pod<std::uint64_t>(is, path);
    detail::require(detail::is_pow2_plus_1(e), path + ": dimension size must be 2^k+1");
  }
  h.coords.resize(h.rank);
  for (std::size_t d = 0; d < h.coords.size(); ++d) {
    auto& c = h.coords[d];
    c.resize(h.extents[d]);
    is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(8 * c.size()));
    detail::require(bool(is), path + ": truncated coordinate table");
  }
  const auto classes = detail::get_pod<std::uint16_t>(is, path);
  detail::require(classes >= 1, path + ": empty class table");
  h.classes.resize(classes);
  for (auto& c : h.classes) {
    c.offset = detail::get_pod<std::uint64_t>(is, path);
    c.bytes = detail::get_pod<std::uint64_t>(is, path);
  }
  h.header_bytes = detail::hg_header_bytes(h.rank, h.extents, classes);
  detail::require(h.classes.front().offset == h.header_bytes, path + ": corrupt class table");
  std::uint64_t expect = h.header_bytes;
  std::uint64_t elements = 0;
  for (const auto& c : h.classes) {
    detail::require(c.offset == expect, path + ": class offsets must be contiguous and increasing");
    detail::require(c.bytes % h.precision_bytes == 0, path + ": class byte length misaligned");
    expect = c.offset + c.bytes;
    elements += c.bytes / h.precision_bytes;
  }
  detail::require(elements == h.total_elements(),
                  path + ": class sizes do not cover the array");
  h.file_bytes = expect;
  return h;
}

template <class T>
struct PrefixRead {
  RefactoredArray<T> array;
  std::uint64_t bytes_read = 0;
};

/// Reads the header plus classes 0..upto_class only; omitted classes are
/// zero-filled. bytes_read counts header plus retrieved payload.
template <class T>
PrefixRead<T> read_prefix(const std::string& path, int upto_class) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  const HgFileHeader h = read_info(path);
  detail::require(h.precision_bytes == sizeof(T),
                  path + ": file precision is " + std::to_string(h.precision_bytes) +
                      " bytes per element, reader expects " + std::to_string(sizeof(T)));
  detail::require(upto_class >= 0 && upto_class < h.class_count(),
                  path + ": class index out of range");

  GridHierarchy g(h.coords);
  detail::require(g.class_count() == h.class_count(), path + ": class count mismatch");
  PrefixRead<T> result{{ndarray<T>(g.finest_extents()), g}, 0};

  std::ifstream is(path, std::ios::binary);
  detail::require(bool(is), path + ": cannot open");
  is.seekg(static_cast<std::streamoff>(h.header_bytes));
  std::vector<T> buffer;
  for (int cls = 0; cls <= upto_class; ++cls) {
    buffer.resize(h.class_elements(cls));
    is.read(reinterpret_cast<char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(T)));
    detail::require(bool(is), path + ": truncated payload");
    scatter_class(result.array, cls, std::span<const T>(buffer));
  }
  result.bytes_read = h.header_bytes;
  for (int cls = 0; cls <= upto_class; ++cls)
    result.bytes_read += h.classes[static_cast<std::size_t>(cls)].bytes;
  return result;
}

}  // namespace hgr
