#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hgr/error.hpp"

namespace hgr {

/// The three processing-kernel cost shapes: grid (coefficient computation),
/// linear (mass-trans multiplication), iterative (correction solver).
enum class KernelKind { gpk, lpk, ipk };

inline const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::gpk: return "GPK";
    case KernelKind::lpk: return "LPK";
    case KernelKind::ipk: return "IPK";
  }
  return "?";
}

/// Thread-block dimensions of a candidate launch configuration.
struct KernelConfig {
  std::uint64_t bx = 1;
  std::uint64_t by = 1;
  std::uint64_t bz = 1;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

/// Machine and problem constants feeding the cost model.
struct PerfParams {
  std::uint64_t n = 513;                 // elements per dimension
  std::uint64_t transaction_bytes = 32;  // bytes moved per memory transaction
  std::uint64_t element_bytes = 8;       // bytes per element (4 single, 8 double)
  std::uint64_t ghost_elements = 0;      // 0 selects the default of one transaction
  double peak_bandwidth = 1.0;           // bytes per second

  std::uint64_t elements_per_transaction() const { return transaction_bytes / element_bytes; }
  std::uint64_t ghost() const { return ghost_elements ? ghost_elements : elements_per_transaction(); }
};

namespace detail {

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Round an element count up to whole memory transactions.
inline std::uint64_t pad_to_transaction(std::uint64_t elements, std::uint64_t per_transaction) {
  return ceil_div(elements, per_transaction) * per_transaction;
}

inline void check_perf_inputs(const KernelConfig& cfg, const PerfParams& p) {
  require(cfg.bx >= 1 && cfg.by >= 1 && cfg.bz >= 1, "thread-block dimensions must be positive");
  require(p.n >= 1, "problem size must be positive");
  require(p.transaction_bytes >= 1 && p.element_bytes >= 1, "byte sizes must be positive");
  require(p.transaction_bytes % p.element_bytes == 0,
          "transaction size must be a multiple of the element size");
  require(p.peak_bandwidth > 0, "peak bandwidth must be positive");
}

}  // namespace detail

/// Estimated execution time in seconds: transaction-padded elements touched
/// per block, times blocks covering the n^3 domain (ceiling division), times
/// two passes (read + write), times bytes per element, over peak bandwidth.
inline double estimate_time(KernelKind kernel, const KernelConfig& cfg, const PerfParams& p) {
  detail::check_perf_inputs(cfg, p);
  const std::uint64_t spl = p.elements_per_transaction();
  const std::uint64_t blocks_x = detail::ceil_div(p.n, cfg.bx);
  const std::uint64_t blocks_y = detail::ceil_div(p.n, cfg.by);
  const std::uint64_t blocks_z = detail::ceil_div(p.n, cfg.bz);
  std::uint64_t touched = 0;
  switch (kernel) {
    case KernelKind::gpk:
      // halo-extended block, the leading row padded to whole transactions
      touched = detail::pad_to_transaction(cfg.bx + 1, spl) * (cfg.by + 1) * (cfg.bz + 1) *
                blocks_x * blocks_y * blocks_z;
      break;
    case KernelKind::lpk:
      // padded block row plus two ghost transactions per block
      touched = (detail::pad_to_transaction(cfg.bx, spl) + 2 * spl) * cfg.by * cfg.bz *
                blocks_x * blocks_y * blocks_z;
      break;
    case KernelKind::ipk:
      // one ghost fetch per block plus the padded sweep along the fiber
      touched = (detail::pad_to_transaction(p.ghost(), spl) +
                 detail::pad_to_transaction(cfg.bx, spl) * blocks_x) *
                cfg.by * cfg.bz * blocks_y * blocks_z;
      break;
  }
  return static_cast<double>(touched) * 2.0 * static_cast<double>(p.element_bytes) /
         p.peak_bandwidth;
}

struct RankedConfig {
  KernelConfig config;
  int rank = 0;
  double seconds = 0;
};

/// All configurations ordered by estimated time, ranks 1..n, ties broken by
/// input order.
inline std::vector<RankedConfig> rank_configs(std::span<const KernelConfig> configs,
                                              KernelKind kernel, const PerfParams& p) {
  detail::require(!configs.empty(), "rank_configs: configuration list is empty");
  std::vector<RankedConfig> out(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    out[i] = {configs[i], 0, estimate_time(kernel, configs[i], p)};
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return out[a].seconds < out[b].seconds; });
  std::vector<RankedConfig> ranked;
  ranked.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    RankedConfig rc = out[order[r]];
    rc.rank = static_cast<int>(r) + 1;
    ranked.push_back(rc);
  }
  return ranked;
}

/// The k fastest configurations (prefix of rank_configs).
inline std::vector<KernelConfig> top_k(std::span<const KernelConfig> configs, KernelKind kernel,
                                       const PerfParams& p, std::size_t k) {
  detail::require(k <= configs.size(), "top_k: k exceeds the configuration count");
  auto ranked = rank_configs(configs, kernel, p);
  std::vector<KernelConfig> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].config);
  return out;
}

/// Whole-dataset sweeps accumulated over all decomposition levels: per level
/// one coefficient pass, one workspace copy, 5.25 correction passes and an
/// eighth of a pass applying it, summed over dyadically shrinking levels.
constexpr double accumulated_passes() {
  constexpr double passes_per_level = 1.0 + 1.0 + 5.25 + 0.125;
  return passes_per_level / (1.0 - 0.125);  // geometric sum over 1/8-size levels
}

/// Peak refactoring throughput implied by a measured single-pass throughput.
inline double theoretical_peak(double single_pass_bandwidth) {
  detail::require(single_pass_bandwidth > 0, "single-pass throughput must be positive");
  return single_pass_bandwidth / accumulated_passes();
}

/// Seven typical thread-block shapes used as the default candidate set.
inline constexpr std::array<KernelConfig, 7> default_block_configs{{
    {2, 2, 2},
    {4, 4, 4},
    {8, 4, 4},
    {16, 4, 4},
    {32, 4, 4},
    {64, 2, 2},
    {128, 2, 2},
}};

}  // namespace hgr
