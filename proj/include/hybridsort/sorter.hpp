#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "hybridsort/element.hpp"
#include "hybridsort/lanes.hpp"
#include "hybridsort/merge.hpp"
#include "hybridsort/network.hpp"

namespace hybridsort {

/// Network used for the column sort of an R x W block.
enum class ColumnNetwork {
  Auto,     ///< Best16 when R == 16, OddEven otherwise.
  Bitonic,
  OddEven,
  Best16,   ///< R must be 16.
};

std::string_view to_string(ColumnNetwork network) noexcept;

struct SortConfig {
  std::size_t registers = 16;  ///< R
  std::size_t lanes = kLanes;  ///< W
  MergeKernel kernel = MergeKernel::Hybrid;
  LaneBackend backend = LaneBackend::Emulated;
  ColumnNetwork column_network = ColumnNetwork::Auto;
  /// Elements per side fed to the kernel by the streaming run merge.
  std::size_t merge_window = 16;
  unsigned hybrid_split = 1;
  /// Keep `kernel` even for streaming windows above kHybridKernelLimit.
  bool force_kernel = false;
  /// Called after every merge pass with the run length it produced.
  std::function<void(std::size_t run_length)> pass_hook;

  /// Elements sorted by one in-register sort (R * W).
  std::size_t threshold() const noexcept { return registers * lanes; }

  MergeOptions merge_options() const noexcept;
};

/// Throws std::invalid_argument when the geometry or options are
/// unsupported: W must be the native lane count, R a power of two in
/// [W, 64] and Best16 requires R == 16.
void validate(const SortConfig& cfg);

/// Network that in_register_sort applies for `cfg`.
const ComparatorNetwork& column_network_for(const SortConfig& cfg);

/// Sorts exactly R * W elements in place: load as R registers, column
/// sort, R x W transpose into W runs of R, then log2(W) row-merge passes.
void in_register_sort(std::span<Element> data, const SortConfig& cfg);

/// Runs the in-register stages only until the block consists of ascending
/// runs of `run_length` elements, which must be R, 2R, ..., R * W.
void in_register_sort_partial(std::span<Element> data, const SortConfig& cfg,
                              std::size_t run_length);

/// Single-threaded sort, in place from the caller's view; allocates a
/// scratch buffer of data.size() elements. Not stable.
void sort_single(std::span<Element> data, const SortConfig& cfg = {});

}  // namespace hybridsort
