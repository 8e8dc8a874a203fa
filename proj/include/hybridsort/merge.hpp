#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hybridsort/element.hpp"
#include "hybridsort/lanes.hpp"
#include "hybridsort/network.hpp"

namespace hybridsort {

/// Which implementation executes the bitonic merging network.
///  - Serial: one branchless compare-exchange at a time.
///  - Vectorized: one layer at a time as lane-wide min/max plus shuffles.
///  - Hybrid: vectorized leading layers; once the network has split into two
///    independent halves, the lower half stays vectorized while the upper
///    half runs serially, both inside the same per-layer loop body so their
///    instruction streams interleave.
enum class MergeKernel { Serial, Vectorized, Hybrid };

std::string_view to_string(MergeKernel kind) noexcept;
std::optional<MergeKernel> parse_kernel(std::string_view name) noexcept;

struct MinMax {
  Element min;
  Element max;
  friend constexpr bool operator==(MinMax, MinMax) = default;
};

/// Compare-exchange written as two selects on one flag (cmov/csel), never a
/// branch around a swap.
constexpr MinMax comparator_branchless(Element a, Element b) noexcept {
  const bool swap = b < a;
  return {swap ? b : a, swap ? a : b};
}

inline constexpr std::size_t kMinKernelSize = 2 * kLanes;
inline constexpr std::size_t kMaxKernelSize = 256;

/// Largest kernel size (both runs together) at which the hybrid kernel is
/// used by merge_runs unless forced; above it the serial half spills.
inline constexpr std::size_t kHybridKernelLimit = 32;

struct KernelOptions {
  MergeKernel kind = MergeKernel::Hybrid;
  LaneBackend backend = LaneBackend::Emulated;
  /// Hybrid only: number of leading layers (the fold layer included) that
  /// run vectorized on all channels before the half split. 1 splits right
  /// after the fold; log2(n) degenerates to the vectorized kernel.
  unsigned hybrid_split = 1;
};

/// Merges two ascending runs of equal length n/2 into `out` (length n)
/// with the bitonic merging network. n must be a power of two in [8, 256].
/// Sortedness of the inputs is asserted in debug builds only.
void merge_kernel(std::span<const Element> a, std::span<const Element> b,
                  std::span<Element> out, const KernelOptions& options = {});

std::vector<Element> merge_kernel(std::span<const Element> a,
                                  std::span<const Element> b,
                                  const KernelOptions& options = {});

/// Comparators the kernel executes for size n, in issue order, as recorded
/// by an instrumented run.
std::vector<Comparator> trace_merge_kernel(std::size_t n,
                                           const KernelOptions& options = {});

struct MergeOptions {
  MergeKernel kind = MergeKernel::Hybrid;
  LaneBackend backend = LaneBackend::Emulated;
  /// Elements taken from a run per kernel call; the kernel merges
  /// 2 * window elements. Power of two in [4, 128].
  std::size_t window = 16;
  unsigned hybrid_split = 1;
  /// Use `kind` verbatim even where Hybrid would be swapped for Vectorized.
  bool force_kernel = false;
};

/// Kernel that merge_runs actually runs for `options`.
MergeKernel effective_kernel(const MergeOptions& options) noexcept;

/// Streaming merge of two ascending runs of any length into `out`, which
/// must not overlap the inputs. Keeps a window of in-flight elements: each
/// kernel call emits its lower half and carries the upper half, refilling
/// from the run whose next element is smaller. Returns the written prefix.
std::span<Element> merge_runs(std::span<const Element> a,
                              std::span<const Element> b,
                              std::span<Element> out,
                              const MergeOptions& options = {});

}  // namespace hybridsort
