#include "hybridsort/sorter.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "merge_kernels.hpp"
#include "register_ops.hpp"

namespace hybridsort {
namespace {

constexpr std::size_t kMaxRegisters = 64;
constexpr std::size_t kMaxBlock = kMaxRegisters * kLanes;

struct CachedNetwork {
  ComparatorNetwork network;
  std::vector<Comparator> comparators;

  explicit CachedNetwork(ComparatorNetwork net)
      : network(std::move(net)), comparators(network.flatten()) {}
};

// Index of R in {4, 8, 16, 32, 64}.
std::size_t register_slot(std::size_t registers) {
  return log2_exact(registers) - 2;
}

const CachedNetwork& cached_network(const SortConfig& cfg) {
  static const std::array<CachedNetwork, 5> odd_even{
      CachedNetwork(odd_even_sorter(4)), CachedNetwork(odd_even_sorter(8)),
      CachedNetwork(odd_even_sorter(16)), CachedNetwork(odd_even_sorter(32)),
      CachedNetwork(odd_even_sorter(64))};
  static const std::array<CachedNetwork, 5> bitonic{
      CachedNetwork(bitonic_sorter(4)), CachedNetwork(bitonic_sorter(8)),
      CachedNetwork(bitonic_sorter(16)), CachedNetwork(bitonic_sorter(32)),
      CachedNetwork(bitonic_sorter(64))};
  static const CachedNetwork best16(best16_sorter());

  switch (cfg.column_network) {
    case ColumnNetwork::Best16:
      return best16;
    case ColumnNetwork::Bitonic:
      return bitonic[register_slot(cfg.registers)];
    case ColumnNetwork::OddEven:
      return odd_even[register_slot(cfg.registers)];
    case ColumnNetwork::Auto:
      break;
  }
  return cfg.registers == 16 ? best16 : odd_even[register_slot(cfg.registers)];
}

// Row merges share merge_runs' rule: Hybrid only up to kHybridKernelLimit.
MergeKernel row_kernel(const SortConfig& cfg, std::size_t n) {
  if (cfg.kernel == MergeKernel::Hybrid && !cfg.force_kernel &&
      n > kHybridKernelLimit) {
    return MergeKernel::Vectorized;
  }
  return cfg.kernel;
}

template <class L>
void in_register_impl(Element* data, const SortConfig& cfg,
                      std::span<const Comparator> comparators,
                      std::size_t run_length) {
  using vec = typename L::vec;
  const std::size_t registers = cfg.registers;
  vec regs[kMaxRegisters];
  vec columns[kMaxRegisters];

  for (std::size_t r = 0; r < registers; ++r) {
    regs[r] = L::load(data + r * kLanes);
  }
  detail::column_sort_regs<L>(regs, comparators);
  // Only the first `registers` entries are read; GCC cannot see that.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmaybe-uninitialized"
  detail::transpose_rw_regs<L>(regs, columns, registers);
#pragma GCC diagnostic pop
  for (std::size_t r = 0; r < registers; ++r) {
    L::store(data + r * kLanes, columns[r]);
  }

  // Row merge: W runs of R become one run of R * W.
  std::array<Element, kMaxBlock> merged;
  const std::size_t block = cfg.threshold();
  for (std::size_t len = registers; len < run_length; len *= 2) {
    const std::size_t n = 2 * len;
    const MergeKernel kind = row_kernel(cfg, n);
    detail::dispatch_size(n, [&]<std::size_t N>() {
      detail::NoTrace trace;
      for (std::size_t at = 0; at < block; at += N) {
        detail::BitonicMerge<L, N>::run(kind, data + at, data + at + N / 2,
                                        merged.data() + at, cfg.hybrid_split,
                                        trace);
      }
    });
    std::copy_n(merged.data(), block, data);
  }
}

template <class L>
void sort_blocks(std::span<Element> data, const SortConfig& cfg) {
  const std::size_t block = cfg.threshold();
  const std::span<const Comparator> comparators =
      cached_network(cfg).comparators;
  const std::size_t full = data.size() - data.size() % block;
  for (std::size_t at = 0; at < full; at += block) {
    in_register_impl<L>(data.data() + at, cfg, comparators, block);
  }
  if (full < data.size()) {
    std::array<Element, kMaxBlock> padded;
    const std::size_t tail = data.size() - full;
    std::copy_n(data.data() + full, tail, padded.data());
    std::fill(padded.begin() + tail, padded.begin() + block, kSentinel);
    in_register_impl<L>(padded.data(), cfg, comparators, block);
    std::copy_n(padded.data(), tail, data.data() + full);
  }
}

}  // namespace

std::string_view to_string(ColumnNetwork network) noexcept {
  switch (network) {
    case ColumnNetwork::Auto:
      return "auto";
    case ColumnNetwork::Bitonic:
      return "bitonic";
    case ColumnNetwork::OddEven:
      return "odd-even";
    case ColumnNetwork::Best16:
      return "best16";
  }
  return "unknown";
}

MergeOptions SortConfig::merge_options() const noexcept {
  MergeOptions options;
  options.kind = kernel;
  options.backend = backend;
  options.window = merge_window;
  options.hybrid_split = hybrid_split;
  options.force_kernel = force_kernel;
  return options;
}

void validate(const SortConfig& cfg) {
  if (cfg.lanes != kLanes) {
    throw std::invalid_argument("SortConfig: lane count must be " +
                                std::to_string(kLanes) + " for 32-bit elements");
  }
  if (!is_power_of_two(cfg.registers) || cfg.registers < cfg.lanes ||
      cfg.registers > kMaxRegisters) {
    throw std::invalid_argument(
        "SortConfig: register count must be a power of two in [" +
        std::to_string(cfg.lanes) + ", 64], got " +
        std::to_string(cfg.registers));
  }
  if (cfg.column_network == ColumnNetwork::Best16 && cfg.registers != 16) {
    throw std::invalid_argument("SortConfig: best16 network needs R == 16");
  }
  require_backend(cfg.backend);
  const std::size_t window_kernel = 2 * cfg.merge_window;
  detail::require_kernel_size(window_kernel);
  if (cfg.kernel == MergeKernel::Hybrid) {
    // The split must fit every kernel size the pipeline uses.
    const std::size_t smallest = std::min(window_kernel, 2 * cfg.registers);
    detail::require_hybrid_split(smallest, cfg.hybrid_split);
  }
}

const ComparatorNetwork& column_network_for(const SortConfig& cfg) {
  validate(cfg);
  return cached_network(cfg).network;
}

void in_register_sort(std::span<Element> data, const SortConfig& cfg) {
  in_register_sort_partial(data, cfg, cfg.threshold());
}

void in_register_sort_partial(std::span<Element> data, const SortConfig& cfg,
                              std::size_t run_length) {
  validate(cfg);
  if (data.size() != cfg.threshold()) {
    throw std::invalid_argument("in_register_sort: expected " +
                                std::to_string(cfg.threshold()) +
                                " elements, got " +
                                std::to_string(data.size()));
  }
  if (run_length < cfg.registers || run_length > cfg.threshold() ||
      !is_power_of_two(run_length)) {
    throw std::invalid_argument("in_register_sort: run length " +
                                std::to_string(run_length) +
                                " is not reachable inside the block");
  }
  const std::span<const Comparator> comparators =
      cached_network(cfg).comparators;
  dispatch_lanes(cfg.backend, [&]<class L>() {
    in_register_impl<L>(data.data(), cfg, comparators, run_length);
  });
}

void sort_single(std::span<Element> data, const SortConfig& cfg) {
  validate(cfg);
  if (data.size() <= 1) return;

  dispatch_lanes(cfg.backend, [&]<class L>() { sort_blocks<L>(data, cfg); });

  const std::size_t n = data.size();
  const std::size_t block = cfg.threshold();
  if (n <= block) return;

  const MergeOptions options = cfg.merge_options();
  std::vector<Element> scratch(n);
  std::span<Element> src = data;
  std::span<Element> dst = scratch;
  for (std::size_t width = block; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      if (mid == hi) {
        std::copy(src.begin() + lo, src.begin() + hi, dst.begin() + lo);
      } else {
        merge_runs(src.subspan(lo, mid - lo), src.subspan(mid, hi - mid),
                   dst.subspan(lo, hi - lo), options);
      }
    }
    std::swap(src, dst);
    if (cfg.pass_hook) cfg.pass_hook(std::min(2 * width, n));
  }
  if (src.data() != data.data()) std::copy(src.begin(), src.end(), data.begin());
}

}  // namespace hybridsort
