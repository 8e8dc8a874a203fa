#include "hybridsort/merge.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <stdexcept>
#include <string>

#include "merge_kernels.hpp"

namespace hybridsort {
namespace detail {

void require_kernel_size(std::size_t n) {
  if (!is_power_of_two(n) || n < kMinKernelSize || n > kMaxKernelSize) {
    throw std::invalid_argument("merge kernel size must be a power of two in "
                                "[8, 256], got " +
                                std::to_string(n));
  }
}

void require_hybrid_split(std::size_t n, unsigned split) {
  if (split < 1 || split > log2_exact(n)) {
    throw std::invalid_argument("hybrid split " + std::to_string(split) +
                                " outside [1, " +
                                std::to_string(log2_exact(n)) + "]");
  }
}

}  // namespace detail

namespace {

struct Recorder {
  std::vector<Comparator>* out;
  void operator()(std::size_t lo, std::size_t hi) const {
    out->push_back(Comparator{static_cast<std::uint32_t>(lo),
                              static_cast<std::uint32_t>(hi)});
  }
};

// Streaming merge with a fixed kernel; see merge_runs. A run's final
// partial chunk is padded with kSentinel; the pads sort behind every real
// element, so clipping the output at |a|+|b| drops exactly the pads.
template <class L, std::size_t N, MergeKernel Kind>
void stream_merge(std::span<const Element> a, std::span<const Element> b,
                  Element* out, unsigned split) {
  constexpr std::size_t half = N / 2;
  using Kernel = detail::BitonicMerge<L, N>;
  detail::NoTrace trace;

  if (a.empty() || b.empty()) {
    const std::span<const Element> only = a.empty() ? b : a;
    std::copy(only.begin(), only.end(), out);
    return;
  }

  std::array<Element, half> pad_a;
  std::array<Element, half> pad_b;
  // Next chunk of `run` at `pos`, in place when complete.
  auto chunk = [](std::span<const Element> run, std::size_t& pos,
                  std::array<Element, half>& pad) -> const Element* {
    const Element* p = run.data() + pos;
    const std::size_t left = run.size() - pos;
    if (left >= half) {
      pos += half;
      return p;
    }
    std::copy_n(p, left, pad.begin());
    std::fill(pad.begin() + left, pad.end(), kSentinel);
    pos = run.size();
    return pad.data();
  };

  std::size_t ia = 0;
  std::size_t ib = 0;
  std::size_t remaining = a.size() + b.size();
  std::array<Element, N> window;
  std::array<Element, half> carry;
  const Element* first_a = chunk(a, ia, pad_a);
  const Element* first_b = chunk(b, ib, pad_b);
  Kernel::run(Kind, first_a, first_b, window.data(), split, trace);

  for (;;) {
    const std::size_t emit = std::min(half, remaining);
    out = std::copy_n(window.data(), emit, out);
    remaining -= emit;

    const bool a_left = ia < a.size();
    const bool b_left = ib < b.size();
    if (!a_left && !b_left) {
      std::copy_n(window.data() + half, remaining, out);
      return;
    }
    std::copy_n(window.data() + half, half, carry.data());
    const Element* next = a_left && (!b_left || a[ia] <= b[ib])
                              ? chunk(a, ia, pad_a)
                              : chunk(b, ib, pad_b);
    Kernel::run(Kind, carry.data(), next, window.data(), split, trace);
  }
}

template <class L, std::size_t N>
void stream_merge_kind(MergeKernel kind, std::span<const Element> a,
                       std::span<const Element> b, Element* out,
                       unsigned split) {
  switch (kind) {
    case MergeKernel::Serial:
      return stream_merge<L, N, MergeKernel::Serial>(a, b, out, split);
    case MergeKernel::Vectorized:
      return stream_merge<L, N, MergeKernel::Vectorized>(a, b, out, split);
    case MergeKernel::Hybrid:
      return stream_merge<L, N, MergeKernel::Hybrid>(a, b, out, split);
  }
}

}  // namespace

std::string_view to_string(MergeKernel kind) noexcept {
  switch (kind) {
    case MergeKernel::Serial:
      return "serial";
    case MergeKernel::Vectorized:
      return "vectorized";
    case MergeKernel::Hybrid:
      return "hybrid";
  }
  return "unknown";
}

std::optional<MergeKernel> parse_kernel(std::string_view name) noexcept {
  if (name == "serial") return MergeKernel::Serial;
  if (name == "vectorized") return MergeKernel::Vectorized;
  if (name == "hybrid") return MergeKernel::Hybrid;
  return std::nullopt;
}

void merge_kernel(std::span<const Element> a, std::span<const Element> b,
                  std::span<Element> out, const KernelOptions& options) {
  const std::size_t n = a.size() + b.size();
  if (a.size() != b.size()) {
    throw std::invalid_argument("merge_kernel: runs differ in length");
  }
  detail::require_kernel_size(n);
  if (out.size() < n) {
    throw std::invalid_argument("merge_kernel: output buffer too small");
  }
  if (options.kind == MergeKernel::Hybrid) {
    detail::require_hybrid_split(n, options.hybrid_split);
  }
  assert(std::is_sorted(a.begin(), a.end()) && "run a not ascending");
  assert(std::is_sorted(b.begin(), b.end()) && "run b not ascending");

  dispatch_lanes(options.backend, [&]<class L>() {
    detail::dispatch_size(n, [&]<std::size_t N>() {
      detail::NoTrace trace;
      detail::BitonicMerge<L, N>::run(options.kind, a.data(), b.data(),
                                      out.data(), options.hybrid_split, trace);
    });
  });
}

std::vector<Element> merge_kernel(std::span<const Element> a,
                                  std::span<const Element> b,
                                  const KernelOptions& options) {
  std::vector<Element> out(a.size() + b.size());
  merge_kernel(a, b, out, options);
  return out;
}

std::vector<Comparator> trace_merge_kernel(std::size_t n,
                                           const KernelOptions& options) {
  detail::require_kernel_size(n);
  if (options.kind == MergeKernel::Hybrid) {
    detail::require_hybrid_split(n, options.hybrid_split);
  }
  std::vector<Element> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = static_cast<Element>(i % (n / 2));
  std::vector<Element> out(n);
  std::vector<Comparator> trace;
  dispatch_lanes(options.backend, [&]<class L>() {
    detail::dispatch_size(n, [&]<std::size_t N>() {
      Recorder rec{&trace};
      detail::BitonicMerge<L, N, Recorder>::run(
          options.kind, data.data(), data.data() + n / 2, out.data(),
          options.hybrid_split, rec);
    });
  });
  return trace;
}

MergeKernel effective_kernel(const MergeOptions& options) noexcept {
  if (options.kind == MergeKernel::Hybrid && !options.force_kernel &&
      2 * options.window > kHybridKernelLimit) {
    return MergeKernel::Vectorized;
  }
  return options.kind;
}

std::span<Element> merge_runs(std::span<const Element> a,
                              std::span<const Element> b,
                              std::span<Element> out,
                              const MergeOptions& options) {
  const std::size_t total = a.size() + b.size();
  if (out.size() < total) {
    throw std::invalid_argument("merge_runs: output holds " +
                                std::to_string(out.size()) + " elements, " +
                                std::to_string(total) + " required");
  }
  const std::size_t n = 2 * options.window;
  detail::require_kernel_size(n);
  const MergeKernel kind = effective_kernel(options);
  if (kind == MergeKernel::Hybrid) {
    detail::require_hybrid_split(n, options.hybrid_split);
  }
  assert(std::is_sorted(a.begin(), a.end()) && "run a not ascending");
  assert(std::is_sorted(b.begin(), b.end()) && "run b not ascending");

  dispatch_lanes(options.backend, [&]<class L>() {
    detail::dispatch_size(n, [&]<std::size_t N>() {
      stream_merge_kind<L, N>(kind, a, b, out.data(), options.hybrid_split);
    });
  });
  return out.first(total);
}

}  // namespace hybridsort
