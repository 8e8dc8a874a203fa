#pragma once

// Bitonic merge kernels, templated on lane implementation, size and an
// optional comparator tracer.
//
// Channel layout for size N: channels [0, N/2) hold run a and [N/2, N)
// hold run b, both ascending. Layer 0 ("fold") compares i with N-1-i; layer
// l >= 1 compares i with i + N/2^(l+1) wherever that bit of i is clear.
// After the fold no comparator crosses N/2, so the halves are independent.

#include <cstddef>
#include <cstring>

#include "hybridsort/element.hpp"
#include "hybridsort/lanes.hpp"
#include "hybridsort/merge.hpp"

namespace hybridsort::detail {

struct NoTrace {
  void operator()(std::size_t, std::size_t) const noexcept {}
};

template <class Trace>
inline void trace_lanes(Trace& trace, std::size_t lo_vec, std::size_t hi_vec) {
  for (std::size_t l = 0; l < kLanes; ++l) {
    trace(lo_vec * kLanes + l, hi_vec * kLanes + l);
  }
}

template <class Trace>
inline void serial_compare_exchange(Element* d, std::size_t lo, std::size_t hi,
                                    Trace& trace) {
  trace(lo, hi);
  const MinMax r = comparator_branchless(d[lo], d[hi]);
  d[lo] = r.min;
  d[hi] = r.max;
}

template <class L, std::size_t N, class Trace = NoTrace>
struct BitonicMerge {
  static_assert(is_power_of_two(N) && N >= kMinKernelSize &&
                N <= kMaxKernelSize);

  using vec = typename L::vec;
  static constexpr std::size_t kVecs = N / kLanes;
  static constexpr unsigned kLayers = log2_exact(N);

  static constexpr std::size_t stride_of(unsigned layer) noexcept {
    return N >> (layer + 1);
  }

  static void fold_vectorized(vec* v, Trace& trace) {
    for (std::size_t i = 0; i < kVecs / 2; ++i) {
      const std::size_t u = kVecs - 1 - i;
      const vec r = L::reverse(v[u]);
      const vec mx = L::max(v[i], r);
      v[i] = L::min(v[i], r);
      v[u] = L::reverse(mx);
      for (std::size_t l = 0; l < kLanes; ++l) {
        trace(i * kLanes + l, u * kLanes + kLanes - 1 - l);
      }
    }
  }

  // In-register strides: gather the compared lanes of x and y into a/b,
  // min/max, then scatter back with the inverse permutation.
  template <LanePermutation Gather0, LanePermutation Gather1,
            LanePermutation Scatter0, LanePermutation Scatter1>
  static void lane_pair(vec& x, vec& y) {
    const vec a = L::template permute<Gather0>(x, y);
    const vec b = L::template permute<Gather1>(x, y);
    const vec mn = L::min(a, b);
    const vec mx = L::max(a, b);
    x = L::template permute<Scatter0>(mn, mx);
    y = L::template permute<Scatter1>(mn, mx);
  }

  template <std::size_t Stride>
  static void lane_stride(vec& x, vec& y) {
    if constexpr (Stride == 2) {
      lane_pair<perm::kLowPairs, perm::kHighPairs, perm::kLowPairs,
                perm::kHighPairs>(x, y);
    } else {
      static_assert(Stride == 1);
      lane_pair<perm::kEvens, perm::kOdds, perm::kInterleaveLow,
                perm::kInterleaveHigh>(x, y);
    }
  }

  template <std::size_t Stride>
  static void trace_lane_stride(Trace& trace, std::size_t vec_index) {
    const std::size_t base = vec_index * kLanes;
    for (std::size_t i = 0; i < kLanes; ++i) {
      if ((i & Stride) == 0) trace(base + i, base + i + Stride);
    }
  }

  /// One half-cleaner layer over vectors [first, first + count).
  template <std::size_t Stride>
  static void clean_vectorized(vec* v, std::size_t first, std::size_t count,
                               Trace& trace) {
    if constexpr (Stride >= kLanes) {
      constexpr std::size_t d = Stride / kLanes;
      for (std::size_t i = first; i < first + count; ++i) {
        if ((i & d) == 0) {
          const vec a = v[i];
          v[i] = L::min(a, v[i + d]);
          v[i + d] = L::max(a, v[i + d]);
          trace_lanes(trace, i, i + d);
        }
      }
    } else if (count == 1) {
      vec scratch = v[first];
      lane_stride<Stride>(v[first], scratch);
      trace_lane_stride<Stride>(trace, first);
    } else {
      for (std::size_t i = first; i < first + count; i += 2) {
        lane_stride<Stride>(v[i], v[i + 1]);
        trace_lane_stride<Stride>(trace, i);
        trace_lane_stride<Stride>(trace, i + 1);
      }
    }
  }

  /// One half-cleaner layer over scalar channels [first, first + count).
  template <std::size_t Stride>
  static void clean_serial(Element* d, std::size_t first, std::size_t count,
                           Trace& trace) {
    for (std::size_t i = first; i < first + count; ++i) {
      if ((i & Stride) == 0) serial_compare_exchange(d, i, i + Stride, trace);
    }
  }

  template <unsigned Layer = 1>
  static void clean_layers_vectorized(vec* v, std::size_t first,
                                      std::size_t count, unsigned from,
                                      unsigned to, Trace& trace) {
    if constexpr (Layer < kLayers) {
      if (Layer >= from && Layer < to) {
        clean_vectorized<stride_of(Layer)>(v, first, count, trace);
      }
      clean_layers_vectorized<Layer + 1>(v, first, count, from, to, trace);
    }
  }

  static void load(const Element* a, const Element* b, vec* v) {
    for (std::size_t i = 0; i < kVecs / 2; ++i) {
      v[i] = L::load(a + i * kLanes);
      v[kVecs / 2 + i] = L::load(b + i * kLanes);
    }
  }

  static void serial(const Element* a, const Element* b, Element* out,
                     Trace& trace) {
    std::memcpy(out, a, sizeof(Element) * N / 2);
    std::memcpy(out + N / 2, b, sizeof(Element) * N / 2);
    for (std::size_t i = 0; i < N / 2; ++i) {
      serial_compare_exchange(out, i, N - 1 - i, trace);
    }
    serial_layers(out, 0, N, trace);
  }

  template <unsigned Layer = 1>
  static void serial_layers(Element* d, std::size_t first, std::size_t count,
                            Trace& trace) {
    if constexpr (Layer < kLayers) {
      clean_serial<stride_of(Layer)>(d, first, count, trace);
      serial_layers<Layer + 1>(d, first, count, trace);
    }
  }

  static void vectorized(const Element* a, const Element* b, Element* out,
                         Trace& trace) {
    vec v[kVecs];
    load(a, b, v);
    fold_vectorized(v, trace);
    clean_layers_vectorized(v, 0, kVecs, 1, kLayers, trace);
    for (std::size_t i = 0; i < kVecs; ++i) L::store(out + i * kLanes, v[i]);
  }

  template <unsigned Layer = 1>
  static void split_layers(vec* v, Element* upper, unsigned from,
                           Trace& trace) {
    if constexpr (Layer < kLayers) {
      if (Layer >= from) {
        clean_vectorized<stride_of(Layer)>(v, 0, kVecs / 2, trace);
        clean_serial<stride_of(Layer)>(upper, N / 2, N / 2, trace);
      }
      split_layers<Layer + 1>(v, upper, from, trace);
    }
  }

  static void hybrid(const Element* a, const Element* b, Element* out,
                     unsigned split, Trace& trace) {
    vec v[kVecs];
    load(a, b, v);
    fold_vectorized(v, trace);
    clean_layers_vectorized(v, 0, kVecs, 1, split, trace);
    // Upper half leaves the registers; `out` is indexed by channel.
    for (std::size_t i = kVecs / 2; i < kVecs; ++i) {
      L::store(out + i * kLanes, v[i]);
    }
    split_layers(v, out, split, trace);
    for (std::size_t i = 0; i < kVecs / 2; ++i) L::store(out + i * kLanes, v[i]);
  }

  static void run(MergeKernel kind, const Element* a, const Element* b,
                  Element* out, unsigned split, Trace& trace) {
    switch (kind) {
      case MergeKernel::Serial:
        serial(a, b, out, trace);
        return;
      case MergeKernel::Vectorized:
        vectorized(a, b, out, trace);
        return;
      case MergeKernel::Hybrid:
        hybrid(a, b, out, split, trace);
        return;
    }
  }
};

/// Calls fn.template operator()<N>() for the runtime kernel size n.
template <class Fn>
decltype(auto) dispatch_size(std::size_t n, Fn&& fn) {
  switch (n) {
    case 8:
      return fn.template operator()<8>();
    case 16:
      return fn.template operator()<16>();
    case 32:
      return fn.template operator()<32>();
    case 64:
      return fn.template operator()<64>();
    case 128:
      return fn.template operator()<128>();
    default:
      return fn.template operator()<256>();
  }
}

/// Throws std::invalid_argument unless n is a supported kernel size.
void require_kernel_size(std::size_t n);

/// Throws std::invalid_argument unless split is within [1, log2 n].
void require_hybrid_split(std::size_t n, unsigned split);

}  // namespace hybridsort::detail
