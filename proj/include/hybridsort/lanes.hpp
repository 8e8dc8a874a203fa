#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string_view>

#include "hybridsort/element.hpp"

#if defined(HYBRIDSORT_ENABLE_NATIVE)
#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define HYBRIDSORT_NATIVE_NEON 1
#elif defined(__SSE4_1__)
#include <smmintrin.h>
#define HYBRIDSORT_NATIVE_SSE 1
#endif
#endif

namespace hybridsort {

enum class LaneBackend { Emulated, Native };

/// True when this build carries 128-bit lane intrinsics.
constexpr bool native_available() noexcept {
#if defined(HYBRIDSORT_NATIVE_NEON) || defined(HYBRIDSORT_NATIVE_SSE)
  return true;
#else
  return false;
#endif
}

std::string_view to_string(LaneBackend backend) noexcept;
std::optional<LaneBackend> parse_backend(std::string_view name) noexcept;

/// Throws std::invalid_argument if `backend` is Native and unavailable.
void require_backend(LaneBackend backend);

/// Two-vector lane permutation: output lane i takes lane idx[i] of the
/// concatenation x ++ y (0..3 from x, 4..7 from y).
using LanePermutation = std::array<std::uint8_t, kLanes>;

namespace perm {
inline constexpr LanePermutation kLowPairs{0, 1, 4, 5};
inline constexpr LanePermutation kHighPairs{2, 3, 6, 7};
inline constexpr LanePermutation kEvens{0, 2, 4, 6};
inline constexpr LanePermutation kOdds{1, 3, 5, 7};
inline constexpr LanePermutation kInterleaveLow{0, 4, 1, 5};
inline constexpr LanePermutation kInterleaveHigh{2, 6, 3, 7};
inline constexpr LanePermutation kReverse{3, 2, 1, 0};
}  // namespace perm

/// Portable lanes: a vector is a plain array and every permutation is an
/// index remap driven by its LanePermutation table.
struct EmulatedLanes {
  using vec = std::array<Element, kLanes>;
  static constexpr LaneBackend backend = LaneBackend::Emulated;

  static vec load(const Element* p) noexcept {
    vec v;
    std::memcpy(v.data(), p, sizeof(v));
    return v;
  }
  static void store(Element* p, const vec& v) noexcept {
    std::memcpy(p, v.data(), sizeof(v));
  }
  static vec min(const vec& a, const vec& b) noexcept {
    vec r;
    for (std::size_t i = 0; i < kLanes; ++i) r[i] = a[i] < b[i] ? a[i] : b[i];
    return r;
  }
  static vec max(const vec& a, const vec& b) noexcept {
    vec r;
    for (std::size_t i = 0; i < kLanes; ++i) r[i] = a[i] < b[i] ? b[i] : a[i];
    return r;
  }
  template <LanePermutation P>
  static vec permute(const vec& x, const vec& y) noexcept {
    vec r;
    for (std::size_t i = 0; i < kLanes; ++i) {
      r[i] = P[i] < kLanes ? x[P[i]] : y[P[i] - kLanes];
    }
    return r;
  }
  static vec reverse(const vec& x) noexcept {
    return permute<perm::kReverse>(x, x);
  }
};

#if defined(HYBRIDSORT_NATIVE_SSE)

struct NativeLanes {
  using vec = __m128i;
  static constexpr LaneBackend backend = LaneBackend::Native;

  static vec load(const Element* p) noexcept {
    return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
  }
  static void store(Element* p, vec v) noexcept {
    _mm_storeu_si128(reinterpret_cast<__m128i*>(p), v);
  }
  static vec min(vec a, vec b) noexcept { return _mm_min_epi32(a, b); }
  static vec max(vec a, vec b) noexcept { return _mm_max_epi32(a, b); }

  template <LanePermutation P>
  static vec permute(vec x, vec y) noexcept {
    if constexpr (P == perm::kLowPairs) {
      return _mm_unpacklo_epi64(x, y);
    } else if constexpr (P == perm::kHighPairs) {
      return _mm_unpackhi_epi64(x, y);
    } else if constexpr (P == perm::kEvens) {
      return _mm_castps_si128(_mm_shuffle_ps(
          _mm_castsi128_ps(x), _mm_castsi128_ps(y), _MM_SHUFFLE(2, 0, 2, 0)));
    } else if constexpr (P == perm::kOdds) {
      return _mm_castps_si128(_mm_shuffle_ps(
          _mm_castsi128_ps(x), _mm_castsi128_ps(y), _MM_SHUFFLE(3, 1, 3, 1)));
    } else if constexpr (P == perm::kInterleaveLow) {
      return _mm_unpacklo_epi32(x, y);
    } else if constexpr (P == perm::kInterleaveHigh) {
      return _mm_unpackhi_epi32(x, y);
    } else if constexpr (P == perm::kReverse) {
      return _mm_shuffle_epi32(x, _MM_SHUFFLE(0, 1, 2, 3));
    } else {
      static_assert(P != P, "permutation has no native mapping");
    }
  }
  static vec reverse(vec x) noexcept { return permute<perm::kReverse>(x, x); }
};

#elif defined(HYBRIDSORT_NATIVE_NEON)

struct NativeLanes {
  using vec = int32x4_t;
  static constexpr LaneBackend backend = LaneBackend::Native;

  static vec load(const Element* p) noexcept { return vld1q_s32(p); }
  static void store(Element* p, vec v) noexcept { vst1q_s32(p, v); }
  static vec min(vec a, vec b) noexcept { return vminq_s32(a, b); }
  static vec max(vec a, vec b) noexcept { return vmaxq_s32(a, b); }

  template <LanePermutation P>
  static vec permute(vec x, vec y) noexcept {
    if constexpr (P == perm::kLowPairs) {
      return vcombine_s32(vget_low_s32(x), vget_low_s32(y));
    } else if constexpr (P == perm::kHighPairs) {
      return vcombine_s32(vget_high_s32(x), vget_high_s32(y));
    } else if constexpr (P == perm::kEvens) {
      return vuzp1q_s32(x, y);
    } else if constexpr (P == perm::kOdds) {
      return vuzp2q_s32(x, y);
    } else if constexpr (P == perm::kInterleaveLow) {
      return vzip1q_s32(x, y);
    } else if constexpr (P == perm::kInterleaveHigh) {
      return vzip2q_s32(x, y);
    } else if constexpr (P == perm::kReverse) {
      const vec r = vrev64q_s32(x);
      return vextq_s32(r, r, 2);
    } else {
      static_assert(P != P, "permutation has no native mapping");
    }
  }
  static vec reverse(vec x) noexcept { return permute<perm::kReverse>(x, x); }
};

#endif

/// Calls fn.template operator()<Lanes>() for the lane implementation
/// selected by `backend`.
template <class Fn>
decltype(auto) dispatch_lanes(LaneBackend backend, Fn&& fn) {
#if defined(HYBRIDSORT_NATIVE_NEON) || defined(HYBRIDSORT_NATIVE_SSE)
  if (backend == LaneBackend::Native) {
    return fn.template operator()<NativeLanes>();
  }
#else
  require_backend(backend);
#endif
  return fn.template operator()<EmulatedLanes>();
}

}  // namespace hybridsort
