#pragma once

// Register-array routines shared by the Block API and the sort pipeline.

#include <cstddef>
#include <span>

#include "hybridsort/lanes.hpp"
#include "hybridsort/network.hpp"

namespace hybridsort::detail {

template <class L>
inline void compare_exchange(typename L::vec& lo, typename L::vec& hi) {
  const typename L::vec a = lo;
  lo = L::min(a, hi);
  hi = L::max(a, hi);
}

template <class L>
void column_sort_regs(typename L::vec* regs,
                      std::span<const Comparator> comparators) {
  for (Comparator c : comparators) compare_exchange<L>(regs[c.lo], regs[c.hi]);
}

/// In-place 4x4 transpose: afterwards r_j holds former column j.
template <class L>
inline void transpose4(typename L::vec& r0, typename L::vec& r1,
                       typename L::vec& r2, typename L::vec& r3) {
  const auto t0 = L::template permute<perm::kInterleaveLow>(r0, r1);
  const auto t1 = L::template permute<perm::kInterleaveLow>(r2, r3);
  const auto t2 = L::template permute<perm::kInterleaveHigh>(r0, r1);
  const auto t3 = L::template permute<perm::kInterleaveHigh>(r2, r3);
  r0 = L::template permute<perm::kLowPairs>(t0, t1);
  r1 = L::template permute<perm::kHighPairs>(t0, t1);
  r2 = L::template permute<perm::kLowPairs>(t2, t3);
  r3 = L::template permute<perm::kHighPairs>(t2, t3);
}

/// R x 4 transpose by tiles: tile q (rows 4q..4q+3) is transposed and its
/// row j is renamed to output register j*R/4 + q.
template <class L>
void transpose_rw_regs(const typename L::vec* in, typename L::vec* out,
                       std::size_t registers) {
  const std::size_t tiles = registers / kLanes;
  for (std::size_t q = 0; q < tiles; ++q) {
    auto c0 = in[4 * q];
    auto c1 = in[4 * q + 1];
    auto c2 = in[4 * q + 2];
    auto c3 = in[4 * q + 3];
    transpose4<L>(c0, c1, c2, c3);
    out[q] = c0;
    out[tiles + q] = c1;
    out[2 * tiles + q] = c2;
    out[3 * tiles + q] = c3;
  }
}

}  // namespace hybridsort::detail
