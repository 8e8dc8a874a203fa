#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybridsort/element.hpp"
#include "hybridsort/lanes.hpp"
#include "hybridsort/network.hpp"

namespace hybridsort {

/// R x W matrix of elements modelling R vector registers of W lanes.
/// Stored row-major: row r is register r.
class Block {
 public:
  Block(std::size_t registers, std::size_t lanes);

  /// Rows are consecutive runs of `lanes` elements from `flat`.
  static Block from_flat(std::size_t registers, std::size_t lanes,
                         std::span<const Element> flat);

  std::size_t registers() const noexcept { return registers_; }
  std::size_t lanes() const noexcept { return lanes_; }

  std::span<Element> row(std::size_t r) noexcept {
    return {data_.data() + r * lanes_, lanes_};
  }
  std::span<const Element> row(std::size_t r) const noexcept {
    return {data_.data() + r * lanes_, lanes_};
  }
  Element& at(std::size_t r, std::size_t lane) noexcept {
    return data_[r * lanes_ + lane];
  }
  Element at(std::size_t r, std::size_t lane) const noexcept {
    return data_[r * lanes_ + lane];
  }

  std::span<Element> flat() noexcept { return data_; }
  std::span<const Element> flat() const noexcept { return data_; }

  friend bool operator==(const Block&, const Block&) = default;

 private:
  std::size_t registers_;
  std::size_t lanes_;
  std::vector<Element> data_;
};

/// Sorts every column ascending by applying `net` lane-parallel across the
/// rows: each comparator (lo, hi) becomes a lane-wide min/max between
/// rows lo and hi. Requires net.channels() == block.registers().
Block column_sort(Block block, const ComparatorNetwork& net,
                  LaneBackend backend = LaneBackend::Emulated);

/// Square transpose; requires registers() == lanes().
Block transpose_base(Block block, LaneBackend backend = LaneBackend::Emulated);

/// Transposes an R x W block (R a multiple of W) through R/W base
/// transposes. Column j ends up in rows j*R/W .. (j+1)*R/W - 1, so the
/// flattened output holds column j as the contiguous run [j*R, (j+1)*R).
Block transpose_rw(Block block, LaneBackend backend = LaneBackend::Emulated);

}  // namespace hybridsort
