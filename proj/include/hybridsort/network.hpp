#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hybridsort/element.hpp"

namespace hybridsort {

/// A compare-exchange: after application `lo` holds the minimum and `hi`
/// the maximum of the two channels. Always normalized so that lo < hi.
struct Comparator {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  friend constexpr bool operator==(Comparator, Comparator) = default;
  friend constexpr auto operator<=>(Comparator, Comparator) = default;
};

using Layer = std::vector<Comparator>;

/// Fixed sequence of comparators over `n` channels, grouped into layers of
/// channel-disjoint comparators. A layer maps onto one batch of lane-wide
/// min/max operations in the vectorized executors.
class ComparatorNetwork {
 public:
  ComparatorNetwork() = default;

  /// Throws std::invalid_argument when a comparator is out of range, not
  /// normalized, or shares a channel with another comparator of its layer.
  ComparatorNetwork(std::size_t n, std::vector<Layer> layers);

  /// Packs a flat comparator list into layers greedily: each comparator
  /// goes to the earliest layer after the last one touching its channels.
  static ComparatorNetwork from_comparators(std::size_t n,
                                            std::span<const Comparator> list);

  std::size_t channels() const noexcept { return n_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  std::size_t size() const noexcept;
  const std::vector<Layer>& layers() const noexcept { return layers_; }

  /// All comparators in execution order.
  std::vector<Comparator> flatten() const;

  friend bool operator==(const ComparatorNetwork&,
                         const ComparatorNetwork&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Layer> layers_;
};

/// Largest channel count accepted by the power-of-two constructors.
inline constexpr std::size_t kMaxNetworkChannels = 64;

/// Largest channel count verify_zero_one will enumerate (2^n inputs).
inline constexpr std::size_t kMaxZeroOneChannels = 24;

ComparatorNetwork bitonic_sorter(std::size_t n);

/// Batcher's merge-exchange network.
ComparatorNetwork odd_even_sorter(std::size_t n);

/// Green's 60-comparator, depth-10 network for 16 inputs.
ComparatorNetwork best16_sorter();

/// Sorts any input made of two ascending halves. The first layer compares
/// channel i with n-1-i, which folds the reversal of the second half into
/// the network; the remaining log2(n)-1 layers are half-cleaners.
ComparatorNetwork bitonic_merge_network(std::size_t n);

void apply_network(const ComparatorNetwork& net, std::span<Element> data);
std::vector<Element> apply_network(const ComparatorNetwork& net,
                                   std::vector<Element> data);

/// Exhaustive zero-one check: true iff every binary input is sorted.
bool verify_zero_one(const ComparatorNetwork& net);

/// Zero-one check restricted to inputs whose two halves are each ascending,
/// which is the input domain of a merging network.
bool verify_zero_one_merge(const ComparatorNetwork& net);

/// One line per layer: "layer k: (lo,hi) (lo,hi) ...".
std::string to_text(const ComparatorNetwork& net);

/// Graphviz rendering with one node per channel per layer boundary.
std::string to_dot(const ComparatorNetwork& net);

std::ostream& operator<<(std::ostream& os, const ComparatorNetwork& net);

}  // namespace hybridsort
