#include "hybridsort/network.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hybridsort {
namespace {

void require_power_of_two(std::size_t n, const char* who) {
  if (n < 2 || !is_power_of_two(n) || n > kMaxNetworkChannels) {
    throw std::invalid_argument(std::string(who) +
                                ": channel count must be a power of two in "
                                "[2, 64], got " +
                                std::to_string(n));
  }
}

Comparator cmp(std::size_t lo, std::size_t hi) {
  return Comparator{static_cast<std::uint32_t>(lo),
                    static_cast<std::uint32_t>(hi)};
}

}  // namespace

ComparatorNetwork::ComparatorNetwork(std::size_t n, std::vector<Layer> layers)
    : n_(n), layers_(std::move(layers)) {
  std::vector<std::size_t> seen(n_, 0);
  std::size_t stamp = 0;
  for (const Layer& layer : layers_) {
    ++stamp;
    for (Comparator c : layer) {
      if (c.lo >= c.hi || c.hi >= n_) {
        throw std::invalid_argument("comparator (" + std::to_string(c.lo) +
                                    "," + std::to_string(c.hi) +
                                    ") invalid for " + std::to_string(n_) +
                                    " channels");
      }
      if (seen[c.lo] == stamp || seen[c.hi] == stamp) {
        throw std::invalid_argument("comparator (" + std::to_string(c.lo) +
                                    "," + std::to_string(c.hi) +
                                    ") reuses a channel within its layer");
      }
      seen[c.lo] = seen[c.hi] = stamp;
    }
  }
}

ComparatorNetwork ComparatorNetwork::from_comparators(
    std::size_t n, std::span<const Comparator> list) {
  std::vector<Layer> layers;
  // next_free[c]: index of the first layer channel c may join.
  std::vector<std::size_t> next_free(n, 0);
  for (Comparator c : list) {
    if (c.lo >= c.hi || c.hi >= n) {
      throw std::invalid_argument("comparator out of range");
    }
    const std::size_t at = std::max(next_free[c.lo], next_free[c.hi]);
    if (at == layers.size()) layers.emplace_back();
    layers[at].push_back(c);
    next_free[c.lo] = next_free[c.hi] = at + 1;
  }
  return ComparatorNetwork(n, std::move(layers));
}

std::size_t ComparatorNetwork::size() const noexcept {
  std::size_t total = 0;
  for (const Layer& layer : layers_) total += layer.size();
  return total;
}

std::vector<Comparator> ComparatorNetwork::flatten() const {
  std::vector<Comparator> out;
  out.reserve(size());
  for (const Layer& layer : layers_) {
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

ComparatorNetwork bitonic_sorter(std::size_t n) {
  require_power_of_two(n, "bitonic_sorter");
  std::vector<Layer> layers;
  // Ascending-only formulation: each merge stage starts with a flip
  // (i against the mirrored channel of its block) instead of alternating
  // sort directions, followed by half-cleaners.
  for (std::size_t block = 2; block <= n; block <<= 1) {
    Layer flip;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t partner = i ^ (block - 1);
      if (partner > i) flip.push_back(cmp(i, partner));
    }
    layers.push_back(std::move(flip));
    for (std::size_t stride = block / 4; stride >= 1; stride >>= 1) {
      Layer half;
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & stride) == 0) half.push_back(cmp(i, i + stride));
      }
      layers.push_back(std::move(half));
    }
  }
  return ComparatorNetwork(n, std::move(layers));
}

ComparatorNetwork odd_even_sorter(std::size_t n) {
  require_power_of_two(n, "odd_even_sorter");
  std::vector<Layer> layers;
  for (std::size_t p = 1; p < n; p <<= 1) {
    for (std::size_t k = p; k >= 1; k >>= 1) {
      Layer layer;
      for (std::size_t j = k % p; j + k < n; j += 2 * k) {
        for (std::size_t i = 0; i < k && i + j + k < n; ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) {
            layer.push_back(cmp(i + j, i + j + k));
          }
        }
      }
      layers.push_back(std::move(layer));
    }
  }
  return ComparatorNetwork(n, std::move(layers));
}

ComparatorNetwork best16_sorter() {
  static constexpr std::array<std::array<std::uint32_t, 2>, 60> kPairs{{
      {0, 13}, {1, 12}, {2, 15}, {3, 14}, {4, 8},  {5, 6},   {7, 11},
      {9, 10},  //
      {0, 5},  {1, 7},  {2, 9},  {3, 4},  {6, 13}, {8, 14},  {10, 15},
      {11, 12},  //
      {0, 1},  {2, 3},  {4, 5},  {6, 8},  {7, 9},  {10, 11}, {12, 13},
      {14, 15},  //
      {0, 2},  {1, 3},  {4, 10}, {5, 11}, {6, 7},  {8, 9},   {12, 14},
      {13, 15},  //
      {1, 2},  {3, 12}, {4, 6},  {5, 7},  {8, 10}, {9, 11},  {13, 14},  //
      {1, 4},  {2, 6},  {5, 8},  {7, 10}, {9, 13}, {11, 14},  //
      {2, 4},  {3, 6},  {9, 12}, {11, 13},  //
      {3, 5},  {6, 8},  {7, 9},  {10, 12},  //
      {3, 4},  {5, 6},  {7, 8},  {9, 10}, {11, 12},  //
      {6, 7},  {8, 9},
  }};
  std::vector<Comparator> list;
  list.reserve(kPairs.size());
  for (auto [lo, hi] : kPairs) list.push_back(Comparator{lo, hi});
  return ComparatorNetwork::from_comparators(16, list);
}

ComparatorNetwork bitonic_merge_network(std::size_t n) {
  require_power_of_two(n, "bitonic_merge_network");
  std::vector<Layer> layers;
  Layer flip;
  for (std::size_t i = 0; i < n / 2; ++i) flip.push_back(cmp(i, n - 1 - i));
  layers.push_back(std::move(flip));
  for (std::size_t stride = n / 4; stride >= 1; stride >>= 1) {
    Layer half;
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & stride) == 0) half.push_back(cmp(i, i + stride));
    }
    layers.push_back(std::move(half));
  }
  return ComparatorNetwork(n, std::move(layers));
}

void apply_network(const ComparatorNetwork& net, std::span<Element> data) {
  if (data.size() != net.channels()) {
    throw std::invalid_argument("apply_network: data length " +
                                std::to_string(data.size()) +
                                " does not match " +
                                std::to_string(net.channels()) + " channels");
  }
  for (const Layer& layer : net.layers()) {
    for (Comparator c : layer) {
      const Element a = data[c.lo];
      const Element b = data[c.hi];
      data[c.lo] = std::min(a, b);
      data[c.hi] = std::max(a, b);
    }
  }
}

std::vector<Element> apply_network(const ComparatorNetwork& net,
                                   std::vector<Element> data) {
  apply_network(net, std::span<Element>(data));
  return data;
}

bool verify_zero_one(const ComparatorNetwork& net) {
  const std::size_t n = net.channels();
  if (n > kMaxZeroOneChannels) {
    throw std::invalid_argument("verify_zero_one: at most 24 channels");
  }
  if (n <= 1) return true;

  // Bit-sliced: word c holds channel c for 64 consecutive input vectors,
  // so min/max become AND/OR.
  static constexpr std::array<std::uint64_t, 6> kLowBits{
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t valid =
      total >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << total) - 1;
  const std::vector<Comparator> comparators = net.flatten();
  std::vector<std::uint64_t> word(n);

  for (std::uint64_t base = 0; base < total; base += 64) {
    for (std::size_t c = 0; c < n; ++c) {
      word[c] = c < 6 ? kLowBits[c]
                      : (((base >> c) & 1) != 0 ? ~std::uint64_t{0} : 0);
    }
    for (Comparator c : comparators) {
      const std::uint64_t a = word[c.lo];
      const std::uint64_t b = word[c.hi];
      word[c.lo] = a & b;
      word[c.hi] = a | b;
    }
    for (std::size_t c = 0; c + 1 < n; ++c) {
      if ((word[c] & ~word[c + 1] & valid) != 0) return false;
    }
  }
  return true;
}

bool verify_zero_one_merge(const ComparatorNetwork& net) {
  const std::size_t n = net.channels();
  if (n % 2 != 0) {
    throw std::invalid_argument("verify_zero_one_merge: odd channel count");
  }
  const std::size_t half = n / 2;
  std::vector<Element> v(n);
  for (std::size_t zeros_a = 0; zeros_a <= half; ++zeros_a) {
    for (std::size_t zeros_b = 0; zeros_b <= half; ++zeros_b) {
      for (std::size_t i = 0; i < half; ++i) {
        v[i] = i < zeros_a ? 0 : 1;
        v[half + i] = i < zeros_b ? 0 : 1;
      }
      apply_network(net, std::span<Element>(v));
      if (!std::is_sorted(v.begin(), v.end())) return false;
    }
  }
  return true;
}

std::string to_text(const ComparatorNetwork& net) {
  std::ostringstream os;
  for (std::size_t k = 0; k < net.depth(); ++k) {
    os << "layer " << k << ":";
    for (Comparator c : net.layers()[k]) {
      os << " (" << c.lo << "," << c.hi << ")";
    }
    os << '\n';
  }
  return os.str();
}

std::string to_dot(const ComparatorNetwork& net) {
  std::ostringstream os;
  os << "digraph network {\n  rankdir=LR;\n  node [shape=point];\n";
  for (std::size_t k = 0; k < net.depth(); ++k) {
    for (Comparator c : net.layers()[k]) {
      os << "  \"L" << k << "_" << c.lo << "\" -> \"L" << k << "_" << c.hi
         << "\" [label=\"" << c.lo << "<" << c.hi << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ComparatorNetwork& net) {
  return os << to_text(net);
}

}  // namespace hybridsort
