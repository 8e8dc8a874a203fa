#include "hybridsort/block.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "register_ops.hpp"

namespace hybridsort {
namespace {

// Enough registers for the largest supported column network.
constexpr std::size_t kMaxRegisters = kMaxNetworkChannels;

// Plain array: std::array would drop the vector type's alignment attribute.
template <class L>
struct RegisterFile {
  typename L::vec regs[kMaxRegisters];
  typename L::vec& operator[](std::size_t i) noexcept { return regs[i]; }
  const typename L::vec& operator[](std::size_t i) const noexcept {
    return regs[i];
  }
  typename L::vec* data() noexcept { return regs; }
};

template <class L>
void load_rows(const Block& b, RegisterFile<L>& regs) {
  for (std::size_t r = 0; r < b.registers(); ++r) {
    regs[r] = L::load(b.row(r).data());
  }
}

template <class L>
void store_rows(const RegisterFile<L>& regs, Block& b) {
  for (std::size_t r = 0; r < b.registers(); ++r) {
    L::store(b.row(r).data(), regs[r]);
  }
}

// Vector path only covers the native register shape.
bool vector_shape(const Block& b) {
  return b.lanes() == kLanes && b.registers() <= kMaxRegisters;
}

void require_vector_shape(const Block& b, LaneBackend backend) {
  require_backend(backend);
  if (backend == LaneBackend::Native && !vector_shape(b)) {
    throw std::invalid_argument("native backend needs " +
                                std::to_string(kLanes) +
                                "-lane rows and at most 64 registers");
  }
}

}  // namespace

Block::Block(std::size_t registers, std::size_t lanes)
    : registers_(registers), lanes_(lanes), data_(registers * lanes) {
  if (registers == 0 || lanes == 0) {
    throw std::invalid_argument("Block: registers and lanes must be >= 1");
  }
}

Block Block::from_flat(std::size_t registers, std::size_t lanes,
                       std::span<const Element> flat) {
  Block b(registers, lanes);
  if (flat.size() != b.data_.size()) {
    throw std::invalid_argument("Block::from_flat: expected " +
                                std::to_string(b.data_.size()) +
                                " elements, got " +
                                std::to_string(flat.size()));
  }
  std::copy(flat.begin(), flat.end(), b.data_.begin());
  return b;
}

Block column_sort(Block block, const ComparatorNetwork& net,
                  LaneBackend backend) {
  if (net.channels() != block.registers()) {
    throw std::invalid_argument("column_sort: network has " +
                                std::to_string(net.channels()) +
                                " channels but block has " +
                                std::to_string(block.registers()) +
                                " registers");
  }
  require_vector_shape(block, backend);
  const std::vector<Comparator> comparators = net.flatten();
  if (vector_shape(block)) {
    dispatch_lanes(backend, [&]<class L>() {
      RegisterFile<L> regs;
      load_rows<L>(block, regs);
      detail::column_sort_regs<L>(regs.data(), comparators);
      store_rows<L>(regs, block);
    });
    return block;
  }
  for (Comparator c : comparators) {
    for (std::size_t lane = 0; lane < block.lanes(); ++lane) {
      const Element a = block.at(c.lo, lane);
      const Element b = block.at(c.hi, lane);
      block.at(c.lo, lane) = std::min(a, b);
      block.at(c.hi, lane) = std::max(a, b);
    }
  }
  return block;
}

Block transpose_base(Block block, LaneBackend backend) {
  if (block.registers() != block.lanes()) {
    throw std::invalid_argument("transpose_base: block is " +
                                std::to_string(block.registers()) + "x" +
                                std::to_string(block.lanes()) +
                                ", not square");
  }
  return transpose_rw(std::move(block), backend);
}

Block transpose_rw(Block block, LaneBackend backend) {
  const std::size_t rows = block.registers();
  const std::size_t lanes = block.lanes();
  if (rows % lanes != 0) {
    throw std::invalid_argument("transpose_rw: " + std::to_string(rows) +
                                " registers is not a multiple of " +
                                std::to_string(lanes) + " lanes");
  }
  require_vector_shape(block, backend);
  if (vector_shape(block)) {
    dispatch_lanes(backend, [&]<class L>() {
      RegisterFile<L> in;
      RegisterFile<L> out;
      load_rows<L>(block, in);
      detail::transpose_rw_regs<L>(in.data(), out.data(), rows);
      store_rows<L>(out, block);
    });
    return block;
  }
  const std::size_t tiles = rows / lanes;
  Block out(rows, lanes);
  for (std::size_t q = 0; q < tiles; ++q) {
    for (std::size_t i = 0; i < lanes; ++i) {
      for (std::size_t j = 0; j < lanes; ++j) {
        out.at(j * tiles + q, i) = block.at(q * lanes + i, j);
      }
    }
  }
  return out;
}

}  // namespace hybridsort
