#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsort/element.hpp"
#include "hybridsort/lanes.hpp"
#include "hybridsort/merge.hpp"

namespace hybridsort::bench {

/// Input shapes: random (uniform 32-bit), sorted (0..n-1), reverse
/// (n-1..0), dup-K (uniform over K distinct values) and organ-pipe
/// (ascending then descending).
struct Pattern {
  enum class Kind { Random, Sorted, Reverse, Duplicates, OrganPipe };
  Kind kind = Kind::Random;
  std::uint32_t distinct = 0;  ///< Duplicates only

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Throws std::invalid_argument for unknown names.
Pattern parse_pattern(std::string_view name);
std::string to_string(const Pattern& pattern);

/// Deterministic for a fixed seed on every platform (raw mt19937 output,
/// no library distributions).
std::vector<Element> gen_input(const Pattern& pattern, std::size_t size,
                               std::uint64_t seed);

/// Order-independent hash of a multiset of elements.
std::uint64_t multiset_hash(std::span<const Element> data) noexcept;

/// Raised when a timed run produced unsorted output or lost elements.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ValidationError unless `output` is ascending and hashes to
/// `expected_hash`.
void validate_output(std::span<const Element> output,
                     std::uint64_t expected_hash, std::string_view what);

struct BenchRecord {
  std::string suite;
  std::string pattern;
  std::size_t size = 0;
  std::string algorithm;
  std::string kernel;
  unsigned threads = 1;
  unsigned reps = 0;  ///< 0 marks a skipped measurement
  double runtime_us = 0;
  double rate_me_s = 0;  ///< size / runtime_us

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "suite,pattern,size,algorithm,kernel,threads,reps,runtime_us,rate_me_s";

void write_csv(std::ostream& os, std::span<const BenchRecord> records);

/// Throws std::invalid_argument on a malformed header or row.
std::vector<BenchRecord> read_csv(std::istream& is);

struct BenchOptions {
  /// overall: sizes to sort (empty = 2^9 .. 2^27 stepping x8);
  /// geometry/kernels: elements processed per repetition (empty = 64K).
  std::vector<std::size_t> sizes;
  Pattern pattern;
  unsigned threads = 0;  ///< 0 = hardware parallelism
  MergeKernel kernel = MergeKernel::Hybrid;
  /// kernels suite: restrict to this kernel instead of all three.
  std::optional<MergeKernel> only_kernel;
  unsigned reps = 5;
  std::uint64_t seed = 42;
  LaneBackend backend = LaneBackend::Emulated;
  /// Diagnostics (skips) go here when set.
  std::ostream* log = nullptr;
};

std::vector<std::size_t> default_overall_sizes();

/// In-register stage timings for R in {4, 8, 16, 16*, 32} and the run
/// lengths X reachable inside each block (X <= 64). Each repetition
/// brings a fresh input to X-sorted runs block by block. Algorithm names
/// read "neon-ms/R<R>[*]/X<X>"; 16* is the best16 column network.
std::vector<BenchRecord> bench_geometry_sweep(const BenchOptions& options);

/// Merge kernel speed for 2x8->16, 2x16->32 and 2x32->64 over a pool of
/// random sorted run pairs. Algorithm names read "<kernel>-kernel/2x<h>";
/// rate_me_s is elements per microsecond.
std::vector<BenchRecord> bench_merge_kernels(const BenchOptions& options);

/// Full sort rates for neon-ms and the standard library baseline at one
/// thread and at `threads`, sorted by (algorithm, threads, size). Sizes
/// that would not fit in available memory yield a skipped row.
std::vector<BenchRecord> bench_overall(const BenchOptions& options);

}  // namespace hybridsort::bench
