#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybridsort/element.hpp"
#include "hybridsort/sorter.hpp"

namespace hybridsort {

/// Half-open index range.
struct Range {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }
  friend bool operator==(Range, Range) = default;
};

struct CoRank {
  std::size_t i = 0;  ///< elements taken from a
  std::size_t j = 0;  ///< elements taken from b
  friend bool operator==(CoRank, CoRank) = default;
};

/// Split point of the merge path at output rank k: the first k outputs of
/// merging a and b are a[0, i) and b[0, j), i + j == k. Ties go to a, so an
/// element of a precedes an equal element of b. Binary search over the
/// diagonal, O(log min(|a|, |b|)). Throws std::out_of_range if k > |a|+|b|.
CoRank corank_partition(std::span<const Element> a, std::span<const Element> b,
                        std::size_t k);

/// One worker's share of a merge pass: merge src[a] with src[b] into
/// dst[out]. An empty `b` means copy `a` forward.
struct MergeTask {
  Range a;
  Range b;
  Range out;
};

struct PassPlan {
  /// Run boundaries in the source buffer before the pass.
  std::vector<std::size_t> runs;
  /// tasks[t] are executed by worker t.
  std::vector<std::vector<MergeTask>> tasks;
};

struct ParallelPlan {
  unsigned workers = 1;
  /// workers + 1 offsets; chunk t is [chunks[t], chunks[t+1]).
  std::vector<std::size_t> chunks;
  std::vector<PassPlan> passes;
};

/// T contiguous chunks covering [0, n) whose sizes differ by at most one.
std::vector<std::size_t> make_chunks(std::size_t n, unsigned workers);

/// Plans one pairwise merge pass over sorted runs of `src` delimited by
/// `runs` (first 0, last src.size()). The pass output [0, n) is cut into
/// `workers` equal ranges; each range is mapped back to input ranges of
/// the run pairs it overlaps with corank_partition. An unpaired last run
/// is copied forward.
PassPlan plan_merge_pass(std::span<const Element> src,
                         std::span<const std::size_t> runs, unsigned workers);

/// Run boundaries after executing a pass over `runs`.
std::vector<std::size_t> merged_runs(std::span<const std::size_t> runs);

/// Resolves a requested worker count: 0 means hardware parallelism.
unsigned resolve_workers(unsigned requested) noexcept;

/// Sorts with `workers` threads (0 = hardware parallelism): each worker
/// sort_single()s its chunk, then ceil(log2 T) balanced merge passes run
/// fork-join with a barrier between passes. The calling thread acts as
/// worker 0. If `plan` is non-null it receives the executed plan.
void sort_parallel(std::span<Element> data, const SortConfig& cfg,
                   unsigned workers, ParallelPlan* plan = nullptr);

}  // namespace hybridsort
