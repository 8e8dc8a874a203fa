#include "hybridsort/parallel.hpp"

#include <algorithm>
#include <barrier>
#include <stdexcept>
#include <string>
#include <thread>

namespace hybridsort {

CoRank corank_partition(std::span<const Element> a, std::span<const Element> b,
                        std::size_t k) {
  if (k > a.size() + b.size()) {
    throw std::out_of_range("corank_partition: rank " + std::to_string(k) +
                            " exceeds " + std::to_string(a.size() + b.size()));
  }
  std::size_t lo = k > b.size() ? k - b.size() : 0;
  std::size_t hi = std::min(k, a.size());
  // Smallest i whose complement j = k - i leaves no b[j-1] >= a[i], i.e.
  // no element of a that must precede an already taken element of b.
  while (lo < hi) {
    const std::size_t i = lo + (hi - lo) / 2;
    const std::size_t j = k - i;
    if (j > 0 && b[j - 1] >= a[i]) {
      lo = i + 1;
    } else {
      hi = i;
    }
  }
  return CoRank{lo, k - lo};
}

std::vector<std::size_t> make_chunks(std::size_t n, unsigned workers) {
  workers = std::max(workers, 1u);
  std::vector<std::size_t> offsets(workers + 1);
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  for (std::size_t t = 0; t < workers; ++t) {
    offsets[t + 1] = offsets[t] + base + (t < extra ? 1 : 0);
  }
  return offsets;
}

PassPlan plan_merge_pass(std::span<const Element> src,
                         std::span<const std::size_t> runs, unsigned workers) {
  if (runs.size() < 2 || runs.front() != 0 || runs.back() != src.size()) {
    throw std::invalid_argument("plan_merge_pass: run boundaries must span "
                                "the source buffer");
  }
  workers = std::max(workers, 1u);
  PassPlan plan;
  plan.runs.assign(runs.begin(), runs.end());
  plan.tasks.resize(workers);
  const std::vector<std::size_t> targets = make_chunks(src.size(), workers);
  const std::size_t run_count = runs.size() - 1;

  for (std::size_t r = 0; r < run_count; r += 2) {
    const std::size_t first = runs[r];
    const std::size_t mid = runs[r + 1];
    const bool paired = r + 1 < run_count;
    const std::size_t last = paired ? runs[r + 2] : mid;
    const std::span<const Element> a = src.subspan(first, mid - first);
    const std::span<const Element> b = src.subspan(mid, last - mid);

    for (unsigned t = 0; t < workers; ++t) {
      const std::size_t from = std::max(first, targets[t]);
      const std::size_t to = std::min(last, targets[t + 1]);
      if (from >= to) continue;
      if (!paired) {
        plan.tasks[t].push_back(MergeTask{{from, to}, {to, to}, {from, to}});
        continue;
      }
      const CoRank lo = corank_partition(a, b, from - first);
      const CoRank hi = corank_partition(a, b, to - first);
      plan.tasks[t].push_back(MergeTask{{first + lo.i, first + hi.i},
                                        {mid + lo.j, mid + hi.j},
                                        {from, to}});
    }
  }
  return plan;
}

std::vector<std::size_t> merged_runs(std::span<const std::size_t> runs) {
  std::vector<std::size_t> next;
  for (std::size_t r = 0; r < runs.size(); r += 2) next.push_back(runs[r]);
  if (next.back() != runs.back()) next.push_back(runs.back());
  return next;
}

unsigned resolve_workers(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(std::thread::hardware_concurrency(), 1u);
}

void sort_parallel(std::span<Element> data, const SortConfig& cfg,
                   unsigned workers, ParallelPlan* plan) {
  validate(cfg);
  const unsigned threads = resolve_workers(workers);
  const std::size_t n = data.size();
  const std::vector<std::size_t> chunks = make_chunks(n, threads);
  if (plan != nullptr) {
    *plan = ParallelPlan{threads, chunks, {}};
  }
  if (threads == 1 || n < 2) {
    sort_single(data, cfg);
    return;
  }

  const MergeOptions options = cfg.merge_options();
  std::vector<Element> scratch(n);
  std::span<Element> src = data;
  std::span<Element> dst = scratch;
  std::vector<std::size_t> runs = chunks;
  PassPlan current;
  bool first_phase = true;
  bool done = false;

  // Runs on one thread between phases: advance buffers, plan next pass.
  auto advance = [&]() noexcept {
    if (!first_phase) {
      std::swap(src, dst);
      runs = merged_runs(runs);
    }
    first_phase = false;
    if (runs.size() <= 2) {
      done = true;
      return;
    }
    current = plan_merge_pass(src, runs, threads);
    if (plan != nullptr) plan->passes.push_back(current);
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(threads), advance);

  auto work = [&](unsigned t) {
    sort_single(data.subspan(chunks[t], chunks[t + 1] - chunks[t]), cfg);
    sync.arrive_and_wait();
    while (!done) {
      for (const MergeTask& task : current.tasks[t]) {
        const std::span<const Element> in = src;
        merge_runs(in.subspan(task.a.begin, task.a.size()),
                   in.subspan(task.b.begin, task.b.size()),
                   dst.subspan(task.out.begin, task.out.size()), options);
      }
      sync.arrive_and_wait();
    }
    if (src.data() != data.data()) {
      std::copy(src.begin() + chunks[t], src.begin() + chunks[t + 1],
                data.begin() + chunks[t]);
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
}

}  // namespace hybridsort
