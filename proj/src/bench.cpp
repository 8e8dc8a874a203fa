#include "hybridsort/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <execution>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>
#include <tbb/global_control.h>

#include "hybridsort/parallel.hpp"
#include "hybridsort/sorter.hpp"
#include "merge_kernels.hpp"

namespace hybridsort::bench {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kDefaultWorkingSet = 64 * 1024;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  if (samples.size() % 2 == 1) return samples[mid];
  return (samples[mid - 1] + samples[mid]) / 2;
}

double elapsed_us(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double, std::micro>(to - from).count();
}

/// Runs `body` once as warm-up and then `reps` timed times; `prepare`
/// runs untimed before each call and `check` untimed after it.
template <class Prepare, class Body, class Check>
double median_runtime_us(unsigned reps, Prepare&& prepare, Body&& body,
                         Check&& check) {
  std::vector<double> samples;
  samples.reserve(reps);
  for (unsigned r = 0; r <= reps; ++r) {
    prepare();
    const auto start = Clock::now();
    body();
    const auto stop = Clock::now();
    check();
    if (r > 0) samples.push_back(elapsed_us(start, stop));
  }
  // A zero reading means the clock could not resolve the run.
  return std::max(median(std::move(samples)), 1e-3);
}

BenchRecord make_record(std::string suite, const Pattern& pattern,
                        std::size_t size, std::string algorithm,
                        std::string kernel, unsigned threads, unsigned reps,
                        double runtime_us) {
  BenchRecord rec;
  rec.suite = std::move(suite);
  rec.pattern = to_string(pattern);
  rec.size = size;
  rec.algorithm = std::move(algorithm);
  rec.kernel = std::move(kernel);
  rec.threads = threads;
  rec.reps = reps;
  rec.runtime_us = runtime_us;
  rec.rate_me_s = static_cast<double>(size) / runtime_us;
  return rec;
}

std::size_t available_memory_bytes() {
  const long pages = ::sysconf(_SC_AVPHYS_PAGES);
  const long page_size = ::sysconf(_SC_PAGESIZE);
  if (pages <= 0 || page_size <= 0) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page_size);
}

void require_reps(const BenchOptions& options) {
  if (options.reps == 0) {
    throw std::invalid_argument("bench: at least one repetition required");
  }
}

std::vector<std::size_t> working_sets(const BenchOptions& options) {
  if (options.sizes.empty()) return {kDefaultWorkingSet};
  return options.sizes;
}

void validate_runs(std::span<const Element> data, std::size_t run_length,
                   std::uint64_t expected_hash, std::string_view what) {
  for (std::size_t at = 0; at < data.size(); at += run_length) {
    const auto run = data.subspan(at, std::min(run_length, data.size() - at));
    if (!std::is_sorted(run.begin(), run.end())) {
      throw ValidationError(std::string(what) + ": run at " +
                            std::to_string(at) + " is not ascending");
    }
  }
  if (multiset_hash(data) != expected_hash) {
    throw ValidationError(std::string(what) + ": elements lost or altered");
  }
}

void put_field(std::ostream& os, std::string_view field) {
  if (field.find_first_of(",\n\r\"") != std::string_view::npos) {
    throw std::invalid_argument("csv field contains a delimiter: " +
                                std::string(field));
  }
  os << field;
}

void put_double(std::ostream& os, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  os.write(buf, res.ptr - buf);
}

template <class T>
T parse_number(std::string_view text, std::string_view column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("csv: bad " + std::string(column) + " '" +
                                std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <class L, std::size_t N>
void merge_pool(MergeKernel kind, std::span<const Element> pool,
                std::span<Element> out) {
  using Kernel = detail::BitonicMerge<L, N>;
  detail::NoTrace trace;
  const Element* in = pool.data();
  Element* dst = out.data();
  const std::size_t pairs = pool.size() / N;
  switch (kind) {
    case MergeKernel::Serial:
      for (std::size_t p = 0; p < pairs; ++p) {
        Kernel::serial(in + p * N, in + p * N + N / 2, dst + p * N, trace);
      }
      break;
    case MergeKernel::Vectorized:
      for (std::size_t p = 0; p < pairs; ++p) {
        Kernel::vectorized(in + p * N, in + p * N + N / 2, dst + p * N, trace);
      }
      break;
    case MergeKernel::Hybrid:
      for (std::size_t p = 0; p < pairs; ++p) {
        Kernel::hybrid(in + p * N, in + p * N + N / 2, dst + p * N, 1, trace);
      }
      break;
  }
}

}  // namespace

Pattern parse_pattern(std::string_view name) {
  if (name == "random") return {Pattern::Kind::Random, 0};
  if (name == "sorted") return {Pattern::Kind::Sorted, 0};
  if (name == "reverse") return {Pattern::Kind::Reverse, 0};
  if (name == "organ-pipe") return {Pattern::Kind::OrganPipe, 0};
  if (name.starts_with("dup-")) {
    const std::string_view digits = name.substr(4);
    std::uint32_t k = 0;
    const auto res =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size() &&
        k > 0) {
      return {Pattern::Kind::Duplicates, k};
    }
  }
  throw std::invalid_argument("unknown input pattern '" + std::string(name) +
                              "' (random, sorted, reverse, organ-pipe, dup-K)");
}

std::string to_string(const Pattern& pattern) {
  switch (pattern.kind) {
    case Pattern::Kind::Random:
      return "random";
    case Pattern::Kind::Sorted:
      return "sorted";
    case Pattern::Kind::Reverse:
      return "reverse";
    case Pattern::Kind::OrganPipe:
      return "organ-pipe";
    case Pattern::Kind::Duplicates:
      return "dup-" + std::to_string(pattern.distinct);
  }
  return "unknown";
}

std::vector<Element> gen_input(const Pattern& pattern, std::size_t size,
                               std::uint64_t seed) {
  std::vector<Element> out(size);
  std::mt19937_64 rng(seed);
  auto draw = [&rng] { return static_cast<std::uint32_t>(rng()); };
  for (std::size_t i = 0; i < size; ++i) {
    switch (pattern.kind) {
      case Pattern::Kind::Random:
        out[i] = static_cast<Element>(draw());
        break;
      case Pattern::Kind::Sorted:
        out[i] = static_cast<Element>(i);
        break;
      case Pattern::Kind::Reverse:
        out[i] = static_cast<Element>(size - 1 - i);
        break;
      case Pattern::Kind::OrganPipe:
        out[i] = static_cast<Element>(i < size / 2 ? i : size - 1 - i);
        break;
      case Pattern::Kind::Duplicates:
        out[i] = static_cast<Element>(draw() % pattern.distinct);
        break;
    }
  }
  return out;
}

std::uint64_t multiset_hash(std::span<const Element> data) noexcept {
  std::uint64_t sum = 0;
  for (Element x : data) sum += splitmix64(static_cast<std::uint32_t>(x));
  return sum;
}

void validate_output(std::span<const Element> output,
                     std::uint64_t expected_hash, std::string_view what) {
  if (!std::is_sorted(output.begin(), output.end())) {
    throw ValidationError(std::string(what) + ": output is not ascending");
  }
  if (multiset_hash(output) != expected_hash) {
    throw ValidationError(std::string(what) +
                          ": output is not a permutation of the input");
  }
}

void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << kCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    put_field(os, r.suite);
    os << ',';
    put_field(os, r.pattern);
    os << ',' << r.size << ',';
    put_field(os, r.algorithm);
    os << ',';
    put_field(os, r.kernel);
    os << ',' << r.threads << ',' << r.reps << ',';
    put_double(os, r.runtime_us);
    os << ',';
    put_double(os, r.rate_me_s);
    os << '\n';
  }
}

std::vector<BenchRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::invalid_argument("csv: missing or unexpected header");
  }
  std::vector<BenchRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string_view> f = split_fields(line);
    if (f.size() != 9) {
      throw std::invalid_argument("csv: expected 9 fields, got " +
                                  std::to_string(f.size()));
    }
    BenchRecord r;
    r.suite = f[0];
    r.pattern = f[1];
    r.size = parse_number<std::size_t>(f[2], "size");
    r.algorithm = f[3];
    r.kernel = f[4];
    r.threads = parse_number<unsigned>(f[5], "threads");
    r.reps = parse_number<unsigned>(f[6], "reps");
    r.runtime_us = parse_number<double>(f[7], "runtime_us");
    r.rate_me_s = parse_number<double>(f[8], "rate_me_s");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<std::size_t> default_overall_sizes() {
  std::vector<std::size_t> sizes;
  for (unsigned p = 9; p <= 27; p += 3) sizes.push_back(std::size_t{1} << p);
  return sizes;
}

std::vector<BenchRecord> bench_geometry_sweep(const BenchOptions& options) {
  require_reps(options);
  struct Row {
    std::size_t registers;
    ColumnNetwork network;
    std::string label;
  };
  const std::vector<Row> rows{{4, ColumnNetwork::OddEven, "R4"},
                              {8, ColumnNetwork::OddEven, "R8"},
                              {16, ColumnNetwork::OddEven, "R16"},
                              {16, ColumnNetwork::Best16, "R16*"},
                              {32, ColumnNetwork::OddEven, "R32"}};
  constexpr std::size_t kMaxRunLength = 64;

  std::vector<BenchRecord> records;
  for (std::size_t requested : working_sets(options)) {
    for (const Row& row : rows) {
      SortConfig cfg;
      cfg.registers = row.registers;
      cfg.column_network = row.network;
      cfg.kernel = options.kernel;
      cfg.backend = options.backend;
      validate(cfg);
      const std::size_t block = cfg.threshold();
      const std::size_t size = requested - requested % block;
      if (size == 0) continue;
      const std::vector<Element> input =
          gen_input(options.pattern, size, options.seed);
      const std::uint64_t hash = multiset_hash(input);
      std::vector<Element> work(size);

      for (std::size_t x = row.registers;
           x <= std::min(block, kMaxRunLength); x *= 2) {
        const std::string name = "neon-ms/" + row.label + "/X" + std::to_string(x);
        const double us = median_runtime_us(
            options.reps, [&] { std::copy(input.begin(), input.end(), work.begin()); },
            [&] {
              for (std::size_t at = 0; at < size; at += block) {
                in_register_sort_partial(std::span(work).subspan(at, block),
                                         cfg, x);
              }
            },
            [&] { validate_runs(work, x, hash, name); });
        records.push_back(make_record("geometry", options.pattern, size, name,
                                      std::string(to_string(options.kernel)), 1,
                                      options.reps, us));
      }
    }
  }
  return records;
}

std::vector<BenchRecord> bench_merge_kernels(const BenchOptions& options) {
  require_reps(options);
  require_backend(options.backend);
  std::vector<MergeKernel> kinds{MergeKernel::Serial, MergeKernel::Vectorized,
                                 MergeKernel::Hybrid};
  if (options.only_kernel) kinds = {*options.only_kernel};

  std::vector<BenchRecord> records;
  for (std::size_t requested : working_sets(options)) {
    for (std::size_t half : {8u, 16u, 32u}) {
      const std::size_t n = 2 * half;
      const std::size_t size = requested - requested % n;
      if (size == 0) continue;
      // Pool of independent run pairs, each half sorted.
      std::vector<Element> pool = gen_input(options.pattern, size, options.seed);
      for (std::size_t at = 0; at < size; at += half) {
        std::sort(pool.begin() + at, pool.begin() + at + half);
      }
      const std::uint64_t hash = multiset_hash(pool);
      std::vector<Element> out(size);

      for (MergeKernel kind : kinds) {
        const std::string name = std::string(to_string(kind)) + "-kernel/2x" +
                                 std::to_string(half);
        const double us = median_runtime_us(
            options.reps, [] {},
            [&] {
              dispatch_lanes(options.backend, [&]<class L>() {
                detail::dispatch_size(n, [&]<std::size_t N>() {
                  merge_pool<L, N>(kind, pool, out);
                });
              });
            },
            [&] { validate_runs(out, n, hash, name); });
        records.push_back(make_record("kernels", options.pattern, size, name,
                                      std::string(to_string(kind)), 1,
                                      options.reps, us));
      }
    }
  }
  return records;
}

std::vector<BenchRecord> bench_overall(const BenchOptions& options) {
  require_reps(options);
  const std::vector<std::size_t> sizes =
      options.sizes.empty() ? default_overall_sizes() : options.sizes;
  const unsigned wide = resolve_workers(options.threads);
  std::vector<unsigned> thread_counts{1};
  if (wide != 1) thread_counts.push_back(wide);

  SortConfig cfg;
  cfg.kernel = options.kernel;
  cfg.backend = options.backend;
  validate(cfg);

  std::vector<BenchRecord> records;
  for (std::size_t size : sizes) {
    // Input, working copy and merge scratch.
    const std::size_t needed = 3 * size * sizeof(Element);
    if (needed > available_memory_bytes()) {
      for (const char* algorithm : {"baseline", "neon-ms"}) {
        for (unsigned threads : thread_counts) {
          BenchRecord skip = make_record("overall", options.pattern, size,
                                         algorithm, "skipped", threads, 0, 1);
          skip.runtime_us = 0;
          skip.rate_me_s = 0;
          records.push_back(std::move(skip));
        }
      }
      if (options.log != nullptr) {
        *options.log << "warning: skipping size " << size << ": needs "
                     << needed << " bytes of memory\n";
      }
      continue;
    }

    const std::vector<Element> input =
        gen_input(options.pattern, size, options.seed);
    const std::uint64_t hash = multiset_hash(input);
    std::vector<Element> work(size);
    auto reset = [&] { std::copy(input.begin(), input.end(), work.begin()); };

    for (unsigned threads : thread_counts) {
      const double baseline_us = median_runtime_us(
          options.reps, reset,
          [&] {
            if (threads == 1) {
              std::sort(work.begin(), work.end());
            } else {
              tbb::global_control limit(
                  tbb::global_control::max_allowed_parallelism, threads);
              std::sort(std::execution::par, work.begin(), work.end());
            }
          },
          [&] { validate_output(work, hash, "baseline"); });
      records.push_back(make_record("overall", options.pattern, size,
                                    "baseline", "none", threads, options.reps,
                                    baseline_us));

      const double ours_us = median_runtime_us(
          options.reps, reset, [&] { sort_parallel(work, cfg, threads); },
          [&] { validate_output(work, hash, "neon-ms"); });
      records.push_back(make_record("overall", options.pattern, size,
                                    "neon-ms",
                                    std::string(to_string(options.kernel)),
                                    threads, options.reps, ours_us));
    }
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const BenchRecord& x, const BenchRecord& y) {
                     return std::tie(x.algorithm, x.threads, x.size) <
                            std::tie(y.algorithm, y.threads, y.size);
                   });
  return records;
}

}  // namespace hybridsort::bench
