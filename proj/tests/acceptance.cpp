// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. The bench executable path is passed as
// the first argument.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hybridsort/bench.hpp"
#include "hybridsort/merge.hpp"
#include "hybridsort/network.hpp"
#include "hybridsort/parallel.hpp"
#include "hybridsort/sorter.hpp"
#include "support/oracles.hpp"

using namespace hybridsort;

namespace {

// Pinned limits.
constexpr double kCountsBudgetS = 1.0;
constexpr double kZeroOneBudgetS = 10.0;
constexpr double kOracleBudgetS = 300.0;
constexpr std::size_t kKernelPairs = 10000;
constexpr std::size_t kMaxExhaustiveLength = 4096;
constexpr std::size_t kRandomInputs = 100;
constexpr std::size_t kMaxRandomLength = std::size_t{1} << 22;
constexpr std::size_t kCorankMaxLength = 16;
constexpr int kCorankRandomTrials = 40;
constexpr unsigned kThreadCounts[] = {1, 2, 3, 7, 8, 64};
constexpr const char* kPatterns[] = {"random", "sorted", "reverse", "organ-pipe",
                                     "dup-16"};
constexpr MergeKernel kKinds[] = {MergeKernel::Serial, MergeKernel::Vectorized,
                                  MergeKernel::Hybrid};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& outcome) {
  std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << id << "] " << name
            << ": " << outcome.detail << std::endl;
  if (!outcome.pass) ++failures;
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

// ---------------------------------------------------------------- inputs

/// Input shapes checked exhaustively by length.
std::vector<Element> pattern_input(const char* pattern, std::size_t n,
                                   std::uint64_t seed) {
  return bench::gen_input(bench::parse_pattern(pattern), n, seed);
}

/// Sizes of the random inputs: log-uniform up to the maximum, the first
/// one exactly the maximum.
std::vector<std::size_t> random_sizes() {
  std::mt19937_64 rng(2022);
  std::uniform_real_distribution<double> exponent(
      0.0, std::log2(static_cast<double>(kMaxRandomLength)));
  std::vector<std::size_t> sizes{kMaxRandomLength};
  while (sizes.size() < kRandomInputs) {
    sizes.push_back(static_cast<std::size_t>(std::exp2(exponent(rng))));
  }
  return sizes;
}

std::vector<Element> random_input(std::size_t index, std::size_t n) {
  const char* pattern = index % 2 == 0 ? "random" : "dup-1000";
  return pattern_input(pattern, n, 7000 + index);
}

/// Every sort the equivalence suites exercise, labelled for diagnostics.
struct Sorter {
  std::string label;
  std::function<void(std::vector<Element>&)> run;
};

std::vector<Sorter> sorters(LaneBackend backend) {
  SortConfig cfg;
  cfg.backend = backend;
  std::vector<Sorter> out;
  out.push_back({"sort_single", [cfg](std::vector<Element>& v) { sort_single(v, cfg); }});
  for (unsigned t : kThreadCounts) {
    out.push_back({"sort_parallel/T" + std::to_string(t),
                   [cfg, t](std::vector<Element>& v) { sort_parallel(v, cfg, t); }});
  }
  return out;
}

/// Visits every (label, input) of the oracle-equivalence suite.
template <class Visit>
void for_each_equivalence_input(Visit&& visit) {
  for (const char* pattern : kPatterns) {
    for (std::size_t n = 0; n <= kMaxExhaustiveLength; ++n) {
      visit(std::string(pattern) + "/" + std::to_string(n),
            pattern_input(pattern, n, n));
    }
  }
  const auto sizes = random_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    visit("random-input/" + std::to_string(sizes[i]), random_input(i, sizes[i]));
  }
}

/// Sorted run pairs for the kernel suites.
template <class Visit>
void for_each_kernel_pair(Visit&& visit) {
  std::mt19937_64 rng(99);
  for (std::size_t n = 8; n <= 64; n *= 2) {
    for (std::size_t p = 0; p < kKernelPairs; ++p) {
      // Alternate wide and narrow value ranges so ties are common.
      const Element range = p % 4 == 0 ? 2 : (p % 4 == 1 ? 16 : 1 << 30);
      visit(n, oracle::random_sorted(rng, n / 2, -range, range),
            oracle::random_sorted(rng, n / 2, -range, range));
    }
  }
  // n = 8, every pair of ascending binary runs of length 4.
  for (std::size_t za = 0; za <= 4; ++za) {
    for (std::size_t zb = 0; zb <= 4; ++zb) {
      std::vector<Element> a(4, 1);
      std::vector<Element> b(4, 1);
      std::fill_n(a.begin(), za, 0);
      std::fill_n(b.begin(), zb, 0);
      visit(8, a, b);
    }
  }
}

// ---------------------------------------------------------------- criteria

Outcome network_counts() {
  const auto start = Clock::now();
  const std::map<std::size_t, std::size_t> bitonic{{4, 6}, {8, 24}, {16, 80}, {32, 240}};
  const std::map<std::size_t, std::size_t> odd_even{{4, 5}, {8, 19}, {16, 63}, {32, 191}};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& [n, count] : bitonic) {
    const std::size_t got = bitonic_sorter(n).size();
    ok &= got == count;
    detail << "bitonic" << n << "=" << got << " ";
  }
  for (const auto& [n, count] : odd_even) {
    const std::size_t got = odd_even_sorter(n).size();
    ok &= got == count;
    detail << "odd-even" << n << "=" << got << " ";
  }
  const std::size_t best = best16_sorter().size();
  ok &= best == 60;
  detail << "best16=" << best;
  const double elapsed = seconds_since(start);
  ok &= elapsed < kCountsBudgetS;
  detail << " in " << fmt_seconds(elapsed);
  return {ok, detail.str()};
}

Outcome zero_one() {
  const auto start = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (std::size_t n : {4u, 8u, 16u}) {
    const bool b = verify_zero_one(bitonic_sorter(n));
    const bool o = verify_zero_one(odd_even_sorter(n));
    ok &= b && o;
    if (!b) detail << "bitonic" << n << " fails; ";
    if (!o) detail << "odd-even" << n << " fails; ";
  }
  const bool best = verify_zero_one(best16_sorter());
  ok &= best;
  if (!best) detail << "best16 fails; ";
  // Cross-check the fast path on best16 with per-input scalar enumeration.
  const bool scalar = oracle::zero_one_by_enumeration(best16_sorter());
  ok &= scalar;
  if (!scalar) detail << "best16 fails scalar enumeration; ";
  const double elapsed = seconds_since(start);
  ok &= elapsed < kZeroOneBudgetS;
  detail << "all 2^n binary inputs sorted, in " << fmt_seconds(elapsed);
  return {ok, detail.str()};
}

Outcome kernel_equivalence() {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  for_each_kernel_pair([&](std::size_t, const std::vector<Element>& a,
                           const std::vector<Element>& b) {
    ++pairs;
    const auto expected = oracle::two_pointer_merge(a, b);
    const auto serial = merge_kernel(a, b, {MergeKernel::Serial});
    const auto vectorized = merge_kernel(a, b, {MergeKernel::Vectorized});
    const auto hybrid = merge_kernel(a, b, {MergeKernel::Hybrid});
    if (serial != vectorized || vectorized != hybrid || serial != expected) {
      ++mismatches;
    }
  });
  return {mismatches == 0, std::to_string(pairs) + " run pairs, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const auto all = sorters(LaneBackend::Emulated);
  std::size_t inputs = 0;
  std::size_t mismatches = 0;
  std::string first_failure;
  for_each_equivalence_input([&](const std::string& label,
                                 const std::vector<Element>& input) {
    ++inputs;
    std::vector<Element> expected = input;
    std::sort(expected.begin(), expected.end());
    for (const Sorter& s : all) {
      std::vector<Element> v = input;
      s.run(v);
      if (v != expected) {
        if (mismatches++ == 0) first_failure = s.label + " on " + label;
      }
    }
  });
  const double elapsed = seconds_since(start);
  std::string detail = std::to_string(inputs) + " inputs x " +
                       std::to_string(all.size()) + " sorts, " +
                       std::to_string(mismatches) + " mismatches, in " +
                       fmt_seconds(elapsed);
  if (!first_failure.empty()) detail += "; first: " + first_failure;
  return {mismatches == 0 && elapsed < kOracleBudgetS, detail};
}

Outcome backend_parity() {
  if (!native_available()) {
    return {true, "native backend not built for this host; nothing to compare"};
  }
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  for_each_kernel_pair([&](std::size_t, const std::vector<Element>& a,
                           const std::vector<Element>& b) {
    for (MergeKernel kind : kKinds) {
      ++compared;
      if (merge_kernel(a, b, {kind, LaneBackend::Emulated}) !=
          merge_kernel(a, b, {kind, LaneBackend::Native})) {
        ++mismatches;
      }
    }
  });
  const auto emulated = sorters(LaneBackend::Emulated);
  const auto native = sorters(LaneBackend::Native);
  for_each_equivalence_input([&](const std::string&, const std::vector<Element>& input) {
    for (std::size_t s = 0; s < emulated.size(); ++s) {
      std::vector<Element> e = input;
      std::vector<Element> n = input;
      emulated[s].run(e);
      native[s].run(n);
      ++compared;
      if (e != n) ++mismatches;
    }
  });
  return {mismatches == 0, std::to_string(compared) + " emulated/native output pairs, " +
                               std::to_string(mismatches) + " differ"};
}

Outcome corank_bruteforce() {
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  auto check = [&](const std::vector<Element>& a, const std::vector<Element>& b) {
    for (std::size_t k = 0; k <= a.size() + b.size(); ++k) {
      ++checks;
      const CoRank got = corank_partition(a, b, k);
      const auto [i, j] = oracle::corank(a, b, k);
      if (got.i != i || got.j != j) ++mismatches;
    }
  };
  // Every pair of ascending binary runs with lengths up to the limit.
  for (std::size_t la = 0; la <= kCorankMaxLength; ++la) {
    for (std::size_t za = 0; za <= la; ++za) {
      std::vector<Element> a(la, 1);
      std::fill_n(a.begin(), za, 0);
      for (std::size_t lb = 0; lb <= kCorankMaxLength; ++lb) {
        for (std::size_t zb = 0; zb <= lb; ++zb) {
          std::vector<Element> b(lb, 1);
          std::fill_n(b.begin(), zb, 0);
          check(a, b);
        }
      }
    }
  }
  // Random contents for every length pair.
  std::mt19937_64 rng(16);
  for (std::size_t la = 0; la <= kCorankMaxLength; ++la) {
    for (std::size_t lb = 0; lb <= kCorankMaxLength; ++lb) {
      for (int trial = 0; trial < kCorankRandomTrials; ++trial) {
        const Element range = trial % 2 == 0 ? 4 : 1000;
        check(oracle::random_sorted(rng, la, 0, range),
              oracle::random_sorted(rng, lb, 0, range));
      }
    }
  }
  bool ok = mismatches == 0;
  try {
    corank_partition(std::vector<Element>(3), std::vector<Element>(4), 8);
    ok = false;
  } catch (const std::out_of_range&) {
  }
  return {ok, std::to_string(checks) + " (a, b, k) cases, " +
                  std::to_string(mismatches) + " mismatches"};
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

/// Runs one bench suite and parses its CSV. Returns an error message or
/// an empty string.
std::string run_bench(const std::string& bench, const std::string& args,
                      const std::filesystem::path& csv,
                      std::vector<bench::BenchRecord>& records) {
  const std::string command = "\"" + bench + "\" " + args + " --csv \"" +
                              csv.string() + "\"";
  const int code = run_command(command);
  if (code != 0) return "'" + command + "' exited with " + std::to_string(code);
  std::ifstream in(csv);
  try {
    records = bench::read_csv(in);
  } catch (const std::exception& e) {
    return std::string("malformed CSV: ") + e.what();
  }
  return {};
}

Outcome bench_cli(const std::string& bench) {
  if (bench.empty()) return {false, "bench executable path not given"};
  const auto dir = std::filesystem::temp_directory_path();
  const auto overall_csv = dir / "hybridsort_acceptance_overall.csv";
  const auto kernels_csv = dir / "hybridsort_acceptance_kernels.csv";
  const std::string backend = native_available() ? "native" : "emulated";
  const auto start = Clock::now();

  std::vector<bench::BenchRecord> overall;
  std::string error = run_bench(bench, "--suite overall --backend " + backend,
                                overall_csv, overall);
  if (!error.empty()) return {false, error};

  const auto sizes = bench::default_overall_sizes();
  std::size_t measured = 0;
  std::size_t skipped = 0;
  for (const auto& r : overall) {
    const bool known_size = std::find(sizes.begin(), sizes.end(), r.size) != sizes.end();
    const bool known_algo = r.algorithm == "baseline" || r.algorithm == "neon-ms";
    if (r.suite != "overall" || !known_size || !known_algo || r.threads == 0) {
      return {false, "unexpected overall row for " + r.algorithm};
    }
    if (r.reps == 0) {
      if (r.kernel != "skipped") return {false, "zero-rep row not marked skipped"};
      ++skipped;
      continue;
    }
    if (!(std::isfinite(r.rate_me_s) && r.rate_me_s > 0 && r.runtime_us > 0)) {
      return {false, "non-positive rate in overall row"};
    }
    ++measured;
  }
  // Two algorithms, one or two thread counts, every size.
  if (overall.size() < 2 * sizes.size() || overall.size() > 4 * sizes.size() ||
      measured == 0) {
    return {false, "overall CSV has " + std::to_string(overall.size()) + " rows"};
  }

  std::vector<bench::BenchRecord> kernels;
  error = run_bench(bench, "--suite kernels --backend " + backend, kernels_csv, kernels);
  if (!error.empty()) return {false, error};
  double hybrid = 0;
  double serial = 0;
  for (const auto& r : kernels) {
    if (r.algorithm == "hybrid-kernel/2x16") hybrid = r.rate_me_s;
    if (r.algorithm == "serial-kernel/2x16") serial = r.rate_me_s;
  }
  std::filesystem::remove(overall_csv);
  std::filesystem::remove(kernels_csv);
  if (hybrid <= 0 || serial <= 0) return {false, "2x16 kernel rows missing"};

  std::ostringstream detail;
  detail << overall.size() << " overall rows (" << measured << " measured, "
         << skipped << " skipped for memory) in " << fmt_seconds(seconds_since(start))
         << "; 2x16 merge rate " << backend << ": hybrid " << hybrid
         << " vs serial " << serial << " elements/us";
  if (!native_available()) {
    detail << " (directional check applies to native builds only)";
    return {true, detail.str()};
  }
  return {hybrid > serial, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string bench = argc > 1 ? argv[1] : "";
  report(1, "network comparator counts", network_counts());
  report(2, "zero-one verification", zero_one());
  report(3, "merge kernel equivalence", kernel_equivalence());
  report(4, "oracle equivalence", oracle_equivalence());
  report(5, "backend parity", backend_parity());
  report(6, "corank brute force", corank_bruteforce());
  report(7, "bench CLI overall suite and kernel direction", bench_cli(bench));
  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: " +
                                                            std::to_string(failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
