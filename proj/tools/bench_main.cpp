// Benchmark harness: times the sort pipeline and its stages, validates
// every timed output and writes CSV.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hybridsort/bench.hpp"

namespace hb = hybridsort::bench;

int main(int argc, char** argv) {
  CLI::App app{"Hybrid vectorized merge sort benchmark"};

  std::string suite = "overall";
  std::vector<std::size_t> sizes;
  std::string pattern = "random";
  unsigned threads = 0;
  std::string kernel;
  unsigned reps = 5;
  std::uint64_t seed = 42;
  std::string csv_path = "-";
  std::string backend = "emulated";

  app.add_option("--suite", suite, "Benchmark suite")
      ->check(CLI::IsMember({"geometry", "kernels", "overall"}));
  app.add_option("--size", sizes,
                 "Element count; repeatable. overall: sizes to sort "
                 "(default 2^9..2^27 step x8); geometry/kernels: elements "
                 "per repetition (default 65536)");
  app.add_option("--pattern", pattern,
                 "random, sorted, reverse, organ-pipe or dup-K");
  app.add_option("--threads", threads,
                 "Worker count for the multi-thread rows (0 = all cores)");
  app.add_option("--kernel", kernel, "Merge kernel")
      ->check(CLI::IsMember({"serial", "vectorized", "hybrid"}));
  app.add_option("--reps", reps, "Timed repetitions per record (median)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Input generator seed");
  app.add_option("--csv", csv_path, "Output CSV path ('-' for stdout)");
  app.add_option("--backend", backend, "Lane backend")
      ->check(CLI::IsMember({"emulated", "native"}));
  CLI11_PARSE(app, argc, argv);

  try {
    hb::BenchOptions options;
    options.sizes = sizes;
    options.pattern = hb::parse_pattern(pattern);
    options.threads = threads;
    if (!kernel.empty()) {
      options.kernel = *hybridsort::parse_kernel(kernel);
      options.only_kernel = options.kernel;
    }
    options.reps = reps;
    options.seed = seed;
    options.backend = *hybridsort::parse_backend(backend);
    options.log = &std::cerr;
    hybridsort::require_backend(options.backend);

    std::vector<hb::BenchRecord> records;
    if (suite == "geometry") {
      records = hb::bench_geometry_sweep(options);
    } else if (suite == "kernels") {
      records = hb::bench_merge_kernels(options);
    } else {
      records = hb::bench_overall(options);
    }

    if (csv_path == "-") {
      hb::write_csv(std::cout, records);
    } else {
      std::ofstream out(csv_path);
      if (!out) {
        std::cerr << "error: cannot open " << csv_path << '\n';
        return 1;
      }
      hb::write_csv(out, records);
    }
  } catch (const hb::ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
