#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hybridsort/bench.hpp"

using namespace hybridsort;
using namespace hybridsort::bench;

namespace {

const BenchRecord* find(const std::vector<BenchRecord>& records,
                        std::string_view algorithm) {
  for (const BenchRecord& r : records) {
    if (r.algorithm == algorithm) return &r;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("pattern names round-trip") {
  for (std::string_view name : {"random", "sorted", "reverse", "organ-pipe", "dup-7"}) {
    CHECK(to_string(parse_pattern(name)) == name);
  }
  for (std::string_view bad : {"", "shuffled", "dup-", "dup-0", "dup-x", "dup-3a"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_pattern(bad), std::invalid_argument);
  }
}

TEST_CASE("gen_input shapes and determinism") {
  CHECK(gen_input(parse_pattern("sorted"), 5, 1) == std::vector<Element>{0, 1, 2, 3, 4});
  CHECK(gen_input(parse_pattern("reverse"), 4, 1) == std::vector<Element>{3, 2, 1, 0});
  CHECK(gen_input(parse_pattern("organ-pipe"), 6, 1) ==
        std::vector<Element>{0, 1, 2, 2, 1, 0});
  CHECK(gen_input(parse_pattern("random"), 0, 1).empty());

  const auto a = gen_input(parse_pattern("random"), 1000, 42);
  CHECK(a == gen_input(parse_pattern("random"), 1000, 42));
  CHECK(a != gen_input(parse_pattern("random"), 1000, 43));
  // First value is the low half of the first raw mt19937_64 draw.
  std::mt19937_64 reference(42);
  CHECK(a[0] == static_cast<Element>(static_cast<std::uint32_t>(reference())));

  const auto dup = gen_input(parse_pattern("dup-3"), 1000, 42);
  CHECK(std::all_of(dup.begin(), dup.end(), [](Element x) { return x >= 0 && x < 3; }));
}

TEST_CASE("multiset hash and output validation") {
  const std::vector<Element> xs{3, 1, 2, 2};
  const std::vector<Element> ys{1, 2, 2, 3};
  const std::vector<Element> zs{1, 2, 3, 3};
  CHECK(multiset_hash(xs) == multiset_hash(ys));
  CHECK(multiset_hash(ys) != multiset_hash(zs));

  const std::uint64_t h = multiset_hash(xs);
  CHECK_NOTHROW(validate_output(ys, h, "ok"));
  CHECK_THROWS_AS(validate_output(xs, h, "unsorted"), ValidationError);
  CHECK_THROWS_AS(validate_output(zs, h, "altered"), ValidationError);
}

TEST_CASE("csv round-trip is exact") {
  std::vector<BenchRecord> records{
      {"overall", "random", 512, "neon-ms", "hybrid", 4, 5, 12.345678901234567,
       512 / 12.345678901234567},
      {"overall", "random", 1u << 27, "baseline", "skipped", 1, 0, 0, 0},
      {"geometry", "dup-3", 65536, "neon-ms/R16*/X64", "hybrid", 1, 5, 1e-3, 6.5536e7}};
  std::stringstream ss;
  write_csv(ss, records);
  CHECK(ss.str().substr(0, kCsvHeader.size()) == kCsvHeader);
  CHECK(read_csv(ss) == records);

  std::istringstream no_header("a,b\n");
  CHECK_THROWS_AS(read_csv(no_header), std::invalid_argument);
  std::istringstream short_row(std::string(kCsvHeader) + "\noverall,random,5\n");
  CHECK_THROWS_AS(read_csv(short_row), std::invalid_argument);
  std::istringstream bad_number(std::string(kCsvHeader) +
                                "\noverall,random,5x,a,b,1,1,1,1\n");
  CHECK_THROWS_AS(read_csv(bad_number), std::invalid_argument);

  std::ostringstream out;
  const std::vector<BenchRecord> comma{{"a,b", "random", 1, "x", "y", 1, 1, 1, 1}};
  CHECK_THROWS_AS(write_csv(out, comma), std::invalid_argument);
}

TEST_CASE("default overall sizes") {
  const auto sizes = default_overall_sizes();
  CHECK(sizes.front() == 512);
  CHECK(sizes.back() == std::size_t{1} << 27);
  CHECK(sizes.size() == 7);
}

TEST_CASE("geometry sweep rows") {
  BenchOptions options;
  options.sizes = {4096};
  options.reps = 1;
  const auto records = bench_geometry_sweep(options);
  CHECK(find(records, "neon-ms/R16*/X16") != nullptr);
  CHECK(find(records, "neon-ms/R16*/X64") != nullptr);
  CHECK(find(records, "neon-ms/R4/X16") != nullptr);
  CHECK(find(records, "neon-ms/R4/X32") == nullptr);
  CHECK(find(records, "neon-ms/R32/X64") != nullptr);
  CHECK(find(records, "neon-ms/R32/X128") == nullptr);
  CHECK(records.size() == 3 + 3 + 3 + 3 + 2);
  for (const BenchRecord& r : records) {
    CHECK(r.suite == "geometry");
    CHECK(std::isfinite(r.rate_me_s));
    CHECK(r.rate_me_s > 0);
  }
}

TEST_CASE("merge kernel suite rows") {
  BenchOptions options;
  options.sizes = {4096};
  options.reps = 2;
  const auto records = bench_merge_kernels(options);
  CHECK(records.size() == 9);
  CHECK(find(records, "hybrid-kernel/2x16") != nullptr);
  CHECK(find(records, "serial-kernel/2x16") != nullptr);
  CHECK(find(records, "vectorized-kernel/2x32") != nullptr);

  options.only_kernel = MergeKernel::Serial;
  const auto serial_only = bench_merge_kernels(options);
  CHECK(serial_only.size() == 3);
  for (const BenchRecord& r : serial_only) CHECK(r.kernel == "serial");
}

TEST_CASE("overall suite rows") {
  BenchOptions options;
  options.sizes = {512, 5000};
  options.threads = 3;
  options.reps = 5;
  const auto records = bench_overall(options);
  REQUIRE(records.size() == 8);
  // Sorted by algorithm, then threads, then size.
  CHECK(records[0].algorithm == "baseline");
  CHECK(records[0].threads == 1);
  CHECK(records[0].size == 512);
  CHECK(records[3].threads == 3);
  CHECK(records[4].algorithm == "neon-ms");
  for (const BenchRecord& r : records) {
    CHECK(r.reps == 5);
    CHECK(r.rate_me_s > 0);
    CHECK(r.rate_me_s == doctest::Approx(static_cast<double>(r.size) / r.runtime_us));
  }

  options.reps = 0;
  CHECK_THROWS_AS(bench_overall(options), std::invalid_argument);
}
