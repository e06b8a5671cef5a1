#pragma once

// Latency harness for the bundled systems, interpreter against generated code.

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzkit::bench {

inline constexpr std::uint64_t kDefaultSeed = 20230117;

struct Options {
  std::size_t iterations = 10000;  // minimum timed inferences per implementation
  std::uint64_t seed = kDefaultSeed;
  std::chrono::nanoseconds min_batch = std::chrono::milliseconds(1);
  std::size_t min_batches = 15;
};

struct Result {
  std::string case_name;
  std::string impl;  // "interp" or "codegen"
  double median_ns = 0;
  double p99_ns = 0;
  std::size_t iterations = 0;
};

struct Throughput {
  std::string case_name;
  unsigned threads = 0;
  std::size_t inferences = 0;
  double per_second = 0;
};

/// "tipper", "robot", "denoise".
const std::vector<std::string>& case_names();

/// FUZZKIT_SEED if set and numeric, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

/// The fixed pseudo-random input set for a case; identical for equal seeds.
std::vector<std::vector<double>> input_set(std::string_view case_name, std::size_t count, std::uint64_t seed);

/// Times both implementations of one case with interleaved batches. Returns
/// nothing when iterations is zero. Throws std::invalid_argument for an
/// unknown case.
std::vector<Result> run_case(std::string_view case_name, const Options& options);

/// Interpreter throughput with `threads` workers sharing one system.
Throughput run_throughput(std::string_view case_name, unsigned threads, std::size_t iterations,
                          std::uint64_t seed);

std::string csv_header();
std::string csv_row(const Result& r);

}  // namespace fuzzkit::bench
