#include "bench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "corpus.hpp"
#include "fuzzkit/engine.hpp"

namespace fuzzkit::bench {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kInputSetSize = 1024;
constexpr RuleGroup kPositive{0, 13};
constexpr RuleGroup kNegative{13, 26};
constexpr int kGrayLevels = 256;

// Keeps results observable so the optimizer cannot drop the work.
volatile double g_sink = 0;

FuzzySystem corpus_system(std::string_view name) {
  const auto model = corpus::find(name);
  if (!model) throw std::invalid_argument("unknown benchmark case: " + std::string(name));
  return corpus::load(*model).system;
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double rank = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (rank - static_cast<double>(lo));
}

template <class F>
double time_batch(F& f, std::size_t& cursor, std::size_t batch) {
  double sink = 0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < batch; ++i) {
    sink += f(cursor);
    cursor = (cursor + 1) % kInputSetSize;
  }
  const auto t1 = Clock::now();
  g_sink = g_sink + sink;
  return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

template <class F>
std::size_t tune_batch(F& f, const Options& opt) {
  std::size_t batch = 1;
  std::size_t cursor = 0;
  const auto target = static_cast<double>(opt.min_batch.count());
  while (time_batch(f, cursor, batch) < target && batch < (std::size_t{1} << 30)) batch *= 2;
  return batch;
}

template <class Interp, class Gen>
std::vector<Result> time_pair(std::string_view name, Interp interp, Gen gen, const Options& opt) {
  if (opt.iterations == 0) return {};
  const std::size_t batch = std::max(tune_batch(interp, opt), tune_batch(gen, opt));
  const std::size_t batches = std::max(opt.min_batches, (opt.iterations + batch - 1) / batch);
  std::vector<double> ti, tg;
  ti.reserve(batches);
  tg.reserve(batches);
  std::size_t ci = 0, cg = 0;
  time_batch(interp, ci, batch);
  time_batch(gen, cg, batch);
  for (std::size_t b = 0; b < batches; ++b) {
    // Alternate which side goes first so drift affects both equally.
    if (b % 2 == 0) {
      ti.push_back(time_batch(interp, ci, batch) / static_cast<double>(batch));
      tg.push_back(time_batch(gen, cg, batch) / static_cast<double>(batch));
    } else {
      tg.push_back(time_batch(gen, cg, batch) / static_cast<double>(batch));
      ti.push_back(time_batch(interp, ci, batch) / static_cast<double>(batch));
    }
  }
  const std::size_t total = batch * batches;
  return {Result{std::string(name), "interp", percentile(ti, 0.5), percentile(ti, 0.99), total},
          Result{std::string(name), "codegen", percentile(tg, 0.5), percentile(tg, 0.99), total}};
}

}  // namespace

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"tipper", "robot", "denoise"};
  return names;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("FUZZKIT_SEED");
  if (s == nullptr || *s == '\0') return fallback;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 0);
  return *end == '\0' ? v : fallback;
}

std::vector<std::vector<double>> input_set(std::string_view case_name, std::size_t count, std::uint64_t seed) {
  const auto sys = corpus_system(case_name);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out(count);
  for (auto& x : out) {
    x.reserve(sys.inputs().size());
    for (const auto& v : sys.inputs()) {
      if (case_name == "denoise") {
        x.push_back(static_cast<double>(std::uniform_int_distribution<int>(-255, 255)(rng)));
      } else {
        x.push_back(std::uniform_real_distribution<double>(v.domain.lo, v.domain.hi)(rng));
      }
    }
  }
  return out;
}

std::vector<Result> run_case(std::string_view case_name, const Options& options) {
  const auto sys = corpus_system(case_name);
  const auto inputs = input_set(case_name, kInputSetSize, options.seed);
  Evaluator ev(sys);
  std::vector<double> out(sys.outputs().size());
  std::vector<double> act(sys.rules().size());

  const auto interp_crisp = [&](std::size_t i) {
    ev.evaluate(inputs[i], out);
    double s = 0;
    for (const double y : out) s += y;
    return s;
  };
  if (case_name == "tipper") {
    return time_pair(case_name, interp_crisp,
                     [&](std::size_t i) { return corpus::tipper_generated(inputs[i][0], inputs[i][1])[0]; }, options);
  }
  if (case_name == "robot") {
    return time_pair(
        case_name, interp_crisp,
        [&](std::size_t i) {
          const auto& x = inputs[i];
          const auto y = corpus::robot_generated(x[0], x[1], x[2], x[3]);
          return y[0] + y[1];
        },
        options);
  }
  return time_pair(
      case_name,
      [&](std::size_t i) {
        ev.fire(inputs[i], act);
        return grouped_max_detector(act, kPositive, kNegative, kGrayLevels);
      },
      [&](std::size_t i) {
        const auto a = corpus::denoise_generated(inputs[i].data());
        return grouped_max_detector(a, kPositive, kNegative, kGrayLevels);
      },
      options);
}

Throughput run_throughput(std::string_view case_name, unsigned threads, std::size_t iterations,
                          std::uint64_t seed) {
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  const auto sys = corpus_system(case_name);
  const auto inputs = input_set(case_name, kInputSetSize, seed);
  const bool denoise = case_name == "denoise";
  const auto t0 = Clock::now();
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        Evaluator ev(sys);
        std::vector<double> out(denoise ? sys.rules().size() : sys.outputs().size());
        double sink = 0;
        for (std::size_t i = 0; i < iterations; ++i) {
          const auto& x = inputs[(i + t * 97) % kInputSetSize];
          if (denoise) {
            ev.fire(x, out);
            sink += grouped_max_detector(out, kPositive, kNegative, kGrayLevels);
          } else {
            ev.evaluate(x, out);
            sink += out[0];
          }
        }
        g_sink = g_sink + sink;
      });
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const std::size_t total = iterations * threads;
  return {std::string(case_name), threads, total, secs > 0 ? static_cast<double>(total) / secs : 0.0};
}

std::string csv_header() { return "case,impl,median_ns,p99_ns,iterations"; }

std::string csv_row(const Result& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%s,%.1f,%.1f,%zu", r.case_name.c_str(), r.impl.c_str(), r.median_ns, r.p99_ns,
                r.iterations);
  return buf;
}

}  // namespace fuzzkit::bench
