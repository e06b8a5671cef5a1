#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fuzzkit/kernels.hpp"

namespace fuzzkit::kernels {

namespace {

struct Table {
  Isa isa;
  void (*accumulate_implied)(std::span<double>, std::span<const double>, double, Implication,
                             SNorm);
  Moments (*moments)(std::span<const double>, std::span<const double>);
  double (*max_value)(std::span<const double>);
};

constexpr Table kScalar{Isa::Scalar, &scalar::accumulate_implied, &scalar::moments,
                        &scalar::max_value};
#if defined(FUZZKIT_HAVE_AVX2_KERNELS)
constexpr Table kAvx2{Isa::Avx2, &avx2::accumulate_implied, &avx2::moments, &avx2::max_value};
#endif

const Table* table_for(Isa isa) {
#if defined(FUZZKIT_HAVE_AVX2_KERNELS)
  if (isa == Isa::Avx2) return &kAvx2;
#endif
  return &kScalar;
}

const Table* initial_table() {
  if (const char* env = std::getenv("FUZZKIT_ISA"); env && std::string(env) == "scalar") {
    return &kScalar;
  }
  return isa_supported(Isa::Avx2) ? table_for(Isa::Avx2) : &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(FUZZKIT_HAVE_AVX2_KERNELS)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed)->isa; }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("ISA not supported on this CPU: " + std::string(to_string(isa)));
  }
  current().store(table_for(isa), std::memory_order_relaxed);
}

void accumulate_implied(std::span<double> acc, std::span<const double> curve, double activation,
                        Implication imp, SNorm agg) {
  current().load(std::memory_order_relaxed)->accumulate_implied(acc, curve, activation, imp, agg);
}

Moments moments(std::span<const double> xs, std::span<const double> mus) {
  return current().load(std::memory_order_relaxed)->moments(xs, mus);
}

double max_value(std::span<const double> values) {
  return current().load(std::memory_order_relaxed)->max_value(values);
}

}  // namespace fuzzkit::kernels
