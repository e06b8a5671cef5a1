#pragma once

// Data-parallel inner loops of the Mamdani pipeline: implication+aggregation
// over a sampled output grid and the centroid moment reduction.
//
// Every ISA variant produces results bit-identical to the scalar reference:
// pointwise operations are exact per lane, and reductions use a fixed order of
// four interleaved partial sums combined as (s0 + s1) + (s2 + s3), followed by
// the scalar tail. The generated standalone code follows the same order.

#include <cstddef>
#include <span>
#include <string_view>

#include "fuzzkit/norms.hpp"

namespace fuzzkit::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct Moments {
  double weighted = 0.0;  // sum of x * mu
  double mass = 0.0;      // sum of mu
};

namespace scalar {
void accumulate_implied(std::span<double> acc, std::span<const double> curve, double activation,
                        Implication imp, SNorm agg);
Moments moments(std::span<const double> xs, std::span<const double> mus);
double max_value(std::span<const double> values);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FUZZKIT_HAVE_AVX2_KERNELS 1
namespace avx2 {
// Only call when isa_supported(Isa::Avx2).
void accumulate_implied(std::span<double> acc, std::span<const double> curve, double activation,
                        Implication imp, SNorm agg);
Moments moments(std::span<const double> xs, std::span<const double> mus);
double max_value(std::span<const double> values);
}  // namespace avx2
#endif

bool isa_supported(Isa isa);

/// ISA used by the dispatching entry points below. Defaults to the best
/// supported one; FUZZKIT_ISA=scalar in the environment forces the reference.
Isa active_isa();

/// Throws std::invalid_argument if the ISA is not supported on this CPU.
void set_active_isa(Isa isa);

/// acc[i] = agg(acc[i], imp(activation, curve[i]))
void accumulate_implied(std::span<double> acc, std::span<const double> curve, double activation,
                        Implication imp, SNorm agg);
Moments moments(std::span<const double> xs, std::span<const double> mus);
double max_value(std::span<const double> values);

}  // namespace fuzzkit::kernels
