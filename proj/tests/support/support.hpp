#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fuzzkit/system.hpp"

namespace fuzzkit::testing {

/// Contents of a file in the bundled models/ directory.
std::string read_model(const std::string& file);

FuzzySystem tipper();
FuzzySystem denoise();

struct RandomSystemOptions {
  SystemKind kind = SystemKind::MamdaniT1;
  bool allow_custom_settings = true;  // randomize norms, implication, defuzzifier
  int max_inputs = 3;
  int max_outputs = 2;
  int max_terms = 4;
  int max_rules = 6;
};

/// A valid random system: random domains, MF families, antecedent trees,
/// weights and (optionally) connective settings.
SystemDescription random_description(std::mt19937_64& rng, const RandomSystemOptions& opts = {});

/// Type-1 Mamdani system turned into interval type-2 with lower == upper.
FuzzySystem zero_width_it2(const FuzzySystem& t1);

/// One in-domain input vector, in declaration order.
std::vector<double> random_inputs(const FuzzySystem& sys, std::mt19937_64& rng);

/// Centroid of the aggregated Mamdani output computed on a dense uniform grid
/// straight from the MF formulas (no precomputed tables, no kernels).
double dense_centroid(const FuzzySystem& sys, std::span<const double> inputs, std::size_t output,
                      std::size_t points);

/// Exhaustive search over every switch point of the Karnik-Mendel problem.
/// Returns {min over left-form embedded sets, max over right-form sets},
/// clamped to the grid range like the reduced interval.
std::pair<double, double> km_switch_point_oracle(std::span<const double> xs,
                                                 std::span<const double> lower,
                                                 std::span<const double> upper);

/// Exhaustive search over all 2^n embedded type-1 sets (n <= 20).
std::pair<double, double> km_brute_force(std::span<const double> xs, std::span<const double> lower,
                                         std::span<const double> upper);

}  // namespace fuzzkit::testing
