#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string_view>

namespace fuzzkit {

enum class TNorm { Min, Prod, Lukasiewicz, Drastic, Nilpotent, Hamacher };
enum class SNorm { Max, ProbSum, BoundedSum, Drastic, Nilpotent, Einstein };
enum class Implication { Min, Prod };
enum class Defuzzifier { Centroid, Bisector, MeanOfMaxima, FirstOfMaxima, LastOfMaxima };

inline constexpr std::array kAllTNorms{TNorm::Min,     TNorm::Prod,      TNorm::Lukasiewicz,
                                       TNorm::Drastic, TNorm::Nilpotent, TNorm::Hamacher};
inline constexpr std::array kAllSNorms{SNorm::Max,     SNorm::ProbSum,   SNorm::BoundedSum,
                                       SNorm::Drastic, SNorm::Nilpotent, SNorm::Einstein};
inline constexpr std::array kAllImplications{Implication::Min, Implication::Prod};
inline constexpr std::array kAllDefuzzifiers{Defuzzifier::Centroid, Defuzzifier::Bisector,
                                             Defuzzifier::MeanOfMaxima, Defuzzifier::FirstOfMaxima,
                                             Defuzzifier::LastOfMaxima};

// The formulas below are also emitted verbatim by the code generator.

template <TNorm K>
inline double tnorm(double a, double b) {
  if constexpr (K == TNorm::Min) {
    return std::min(a, b);
  } else if constexpr (K == TNorm::Prod) {
    return a * b;
  } else if constexpr (K == TNorm::Lukasiewicz) {
    return std::max(0.0, a + b - 1.0);
  } else if constexpr (K == TNorm::Drastic) {
    return a == 1.0 ? b : (b == 1.0 ? a : 0.0);
  } else if constexpr (K == TNorm::Nilpotent) {
    return a + b > 1.0 ? std::min(a, b) : 0.0;
  } else {
    return a == 0.0 && b == 0.0 ? 0.0 : (a * b) / (a + b - a * b);
  }
}

template <SNorm K>
inline double snorm(double a, double b) {
  if constexpr (K == SNorm::Max) {
    return std::max(a, b);
  } else if constexpr (K == SNorm::ProbSum) {
    return a + b - a * b;
  } else if constexpr (K == SNorm::BoundedSum) {
    return std::min(1.0, a + b);
  } else if constexpr (K == SNorm::Drastic) {
    return a == 0.0 ? b : (b == 0.0 ? a : 1.0);
  } else if constexpr (K == SNorm::Nilpotent) {
    return a + b < 1.0 ? std::max(a, b) : 1.0;
  } else {
    return (a + b) / (1.0 + a * b);
  }
}

template <Implication K>
inline double implication(double activation, double mu) {
  if constexpr (K == Implication::Min) {
    return std::min(activation, mu);
  } else {
    return activation * mu;
  }
}

double tnorm(TNorm kind, double a, double b);
double snorm(SNorm kind, double a, double b);
double implication(Implication kind, double activation, double mu);

// Names used by the DSL (e.g. "ProdAnd", "MaxOr", "CentroidDefuzzifier").
std::string_view dsl_name(TNorm k);
std::string_view dsl_name(SNorm k);
std::string_view dsl_name(Implication k);
std::string_view dsl_aggregator_name(SNorm k);
std::string_view dsl_name(Defuzzifier k);

std::optional<TNorm> tnorm_from_dsl(std::string_view name);
std::optional<SNorm> snorm_from_dsl(std::string_view name);
std::optional<Implication> implication_from_dsl(std::string_view name);
std::optional<SNorm> aggregator_from_dsl(std::string_view name);
std::optional<Defuzzifier> defuzzifier_from_dsl(std::string_view name);

}  // namespace fuzzkit
