#include "fuzzkit/norms.hpp"

#include <string>

namespace fuzzkit {

double tnorm(TNorm kind, double a, double b) {
  switch (kind) {
    case TNorm::Min: return tnorm<TNorm::Min>(a, b);
    case TNorm::Prod: return tnorm<TNorm::Prod>(a, b);
    case TNorm::Lukasiewicz: return tnorm<TNorm::Lukasiewicz>(a, b);
    case TNorm::Drastic: return tnorm<TNorm::Drastic>(a, b);
    case TNorm::Nilpotent: return tnorm<TNorm::Nilpotent>(a, b);
    case TNorm::Hamacher: return tnorm<TNorm::Hamacher>(a, b);
  }
  return 0.0;
}

double snorm(SNorm kind, double a, double b) {
  switch (kind) {
    case SNorm::Max: return snorm<SNorm::Max>(a, b);
    case SNorm::ProbSum: return snorm<SNorm::ProbSum>(a, b);
    case SNorm::BoundedSum: return snorm<SNorm::BoundedSum>(a, b);
    case SNorm::Drastic: return snorm<SNorm::Drastic>(a, b);
    case SNorm::Nilpotent: return snorm<SNorm::Nilpotent>(a, b);
    case SNorm::Einstein: return snorm<SNorm::Einstein>(a, b);
  }
  return 0.0;
}

double implication(Implication kind, double activation, double mu) {
  return kind == Implication::Min ? implication<Implication::Min>(activation, mu)
                                  : implication<Implication::Prod>(activation, mu);
}

std::string_view dsl_name(TNorm k) {
  switch (k) {
    case TNorm::Min: return "MinAnd";
    case TNorm::Prod: return "ProdAnd";
    case TNorm::Lukasiewicz: return "LukasiewiczAnd";
    case TNorm::Drastic: return "DrasticAnd";
    case TNorm::Nilpotent: return "NilpotentAnd";
    case TNorm::Hamacher: return "HamacherAnd";
  }
  return "";
}

std::string_view dsl_name(SNorm k) {
  switch (k) {
    case SNorm::Max: return "MaxOr";
    case SNorm::ProbSum: return "ProbSumOr";
    case SNorm::BoundedSum: return "BoundedSumOr";
    case SNorm::Drastic: return "DrasticOr";
    case SNorm::Nilpotent: return "NilpotentOr";
    case SNorm::Einstein: return "EinsteinOr";
  }
  return "";
}

std::string_view dsl_name(Implication k) {
  return k == Implication::Min ? "MinImplication" : "ProdImplication";
}

std::string_view dsl_aggregator_name(SNorm k) {
  switch (k) {
    case SNorm::Max: return "MaxAggregator";
    case SNorm::ProbSum: return "ProbSumAggregator";
    case SNorm::BoundedSum: return "BoundedSumAggregator";
    case SNorm::Drastic: return "DrasticAggregator";
    case SNorm::Nilpotent: return "NilpotentAggregator";
    case SNorm::Einstein: return "EinsteinAggregator";
  }
  return "";
}

std::string_view dsl_name(Defuzzifier k) {
  switch (k) {
    case Defuzzifier::Centroid: return "CentroidDefuzzifier";
    case Defuzzifier::Bisector: return "BisectorDefuzzifier";
    case Defuzzifier::MeanOfMaxima: return "MeanOfMaximaDefuzzifier";
    case Defuzzifier::FirstOfMaxima: return "FirstOfMaximaDefuzzifier";
    case Defuzzifier::LastOfMaxima: return "LastOfMaximaDefuzzifier";
  }
  return "";
}

namespace {

template <class Enum, std::size_t N, class NameFn>
std::optional<Enum> lookup(const std::array<Enum, N>& all, std::string_view name, NameFn fn) {
  for (Enum k : all) {
    if (fn(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace

std::optional<TNorm> tnorm_from_dsl(std::string_view name) {
  return lookup(kAllTNorms, name, [](TNorm k) { return dsl_name(k); });
}

std::optional<SNorm> snorm_from_dsl(std::string_view name) {
  return lookup(kAllSNorms, name, [](SNorm k) { return dsl_name(k); });
}

std::optional<Implication> implication_from_dsl(std::string_view name) {
  return lookup(kAllImplications, name, [](Implication k) { return dsl_name(k); });
}

std::optional<SNorm> aggregator_from_dsl(std::string_view name) {
  return lookup(kAllSNorms, name, [](SNorm k) { return dsl_aggregator_name(k); });
}

std::optional<Defuzzifier> defuzzifier_from_dsl(std::string_view name) {
  return lookup(kAllDefuzzifiers, name, [](Defuzzifier k) { return dsl_name(k); });
}

}  // namespace fuzzkit
