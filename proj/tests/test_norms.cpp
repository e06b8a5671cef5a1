#include <gtest/gtest.h>

#include <random>

#include "fuzzkit/norms.hpp"

using namespace fuzzkit;

namespace {

constexpr double kTol = 1e-12;

std::vector<std::array<double, 3>> samples(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double specials[] = {0.0, 1.0, 0.5, 0.25, 0.75};
  std::vector<std::array<double, 3>> out;
  for (double a : specials) {
    for (double b : specials) {
      for (double c : specials) out.push_back({a, b, c});
    }
  }
  while (static_cast<int>(out.size()) < n) out.push_back({u(rng), u(rng), u(rng)});
  return out;
}

template <class F>
void check_axioms(F op, double identity, const char* name) {
  for (const auto& [a, b, c] : samples(10000, 3)) {
    const double ab = op(a, b);
    ASSERT_GE(ab, 0.0) << name;
    ASSERT_LE(ab, 1.0) << name;
    ASSERT_NEAR(ab, op(b, a), kTol) << name << " commutativity " << a << " " << b;
    ASSERT_NEAR(op(a, op(b, c)), op(ab, c), kTol) << name << " associativity " << a << " " << b << " " << c;
    const double lo = std::min(b, c);
    const double hi = std::max(b, c);
    ASSERT_LE(op(a, lo), op(a, hi) + kTol) << name << " monotonicity";
    ASSERT_NEAR(op(a, identity), a, kTol) << name << " identity";
  }
}

}  // namespace

TEST(Norms, ReferenceValues) {
  EXPECT_EQ(tnorm(TNorm::Min, 0.3, 0.7), 0.3);
  EXPECT_EQ(tnorm(TNorm::Prod, 0.5, 0.5), 0.25);
  EXPECT_EQ(snorm(SNorm::Max, 0.3, 0.7), 0.7);
  EXPECT_EQ(snorm(SNorm::ProbSum, 0.5, 0.5), 0.75);
  EXPECT_EQ(tnorm(TNorm::Lukasiewicz, 0.25, 0.5), 0.0);
  EXPECT_EQ(snorm(SNorm::BoundedSum, 0.75, 0.5), 1.0);
  EXPECT_EQ(tnorm(TNorm::Drastic, 0.9, 0.9), 0.0);
  EXPECT_EQ(snorm(SNorm::Drastic, 0.1, 0.1), 1.0);
  EXPECT_EQ(tnorm(TNorm::Hamacher, 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(snorm(SNorm::Einstein, 0.5, 0.5), 0.8);
  EXPECT_EQ(implication(Implication::Min, 0.4, 0.9), 0.4);
  EXPECT_EQ(implication(Implication::Prod, 0.5, 0.5), 0.25);
}

TEST(Norms, TNormAxioms) {
  for (const TNorm k : kAllTNorms) {
    check_axioms([k](double a, double b) { return tnorm(k, a, b); }, 1.0, std::string(dsl_name(k)).c_str());
  }
}

TEST(Norms, SNormAxioms) {
  for (const SNorm k : kAllSNorms) {
    check_axioms([k](double a, double b) { return snorm(k, a, b); }, 0.0, std::string(dsl_name(k)).c_str());
  }
}

TEST(Norms, IdentityExactOnRandomValues) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    for (const TNorm k : kAllTNorms) EXPECT_NEAR(tnorm(k, x, 1.0), x, 1e-15);
    for (const SNorm k : kAllSNorms) EXPECT_NEAR(snorm(k, x, 0.0), x, 1e-15);
  }
}

TEST(Norms, DeMorganMinMaxExact) {
  for (const auto& [a, b, c] : samples(10000, 9)) {
    (void)c;
    ASSERT_EQ(1.0 - tnorm(TNorm::Min, a, b), snorm(SNorm::Max, 1.0 - a, 1.0 - b));
  }
}

TEST(Norms, TemplatesMatchRuntimeDispatch) {
  for (const auto& [a, b, c] : samples(500, 13)) {
    (void)c;
    EXPECT_EQ(tnorm<TNorm::Hamacher>(a, b), tnorm(TNorm::Hamacher, a, b));
    EXPECT_EQ(snorm<SNorm::Einstein>(a, b), snorm(SNorm::Einstein, a, b));
  }
}

TEST(Norms, DslNamesRoundTrip) {
  for (const TNorm k : kAllTNorms) EXPECT_EQ(tnorm_from_dsl(dsl_name(k)), k);
  for (const SNorm k : kAllSNorms) {
    EXPECT_EQ(snorm_from_dsl(dsl_name(k)), k);
    EXPECT_EQ(aggregator_from_dsl(dsl_aggregator_name(k)), k);
  }
  for (const Implication k : kAllImplications) EXPECT_EQ(implication_from_dsl(dsl_name(k)), k);
  for (const Defuzzifier k : kAllDefuzzifiers) EXPECT_EQ(defuzzifier_from_dsl(dsl_name(k)), k);
  EXPECT_EQ(dsl_name(TNorm::Min), "MinAnd");
  EXPECT_EQ(dsl_aggregator_name(SNorm::Max), "MaxAggregator");
  EXPECT_FALSE(tnorm_from_dsl("MaxOr").has_value());
}
