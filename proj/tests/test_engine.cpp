#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "fuzzkit/engine.hpp"
#include "fuzzkit/error.hpp"
#include "support.hpp"

using namespace fuzzkit;
using fuzzkit::testing::denoise;
using fuzzkit::testing::tipper;

namespace {

Variable var(std::string name, Domain d, std::vector<Term> terms) {
  return {std::move(name), d, std::move(terms), std::nullopt};
}

// x in [0, 10] with terms lo/hi; y with the given consequent terms.
SystemDescription one_input(std::vector<Term> out_terms, SystemKind kind) {
  SystemDescription d;
  d.name = "s";
  d.kind = kind;
  d.inputs.push_back(var("x", {0, 10}, {{"lo", Triangular{0, 0, 10}}, {"hi", Triangular{0, 10, 10}}}));
  d.outputs.push_back(var("y", {0, 30}, std::move(out_terms)));
  return d;
}

Rule rule(std::string in_term, std::string out_term, double w = 1.0) {
  return {Proposition::is("x", std::move(in_term)), {{"y", std::move(out_term)}}, w};
}

SugenoConsequent constant(double c) { return SugenoConstant{c}; }

}  // namespace

TEST(Firing, TipperAtOrigin) {
  const auto sys = tipper();
  const auto f = fire_rules(sys, {{"service", 0.0}, {"food", 0.0}});
  ASSERT_EQ(f.activations.size(), 3u);
  EXPECT_EQ(f.activations[0], 1.0);
  EXPECT_NEAR(f.activations[1], std::exp(-25.0 / 4.5), 1e-15);
  EXPECT_NEAR(f.activations[1], 0.0039, 5e-5);
  EXPECT_NEAR(f.activations[2], std::exp(-100.0 / 4.5), 1e-20);
  EXPECT_TRUE(f.lower.empty());
}

TEST(Firing, TipperCenterRule) {
  const auto f = fire_rules(tipper(), {{"service", 5.0}, {"food", 5.0}});
  EXPECT_EQ(f.activations[1], 1.0);
}

TEST(Firing, ProgramMatchesRecursiveEvaluation) {
  const auto sys = tipper();
  const InputMap in{{"service", 3.3}, {"food", 8.1}};
  const auto f = fire_rules(sys, in);
  for (std::size_t r = 0; r < sys.rules().size(); ++r) {
    EXPECT_EQ(f.activations[r], eval_proposition(sys.rules()[r].antecedent, sys, in));
  }
  EXPECT_EQ(eval_proposition(Proposition::disj(Proposition::is("service", "poor"),
                                               Proposition::is("food", "rancid")),
                             sys, {{"service", 0.0}, {"food", 0.0}}),
            1.0);
  EXPECT_EQ(eval_proposition(Proposition::is("service", "good"), sys, {{"service", 5.0}}), 1.0);
}

TEST(Firing, MissingInputNamesVariable) {
  try {
    fire_rules(tipper(), {{"service", 5.0}});
    FAIL();
  } catch (const MissingInputError& e) {
    EXPECT_EQ(e.variable(), "food");
    EXPECT_STREQ(e.what(), "missing input: food");
  }
}

TEST(Firing, DenoiseSymmetricAtZero) {
  const auto sys = denoise();
  InputMap in;
  for (int i = 1; i <= 8; ++i) in["x" + std::to_string(i)] = 0.0;
  const auto f = fire_rules(sys, in);
  ASSERT_EQ(f.activations.size(), 26u);
  for (double a : f.activations) EXPECT_EQ(a, 0.5);
  EXPECT_EQ(eval_proposition(sys.rules()[0].antecedent, sys, in), 0.5);
}

TEST(Firing, NegationAndWeights) {
  auto d = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  d.rules.push_back({Proposition::negate(Proposition::is("x", "lo")), {{"y", "a"}}, 0.5});
  const auto sys = FuzzySystem::create(d);
  const auto f = fire_rules(sys, {{"x", 2.5}});
  EXPECT_DOUBLE_EQ(f.activations[0], 0.5 * (1.0 - 0.75));
}

TEST(Mamdani, TipperSymmetricInput) {
  const auto r = infer_mamdani(tipper(), {{"service", 5.0}, {"food", 5.0}});
  EXPECT_NEAR(r.at("tip"), 15.0, 0.2);
  EXPECT_FALSE(r.degenerate);
  ASSERT_TRUE(r.aggregated.has_value());
  EXPECT_EQ(r.aggregated->at(0).xs.size(), 101u);
  EXPECT_EQ(r.aggregated->at(0).xs.front(), 0.0);
  EXPECT_EQ(r.aggregated->at(0).xs.back(), 30.0);
}

TEST(Mamdani, TipperCheapRegion) {
  const auto sys = tipper();
  const std::vector<double> in{0.0, 0.0};
  const auto r = infer_mamdani(sys, {{"service", 0.0}, {"food", 0.0}});
  EXPECT_NEAR(r.at("tip"), 5.0, 0.1);
  EXPECT_NEAR(r.at("tip"), fuzzkit::testing::dense_centroid(sys, in, 0, 100001), 0.05);
}

TEST(Mamdani, SymmetricTriangleCentroid) {
  auto d = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  d.outputs[0].domain = {0, 10};
  d.rules.push_back(rule("hi", "a"));
  const auto r = infer_mamdani(FuzzySystem::create(d), {{"x", 10.0}});
  EXPECT_NEAR(r.at("y"), 5.0, 1e-9);
}

TEST(Mamdani, ZeroFiringPolicy) {
  auto d = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  d.rules.push_back(rule("hi", "a"));
  auto r = infer_mamdani(FuzzySystem::create(d), {{"x", 0.0}});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.at("y"), 15.0);
  d.outputs[0].default_value = 3.0;
  r = infer_mamdani(FuzzySystem::create(d), {{"x", 0.0}});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.at("y"), 3.0);
}

TEST(Mamdani, MultiConsequentRules) {
  auto d = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  d.outputs[0].domain = {0, 10};
  d.outputs.push_back(var("z", {0, 10}, {{"b", Triangular{4, 6, 8}}}));
  d.rules.push_back({Proposition::is("x", "hi"), {{"y", "a"}, {"z", "b"}}, 1.0});
  const auto r = infer_mamdani(FuzzySystem::create(d), {{"x", 5.0}});
  EXPECT_NEAR(r.at("y"), 5.0, 1e-9);
  EXPECT_NEAR(r.at("z"), 6.0, 1e-9);
  EXPECT_THROW(r.at("nope"), std::out_of_range);
}

TEST(Mamdani, KindIsChecked) {
  EXPECT_THROW(infer_sugeno(tipper(), {{"service", 1.0}, {"food", 1.0}}), EvaluationError);
  EXPECT_THROW(infer_it2_mamdani(tipper(), {{"service", 1.0}, {"food", 1.0}}), EvaluationError);
}

TEST(Mamdani, CentroidMonotoneInRightmostActivation) {
  // Non-overlapping consequents; raising the right rule never moves the centroid left.
  auto d = one_input({{"left", Triangular{0, 5, 10}}, {"right", Triangular{20, 25, 30}}}, SystemKind::MamdaniT1);
  d.rules.push_back(rule("lo", "left"));
  d.rules.push_back(rule("hi", "right"));
  const auto sys = FuzzySystem::create(d);
  double prev = -1.0;
  for (int i = 1; i <= 99; ++i) {
    const double y = infer_mamdani(sys, {{"x", i / 10.0}}).at("y");
    EXPECT_GE(y, prev);
    prev = y;
  }
}

TEST(Sugeno, WeightedAverage) {
  auto d = one_input({{"a", constant(0)}, {"b", constant(10)}}, SystemKind::SugenoT1);
  d.rules.push_back(rule("lo", "a"));
  d.rules.push_back(rule("hi", "b"));
  const auto sys = FuzzySystem::create(d);
  const auto r = infer_sugeno(sys, {{"x", 5.0}});
  EXPECT_EQ(r.at("y"), 5.0);
  EXPECT_FALSE(r.aggregated.has_value());

  auto d2 = one_input({{"a", constant(10)}, {"b", constant(20)}}, SystemKind::SugenoT1);
  d2.rules.push_back(rule("lo", "a"));
  d2.rules.push_back(rule("hi", "b"));
  EXPECT_DOUBLE_EQ(infer_sugeno(FuzzySystem::create(d2), {{"x", 8.0}}).at("y"), 18.0);
}

TEST(Sugeno, LinearConsequent) {
  auto d = one_input({{"lin", SugenoConsequent{SugenoLinear{{{"x", 2.0}}, 1.0}}}}, SystemKind::SugenoT1);
  d.rules.push_back(rule("hi", "lin", 0.7));
  const auto r = infer_sugeno(FuzzySystem::create(d), {{"x", 3.0}});
  EXPECT_DOUBLE_EQ(r.firing.activations[0], 0.7 * 0.3);
  EXPECT_DOUBLE_EQ(r.at("y"), 7.0);
}

TEST(Sugeno, ZeroFiring) {
  auto d = one_input({{"a", constant(4)}}, SystemKind::SugenoT1);
  d.rules.push_back(rule("hi", "a"));
  const auto r = infer_sugeno(FuzzySystem::create(d), {{"x", 0.0}});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.at("y"), 15.0);
}

TEST(Defuzzify, Examples) {
  const auto xs = sample_grid({0, 30}, 301);
  std::vector<double> tri(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) tri[i] = eval_mf(Triangular{0, 15, 30}, xs[i]);
  EXPECT_NEAR(defuzzify(Defuzzifier::Centroid, xs, tri).value, 15.0, 1e-9);

  const auto xs10 = sample_grid({0, 10}, 101);
  const std::vector<double> flat(xs10.size(), 0.4);
  EXPECT_NEAR(defuzzify(Defuzzifier::Centroid, xs10, flat).value, 5.0, 1e-12);
  EXPECT_NEAR(defuzzify(Defuzzifier::Bisector, xs10, flat).value, 5.0, 1e-12);
  EXPECT_EQ(defuzzify(Defuzzifier::FirstOfMaxima, xs10, flat).value, 0.0);
  EXPECT_EQ(defuzzify(Defuzzifier::LastOfMaxima, xs10, flat).value, 10.0);

  std::vector<double> clipped(xs10.size());
  for (std::size_t i = 0; i < xs10.size(); ++i) clipped[i] = std::min(0.5, eval_mf(Triangular{0, 5, 10}, xs10[i]));
  EXPECT_NEAR(defuzzify(Defuzzifier::Centroid, xs10, clipped).value, 5.0, 1e-12);
  EXPECT_NEAR(defuzzify(Defuzzifier::MeanOfMaxima, xs10, clipped).value, 5.0, 1e-12);
  EXPECT_NEAR(defuzzify(Defuzzifier::FirstOfMaxima, xs10, clipped).value, 2.5, 1e-12);
  EXPECT_NEAR(defuzzify(Defuzzifier::LastOfMaxima, xs10, clipped).value, 7.5, 1e-12);

  const std::vector<double> zero(xs10.size(), 0.0);
  for (const auto k : kAllDefuzzifiers) {
    const auto d = defuzzify(k, xs10, zero);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d.value, 5.0);
  }
}

TEST(Engine, RandomSystemProperties) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto kind = trial % 2 ? SystemKind::SugenoT1 : SystemKind::MamdaniT1;
    const auto sys = FuzzySystem::create(fuzzkit::testing::random_description(rng, {kind}));
    Evaluator ev(sys);
    const auto in = fuzzkit::testing::random_inputs(sys, rng);
    const auto r = ev.infer(in);
    const auto again = ev.infer(in);
    for (std::size_t o = 0; o < sys.outputs().size(); ++o) {
      const double y = r.crisp[o].second;
      ASSERT_EQ(std::memcmp(&y, &again.crisp[o].second, sizeof y), 0);
      if (kind == SystemKind::MamdaniT1) {
        const auto& d = sys.outputs()[o].domain;
        ASSERT_GE(y, d.lo);
        ASSERT_LE(y, d.hi);
        continue;
      }
      if (r.degenerate_outputs[o]) continue;
      // Sugeno: inside the hull of the fired consequent values.
      double zmin = INFINITY;
      double zmax = -INFINITY;
      const auto& tables = sys.compiled().outputs[o];
      for (const auto& [rule_idx, term] : tables.contributions) {
        if (!(r.firing.activations[rule_idx] > 0.0)) continue;
        const auto& t = tables.sugeno[term];
        double z = t.offset;
        for (const auto& [i, c] : t.coefficients) z += c * in[i];
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
      }
      ASSERT_GE(y, zmin);
      ASSERT_LE(y, zmax);
    }
    std::vector<double> out(sys.outputs().size());
    ev.evaluate(in, out);
    for (std::size_t o = 0; o < out.size(); ++o) ASSERT_EQ(out[o], r.crisp[o].second);
  }
}

TEST(Detector, DenoiseExtremes) {
  const auto sys = denoise();
  InputMap zeros;
  InputMap full;
  for (int i = 1; i <= 8; ++i) {
    zeros["x" + std::to_string(i)] = 0.0;
    full["x" + std::to_string(i)] = 255.0;
  }
  EXPECT_EQ(denoise_detector(sys, zeros, 256), 0.0);
  EXPECT_EQ(denoise_detector(sys, full, 256), 255.0);
}

TEST(Detector, AllZeroActivations) {
  const std::vector<double> acts(26, 0.0);
  EXPECT_EQ(grouped_max_detector(acts, {0, 13}, {13, 26}, 256), 0.0);
}

TEST(Detector, BoundedAndMatchesFormula) {
  const auto sys = denoise();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int trial = 0; trial < 1000; ++trial) {
    InputMap in;
    for (int i = 1; i <= 8; ++i) in["x" + std::to_string(i)] = u(rng);
    const double y = denoise_detector(sys, in, 256);
    const auto f = fire_rules(sys, in);
    double l1 = 0.0;
    double l2 = 0.0;
    for (int i = 0; i < 13; ++i) l1 = std::max(l1, f.activations[static_cast<std::size_t>(i)]);
    for (int i = 13; i < 26; ++i) l2 = std::max(l2, f.activations[static_cast<std::size_t>(i)]);
    const double l0 = std::max(0.0, 1.0 - l1 - l2);
    ASSERT_EQ(y, 255.0 * (l1 - l2) / (l1 + l2 + l0));
    ASSERT_LE(std::abs(y), 255.0);
  }
}

TEST(Detector, RequiresCanonicalRuleCount) {
  EXPECT_THROW(denoise_detector(tipper(), {{"service", 1.0}, {"food", 1.0}}, 256), EvaluationError);
}

TEST(System, ConstructionErrors) {
  const auto expect_error = [](SystemDescription d, const std::string& fragment) {
    try {
      FuzzySystem::create(std::move(d));
      ADD_FAILURE() << "expected error containing " << fragment;
    } catch (const ModelError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  auto base = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  base.rules.push_back(rule("hi", "a"));
  EXPECT_NO_THROW(FuzzySystem::create(base));

  auto d = base;
  d.rules.clear();
  expect_error(d, "no rule mentions output y");
  d = base;
  d.inputs[0].domain = {1, 1};
  expect_error(d, "lo < hi");
  d = base;
  d.rules[0].antecedent = Proposition::is("x", "nope");
  expect_error(d, "nope");
  d = base;
  d.outputs[0].name = "x";
  expect_error(d, "duplicate variable x");
  d = base;
  d.rules[0].weight = 1.5;
  expect_error(d, "weight");
  d = base;
  d.settings.resolution = 1;
  expect_error(d, "resolution");
  d.settings.resolution = EngineSettings::kMaxResolution + 1;
  expect_error(d, "resolution must be at most");
  d = base;
  d.kind = SystemKind::MamdaniIT2;
  expect_error(d, "interval");
  d = base;
  d.outputs[0].terms.push_back({"bad", IntervalMF{Gaussian{5, 2}, Gaussian{5, 1}}});
  d.kind = SystemKind::MamdaniIT2;
  expect_error(d, "interval");
}

TEST(System, SampleGridEndpointsExact) {
  const auto xs = sample_grid({-1.3, 7.7}, 101);
  EXPECT_EQ(xs.front(), -1.3);
  EXPECT_EQ(xs.back(), 7.7);
  EXPECT_EQ(xs.size(), 101u);
  for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_LT(xs[i - 1], xs[i]);
}

TEST(System, CustomMembershipInInference) {
  struct Ramp : CustomMembership {
    double operator()(double x) const override { return x / 10.0; }
    std::string name() const override { return "Ramp"; }
  };
  auto d = one_input({{"a", Triangular{0, 5, 10}}}, SystemKind::MamdaniT1);
  d.inputs[0].terms.push_back({"ramp", Custom{std::make_shared<Ramp>()}});
  d.rules.push_back(rule("ramp", "a"));
  const auto sys = FuzzySystem::create(d);
  EXPECT_DOUBLE_EQ(fire_rules(sys, {{"x", 4.0}}).activations[0], 0.4);
}
