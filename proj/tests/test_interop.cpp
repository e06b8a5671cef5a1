#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzzkit/dsl.hpp"
#include "fuzzkit/engine.hpp"
#include "fuzzkit/error.hpp"
#include "fuzzkit/interop.hpp"
#include "support.hpp"

using namespace fuzzkit;
namespace ft = fuzzkit::testing;

namespace {

void expect_same_on_grid(const FuzzySystem& a, const FuzzySystem& b, double tol) {
  Evaluator ea(a);
  Evaluator eb(b);
  std::vector<double> oa(a.outputs().size());
  std::vector<double> ob(b.outputs().size());
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double in[] = {static_cast<double>(i), static_cast<double>(j)};
      ea.evaluate(in, oa);
      eb.evaluate(in, ob);
      for (std::size_t k = 0; k < oa.size(); ++k) EXPECT_NEAR(oa[k], ob[k], tol) << i << "," << j;
    }
  }
}

std::string fcl_with_rules(const std::string& rules) {
  return "FUNCTION_BLOCK t\nVAR_INPUT a : REAL; END_VAR\nVAR_OUTPUT b : REAL; END_VAR\n"
         "FUZZIFY a\n RANGE := (0 .. 1);\n TERM x := (0, 1) (1, 0);\n TERM z := (0, 0) (1, 1);\nEND_FUZZIFY\n"
         "DEFUZZIFY b\n RANGE := (0 .. 1);\n TERM y := trian 0 0.5 1;\n METHOD : COG;\nEND_DEFUZZIFY\n"
         "RULEBLOCK r\n AND : MIN;\n" +
         rules + "END_RULEBLOCK\nEND_FUNCTION_BLOCK\n";
}

int error_line(const std::string& text, SourceFormat format) {
  try {
    parse_model(text, format);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected a parse error";
  return -1;
}

std::string error_message(const std::string& text, SourceFormat format) {
  try {
    parse_model(text, format);
  } catch (const ParseError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected a parse error";
  return {};
}

std::string fis_two_inputs(const std::string& rules) {
  return "[System]\nName='s'\nType='mamdani'\nNumInputs=2\nNumOutputs=1\n\n"
         "[Input1]\nName='in1'\nRange=[0 1]\nNumMFs=2\nMF1='a':'trimf',[0 0 1]\nMF2='b':'trimf',[0 1 1]\n\n"
         "[Input2]\nName='in2'\nRange=[0 1]\nNumMFs=2\nMF1='a':'trimf',[0 0 1]\nMF2='b':'trimf',[0 1 1]\n\n"
         "[Output1]\nName='out1'\nRange=[0 1]\nNumMFs=1\nMF1='c':'trimf',[0 0.5 1]\n\n[Rules]\n" +
         rules;
}

}  // namespace

TEST(Fcl, TipperMatchesDsl) {
  const auto parsed = parse_fcl(ft::read_model("tipper.fcl"));
  EXPECT_EQ(parsed.diagnostics.format, SourceFormat::Fcl);
  EXPECT_TRUE(parsed.diagnostics.warnings.empty());
  expect_same_on_grid(parsed.system, ft::tipper(), 1e-6);
  EXPECT_EQ(parsed.system.outputs()[0].default_value, 15.0);
}

TEST(Fis, TipperMatchesDsl) {
  const auto parsed = parse_fis(ft::read_model("tipper.fis"));
  EXPECT_EQ(parsed.diagnostics.format, SourceFormat::Fis);
  expect_same_on_grid(parsed.system, ft::tipper(), 1e-6);
}

TEST(Interop, FclAndFisAgree) {
  expect_same_on_grid(parse_fcl(ft::read_model("tipper.fcl")).system,
                      parse_fis(ft::read_model("tipper.fis")).system, 1e-6);
}

TEST(Fcl, RuleWeight) {
  const auto sys = parse_fcl(fcl_with_rules(" RULE 1: IF a IS x THEN b IS y WITH 0.5;\n")).system;
  ASSERT_EQ(sys.rules().size(), 1u);
  EXPECT_EQ(sys.rules()[0].weight, 0.5);
  EXPECT_EQ(sys.rules()[0].antecedent, Proposition::is("a", "x"));
}

TEST(Fcl, EmptyRuleblockRejected) {
  EXPECT_NE(error_message(fcl_with_rules(""), SourceFormat::Fcl).find("no rule mentions output"),
            std::string::npos);
}

TEST(Fcl, RobotShape) {
  const auto sys = parse_fcl(ft::read_model("robot.fcl")).system;
  ASSERT_EQ(sys.inputs().size(), 4u);
  const std::size_t terms[] = {4, 2, 4, 2};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(sys.inputs()[i].terms.size(), terms[i]);
  ASSERT_EQ(sys.outputs().size(), 2u);
  for (const auto& o : sys.outputs()) EXPECT_EQ(o.terms.size(), 9u);
  EXPECT_EQ(sys.rules().size(), 41u);
  EXPECT_EQ(sys.settings().conjunction, TNorm::Prod);
}

TEST(Fcl, RobotMatchesDenseOracle) {
  const auto sys = parse_fcl(ft::read_model("robot.fcl")).system;
  Evaluator ev(sys);
  std::mt19937_64 rng(11);
  std::vector<double> out(2);
  for (int n = 0; n < 200; ++n) {
    const auto in = ft::random_inputs(sys, rng);
    const auto r = ev.infer(in);
    for (std::size_t o = 0; o < 2; ++o) {
      if (r.degenerate_outputs[o]) continue;
      EXPECT_NEAR(r.crisp[o].second, ft::dense_centroid(sys, in, o, 20001), 0.02 * (sys.outputs()[o].domain.hi - sys.outputs()[o].domain.lo));
    }
  }
}

TEST(Fcl, OperatorsAndSyntax) {
  const std::string text =
      "// line comment\nFUNCTION_BLOCK f\n(* block\n comment *)\n"
      "VAR_INPUT a : REAL; c : REAL; END_VAR\nVAR_OUTPUT b : REAL; END_VAR\n"
      "FUZZIFY a\n TERM x := (0, 1) (1, 0);\n TERM z := (0, 0) (1, 1);\nEND_FUZZIFY\n"
      "FUZZIFY c\n RANGE := (0 .. 1);\n TERM lo := trian 0 0 1;\nEND_FUZZIFY\n"
      "DEFUZZIFY b\n TERM s := 1;\n TERM t := 3;\n METHOD : COGS;\n DEFAULT := 2;\nEND_DEFUZZIFY\n"
      "RULEBLOCK r\n AND : PROD;\n ACCU : MAX;\n"
      " RULE 1 : IF a IS NOT x OR (c IS lo AND NOT a IS z) THEN b IS s;\n"
      " RULE 2 : IF a IS x AND c IS lo OR a IS z THEN b IS t WITH 0.25;\n"
      "END_RULEBLOCK\nEND_FUNCTION_BLOCK\n";
  const auto parsed = parse_fcl(text);
  const auto& sys = parsed.system;
  EXPECT_EQ(sys.kind(), SystemKind::SugenoT1);
  EXPECT_EQ(sys.settings().conjunction, TNorm::Prod);
  EXPECT_EQ(sys.settings().disjunction, SNorm::ProbSum);
  EXPECT_EQ(sys.outputs()[0].default_value, 2.0);
  // RANGE of `a` inferred from the term points, with a warning.
  EXPECT_EQ(sys.inputs()[0].domain, (Domain{0, 1}));
  ASSERT_FALSE(parsed.diagnostics.warnings.empty());
  EXPECT_NE(parsed.diagnostics.warnings[0].message.find("RANGE"), std::string::npos);
  const auto& r1 = sys.rules()[0].antecedent;
  EXPECT_EQ(r1, Proposition::disj(Proposition::negate(Proposition::is("a", "x")),
                                  Proposition::conj(Proposition::is("c", "lo"),
                                                    Proposition::negate(Proposition::is("a", "z")))));
  EXPECT_EQ(sys.rules()[1].antecedent,
            Proposition::disj(Proposition::conj(Proposition::is("a", "x"), Proposition::is("c", "lo")),
                              Proposition::is("a", "z")));
  EXPECT_EQ(sys.rules()[1].weight, 0.25);
  const auto r = infer(sys, {{"a", 0.0}, {"c", 0.0}});
  EXPECT_NEAR(r.crisp[0].second, (1.0 + 0.25 * 3.0) / 1.25, 1e-12);
}

TEST(Fcl, MethodMapping) {
  const std::pair<const char*, Defuzzifier> methods[] = {{"COG", Defuzzifier::Centroid},
                                                        {"COA", Defuzzifier::Bisector},
                                                        {"MOM", Defuzzifier::MeanOfMaxima},
                                                        {"LM", Defuzzifier::FirstOfMaxima},
                                                        {"RM", Defuzzifier::LastOfMaxima}};
  for (const auto& [name, kind] : methods) {
    auto text = fcl_with_rules(" RULE 1: IF a IS x THEN b IS y;\n");
    text.replace(text.find("COG"), 3, name);
    EXPECT_EQ(parse_fcl(text).system.settings().defuzzifier, kind) << name;
  }
}

TEST(Fcl, NsumWarns) {
  const auto parsed = parse_fcl(fcl_with_rules(" ACCU : NSUM;\n RULE 1: IF a IS x THEN b IS y;\n"));
  EXPECT_EQ(parsed.system.settings().aggregation, SNorm::ProbSum);
  ASSERT_EQ(parsed.diagnostics.warnings.size(), 1u);
  EXPECT_NE(parsed.diagnostics.warnings[0].message.find("NSUM"), std::string::npos);
}

TEST(Fcl, ErrorsNameConstructAndLocation) {
  auto text = fcl_with_rules(" RULE 1: IF a IS x THEN b IS y;\n");
  text.replace(text.find("trian"), 5, "cosine");
  const auto msg = error_message(text, SourceFormat::Fcl);
  EXPECT_NE(msg.find("cosine"), std::string::npos) << msg;
  EXPECT_EQ(msg.rfind("11:", 0), 0u) << msg;

  EXPECT_EQ(error_line(fcl_with_rules(" RULE 1: IF a IS q THEN b IS y;\n"), SourceFormat::Fcl), 16);
  EXPECT_EQ(error_line(fcl_with_rules(" RULE 1: IF a IS x THEN b IS y\n"), SourceFormat::Fcl), 17);
  EXPECT_NE(error_message(fcl_with_rules(" RULE 1: IF a IS x THEN b IS y WITH 2;\n"), SourceFormat::Fcl).find("weight"),
            std::string::npos);
}

TEST(Fis, RuleLineEncoding) {
  const auto sys = parse_fis(fis_two_inputs("1 1, 1 (1) : 2\n-2 0, 1 (0.5) : 1\n")).system;
  ASSERT_EQ(sys.rules().size(), 2u);
  EXPECT_EQ(sys.rules()[0].antecedent,
            Proposition::disj(Proposition::is("in1", "a"), Proposition::is("in2", "a")));
  EXPECT_EQ(sys.rules()[0].consequents, (std::vector<Relation>{{"out1", "c"}}));
  EXPECT_EQ(sys.rules()[0].weight, 1.0);
  EXPECT_EQ(sys.rules()[1].antecedent, Proposition::negate(Proposition::is("in1", "b")));
  EXPECT_EQ(sys.rules()[1].weight, 0.5);
}

TEST(Fis, Errors) {
  EXPECT_EQ(error_line(fis_two_inputs("1 1, 1 (1) : 1\n3 1, 1 (1) : 1\n"), SourceFormat::Fis), 29);
  EXPECT_EQ(error_line(fis_two_inputs("1 1, 2 (1) : 1\n"), SourceFormat::Fis), 28);
  auto text = fis_two_inputs("1 1, 1 (1) : 1\n");
  text.replace(text.find("'trimf',[0 0.5"), 7, "'zzzmf'");
  const auto msg = error_message(text, SourceFormat::Fis);
  EXPECT_NE(msg.find("zzzmf"), std::string::npos) << msg;
  EXPECT_NE(error_message(fis_two_inputs("1 1, 1 (1) : 3\n"), SourceFormat::Fis).find("connective"),
            std::string::npos);
}

TEST(Fis, Sugeno) {
  const std::string text =
      "[System]\nName='sug'\nType='sugeno'\nNumInputs=1\nNumOutputs=1\nAndMethod='prod'\nOrMethod='probor'\n"
      "DefuzzMethod='wtaver'\n\n[Input1]\nName='x'\nRange=[0 10]\nNumMFs=2\n"
      "MF1='lo':'trapmf',[-1 0 2 10]\nMF2='hi':'sigmf',[1 5]\n\n"
      "[Output1]\nName='y'\nRange=[0 100]\nNumMFs=2\nMF1='flat':'constant',[10]\nMF2='slope':'linear',[2 3]\n\n"
      "[Rules]\n1, 1 (1) : 1\n2, 2 (1) : 1\n";
  const auto sys = parse_fis(text).system;
  EXPECT_EQ(sys.kind(), SystemKind::SugenoT1);
  const double x = 4.0;
  const double w1 = (10.0 - x) / 8.0;
  const double w2 = 1.0 / (1.0 + std::exp(-(x - 5.0)));
  const double expected = (w1 * 10.0 + w2 * (2.0 * x + 3.0)) / (w1 + w2);
  EXPECT_NEAR(infer(sys, {{"x", x}}).crisp[0].second, expected, 1e-12);
}

TEST(Fis, MethodMapping) {
  const std::pair<const char*, Defuzzifier> methods[] = {{"centroid", Defuzzifier::Centroid},
                                                        {"bisector", Defuzzifier::Bisector},
                                                        {"mom", Defuzzifier::MeanOfMaxima},
                                                        {"som", Defuzzifier::FirstOfMaxima},
                                                        {"lom", Defuzzifier::LastOfMaxima}};
  for (const auto& [name, kind] : methods) {
    auto text = fis_two_inputs("1 1, 1 (1) : 1\n");
    text.insert(text.find("NumInputs"), std::string("DefuzzMethod='") + name + "'\n");
    EXPECT_EQ(parse_fis(text).system.settings().defuzzifier, kind) << name;
  }
}

TEST(Interop, ReservedNamesSanitized) {
  auto text = fis_two_inputs("1 1, 1 (1) : 1\n");
  text.replace(text.find("'in1'"), 5, "'end'");
  text.replace(text.find("'out1'"), 6, "'tip %'");
  const auto parsed = parse_fis(text);
  EXPECT_EQ(parsed.system.inputs()[0].name, "end_");
  EXPECT_EQ(parsed.system.outputs()[0].name, "tip__");
  EXPECT_EQ(parsed.diagnostics.warnings.size(), 2u);
  // The canonical DSL text of an imported model parses back to the same system.
  const auto reparsed = parse_system({print_system(parsed.system)});
  EXPECT_EQ(reparsed.description(), parsed.system.description());
}

TEST(Interop, PrintedCorpusRoundTrips) {
  for (const char* file : {"tipper.fcl", "tipper.fis", "robot.fcl"}) {
    const auto sys = load_model(std::string(FUZZKIT_MODELS_DIR) + "/" + file).system;
    EXPECT_EQ(parse_system({print_system(sys)}).description(), sys.description()) << file;
  }
}

TEST(Interop, FormatFromPath) {
  EXPECT_EQ(format_from_path("a/b.FCL"), SourceFormat::Fcl);
  EXPECT_EQ(format_from_path("x.fis"), SourceFormat::Fis);
  EXPECT_EQ(format_from_path("x.fzl"), SourceFormat::Dsl);
  EXPECT_FALSE(format_from_path("x.txt"));
  EXPECT_THROW(load_model("/nonexistent/file.fcl"), Error);
  EXPECT_THROW(load_model("model.txt"), Error);
}

TEST(Interop, FuzzTotality) {
  std::mt19937_64 rng(5);
  const std::string seeds[] = {ft::read_model("tipper.fcl"), ft::read_model("tipper.fis"),
                               ft::read_model("robot.fcl")};
  const std::string alphabet = "()[]:;=,.-+'\"*/ \n\r\t0123456789aeiouxyzRULEIFTHENANDORNOTWITH";
  int accepted = 0;
  for (int n = 0; n < 3000; ++n) {
    std::string text;
    if (n % 3 == 0) {
      const std::size_t len = rng() % 200;
      for (std::size_t i = 0; i < len; ++i) text.push_back(static_cast<char>(rng() % 256));
    } else {
      text = seeds[rng() % 3];
      const int edits = 1 + static_cast<int>(rng() % 4);
      for (int e = 0; e < edits && !text.empty(); ++e) {
        const std::size_t at = rng() % text.size();
        switch (rng() % 3) {
          case 0: text.erase(at, 1 + rng() % 8); break;
          case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
          default: text[at] = alphabet[rng() % alphabet.size()]; break;
        }
      }
    }
    for (const auto format : {SourceFormat::Fcl, SourceFormat::Fis}) {
      try {
        const auto parsed = parse_model(text, format);
        ++accepted;
        (void)parsed.system.rules().size();
      } catch (const ParseError&) {
      }
    }
  }
  EXPECT_GT(accepted, 0);
}
