#pragma once

// Textual model language:
//
//   mamfis function tipper(service, food)::tip
//     service := begin
//       domain = 0:10
//       poor = GaussianMF(0.0, 1.5)
//     end
//     ...
//     service == poor || food == rancid --> tip == cheap
//   end
//
// Vector parameters (`x[1:8]`) and `for i in 1:8 ... end` blocks are expanded
// before the system is built. See README.md for the full grammar.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzkit/system.hpp"

namespace fuzzkit {

struct DslSource {
  std::string text;
  std::string origin = "<inline>";
};

namespace ast {

struct Loc {
  int line = 1;
  int column = 1;
};

/// `name`, `name[3]` or `name[i]` (i a loop variable).
struct Name {
  std::string base;
  std::variant<std::monostate, long, std::string> index;
  Loc loc;

  bool indexed() const { return index.index() != 0; }
};

struct MfCall {
  std::string constructor;
  std::vector<double> args;
  Loc loc;
};

struct IntervalCall {
  MfCall lower;
  MfCall upper;
};

struct LinearExpr {
  std::vector<std::pair<Name, double>> coefficients;
  double offset = 0.0;
  bool has_constant = false;
};

struct TermDef {
  std::string name;
  std::variant<MfCall, IntervalCall, LinearExpr> value;
  Loc loc;
};

struct VarDef {
  Name name;
  std::optional<std::pair<double, double>> domain;
  std::optional<double> default_value;
  std::vector<TermDef> terms;
  Loc loc;
};

struct Setting {
  std::string key;
  std::string value;
  bool numeric = false;
  Loc loc;
};

struct Prop {
  Proposition::Kind kind = Proposition::Kind::Relation;
  Name variable;
  std::string term;
  std::vector<Prop> children;
  Loc loc;
};

struct RuleStmt {
  Prop antecedent;
  std::vector<std::pair<Name, std::string>> consequents;
  double weight = 1.0;
  Loc loc;
};

struct Stmt;

struct Loop {
  std::string variable;
  long lo = 0;
  long hi = 0;
  std::vector<Stmt> body;
  Loc loc;
};

struct Stmt {
  std::variant<VarDef, Setting, Loop, RuleStmt> node;
};

struct Param {
  std::string name;
  std::optional<std::pair<long, long>> range;  // x[1:8]
  Loc loc;
};

struct SystemAst {
  std::string directive;  // "mamfis" | "sugfis"
  std::string name;
  std::vector<Param> inputs;
  std::vector<Param> outputs;
  std::vector<Stmt> body;
  Loc loc;
};

}  // namespace ast

/// Syntax only; throws ParseError.
ast::SystemAst parse_ast(const DslSource& src);

/// Replicates loop bodies with indices substituted and flattens vector
/// parameters and indexed names (x[3] -> x3). Throws ParseError.
ast::SystemAst expand_loops(ast::SystemAst tree);

/// Semantic checks plus FuzzySystem construction on an expanded tree.
FuzzySystem build_system(const ast::SystemAst& expanded);

/// parse_ast + expand_loops + build_system.
FuzzySystem parse_system(const DslSource& src);

/// Canonical DSL text; parse_system(print_system(s)) reproduces s exactly.
/// Throws Error for systems holding custom membership functions.
std::string print_system(const FuzzySystem& sys);

/// One rule in DSL syntax, e.g. "service == good --> tip == average".
std::string print_rule(const Rule& rule);

}  // namespace fuzzkit
