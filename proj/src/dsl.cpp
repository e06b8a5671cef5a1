#include "fuzzkit/dsl.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "fuzzkit/error.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace {

using ast::Loc;

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  Loc loc;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  const auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  const auto is_ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  const auto is_ident = [](unsigned char c) { return std::isalnum(c) || c == '_'; };

  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c) || c == ';') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const Loc loc{line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      } else if (j < src.size() && src[j] == '.' &&
                 (j + 1 >= src.size() || !is_ident_start(static_cast<unsigned char>(src[j + 1])))) {
        ++j;  // "1." as in Julia
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::Number, src.substr(i, j - i), loc});
      advance(j - i);
      continue;
    }
    static const char* const kPuncts[] = {"-->", ":=", "::", "==", "||", "&&", ":", "=", "!", "(",
                                          ")",   "[",  "]",  ",",  "*",  "+",  "-", "@"};
    bool matched = false;
    for (const char* p : kPuncts) {
      const std::string_view pv(p);
      if (src.compare(i, pv.size(), pv) == 0) {
        out.push_back({Tok::Punct, std::string(pv), loc});
        advance(pv.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c))
                                          : "\\x" + std::to_string(static_cast<int>(c));
      throw ParseError(loc.line, loc.column, "unexpected character '" + shown + "'");
    }
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

constexpr int kMaxDepth = 200;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ast::SystemAst parse() {
    ast::SystemAst sys;
    // `fis = @mamfis function ...` as written in host-language sources.
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Punct && peek(1).text == "=") pos_ += 2;
    accept("@");
    sys.loc = peek().loc;
    sys.directive = "mamfis";
    if (check_word("mamfis") || check_word("sugfis")) {
      sys.directive = peek().text;
      ++pos_;
    } else if (!check_word("function")) {
      error(peek(), "unexpected " + describe(peek()), {"mamfis", "sugfis", "'function'"});
    }
    expect_word("function");
    sys.name = expect_ident("system name").text;
    expect("(");
    if (!check(")")) sys.inputs = params();
    expect(")");
    expect("::");
    if (accept("(")) {
      sys.outputs = params();
      expect(")");
    } else {
      sys.outputs.push_back(param());
    }
    sys.body = body();
    expect_word("end");
    if (peek().kind != Tok::End) error(peek(), "unexpected text after system end", {"end of input"});
    return sys;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool check(std::string_view punct) const {
    return peek().kind == Tok::Punct && peek().text == punct;
  }
  bool check_word(std::string_view word, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == word;
  }
  bool accept(std::string_view punct) {
    if (!check(punct)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] static void error(const Token& t, const std::string& msg,
                                 std::vector<std::string> expected = {}) {
    throw ParseError(t.loc.line, t.loc.column, msg, std::move(expected));
  }
  const Token& expect(std::string_view punct) {
    if (!check(punct)) {
      error(peek(), "unexpected " + describe(peek()), {"'" + std::string(punct) + "'"});
    }
    return toks_[pos_++];
  }
  const Token& expect_word(std::string_view word) {
    if (!check_word(word)) {
      error(peek(), "unexpected " + describe(peek()), {"'" + std::string(word) + "'"});
    }
    return toks_[pos_++];
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) error(peek(), "unexpected " + describe(peek()), {what});
    return toks_[pos_++];
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Ident: return "identifier '" + t.text + "'";
      case Tok::Number: return "number " + t.text;
      case Tok::Punct: return "'" + t.text + "'";
    }
    return "token";
  }

  double number() {
    const bool neg = accept("-");
    const Token& t = peek();
    if (t.kind != Tok::Number) error(t, "unexpected " + describe(t), {"number"});
    ++pos_;
    double v = 0.0;
    if (!util::parse_number(t.text, v)) error(t, "invalid number " + t.text);
    return neg ? -v : v;
  }

  long integer(const char* message) {
    const bool neg = accept("-");
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos ||
        t.text.size() > 9) {
      error(t, message);
    }
    ++pos_;
    const long v = std::stol(t.text);
    return neg ? -v : v;
  }

  ast::Param param() {
    const Token& id = expect_ident("variable name");
    ast::Param p{id.text, std::nullopt, id.loc};
    if (accept("[")) {
      const long lo = integer("vector bounds must be integer literals");
      expect(":");
      const long hi = integer("vector bounds must be integer literals");
      expect("]");
      p.range = std::make_pair(lo, hi);
    }
    return p;
  }

  std::vector<ast::Param> params() {
    std::vector<ast::Param> out{param()};
    while (accept(",")) out.push_back(param());
    return out;
  }

  ast::Name name() {
    const Token& id = expect_ident("identifier");
    ast::Name n{id.text, std::monostate{}, id.loc};
    if (accept("[")) {
      if (peek().kind == Tok::Ident) {
        n.index = peek().text;
        ++pos_;
      } else {
        n.index = integer("index must be an integer literal or loop variable");
      }
      expect("]");
    }
    return n;
  }

  std::vector<ast::Stmt> body() {
    std::vector<ast::Stmt> out;
    while (peek().kind != Tok::End && !check_word("end")) out.push_back(statement());
    return out;
  }

  ast::Stmt statement() {
    if (check_word("for") && peek(1).kind == Tok::Ident && check_word("in", 2)) return {loop()};
    if (check("(") || check("!")) return {rule(std::nullopt)};
    if (peek().kind != Tok::Ident) {
      error(peek(), "unexpected " + describe(peek()),
            {"variable definition", "setting", "rule", "for loop", "'end'"});
    }
    ast::Name head = name();
    if (check(":=")) return {vardef(std::move(head))};
    if (check("=") && !head.indexed()) return {setting(std::move(head))};
    if (check("==")) return {rule(std::move(head))};
    error(peek(), "unexpected " + describe(peek()), {"':='", "'='", "'=='"});
  }

  ast::Loop loop() {
    ast::Loop lp;
    lp.loc = peek().loc;
    ++pos_;  // for
    lp.variable = expect_ident("loop variable").text;
    expect_word("in");
    lp.lo = integer("loop bounds must be integer literals");
    expect(":");
    lp.hi = integer("loop bounds must be integer literals");
    ++depth_;
    if (depth_ > kMaxDepth) error(peek(), "nesting too deep");
    lp.body = body();
    --depth_;
    expect_word("end");
    return lp;
  }

  ast::Setting setting(ast::Name head) {
    expect("=");
    ast::Setting s{head.base, "", false, head.loc};
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      s.value = t.text;
      ++pos_;
      if (accept("(")) expect(")");  // tolerate `CentroidDefuzzifier()`
    } else if (t.kind == Tok::Number) {
      s.value = t.text;
      s.numeric = true;
      ++pos_;
    } else {
      error(t, "unexpected " + describe(t), {"setting value"});
    }
    return s;
  }

  ast::MfCall mf_call() {
    const Token& ctor = expect_ident("membership function constructor");
    ast::MfCall call{ctor.text, {}, ctor.loc};
    expect("(");
    if (!check(")")) {
      call.args.push_back(number());
      while (accept(",")) call.args.push_back(number());
    }
    expect(")");
    return call;
  }

  ast::LinearExpr linear_expr() {
    ast::LinearExpr e;
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (first) {
        first = false;
      } else if (accept("+")) {
      } else if (accept("-")) {
        sign = -1.0;
      } else {
        break;
      }
      if (peek().kind == Tok::Ident) {
        ast::Name n = name();
        double coeff = sign;
        if (accept("*")) coeff = sign * number();
        e.coefficients.emplace_back(std::move(n), coeff);
      } else {
        const double v = sign * number();
        if (accept("*")) {
          e.coefficients.emplace_back(name(), v);
        } else {
          e.offset = e.has_constant ? e.offset + v : v;
          e.has_constant = true;
        }
      }
    }
    return e;
  }

  ast::VarDef vardef(ast::Name head) {
    expect(":=");
    ast::VarDef v;
    v.loc = head.loc;
    v.name = std::move(head);
    expect_word("begin");
    while (!check_word("end")) {
      const Token& key = expect_ident("term definition");
      expect("=");
      if (key.text == "domain") {
        if (v.domain) error(key, "duplicate domain for variable " + v.name.base);
        const double lo = number();
        expect(":");
        const double hi = number();
        v.domain = std::make_pair(lo, hi);
        continue;
      }
      if (key.text == "default") {
        v.default_value = number();
        continue;
      }
      ast::TermDef term{key.text, ast::LinearExpr{}, key.loc};
      if (accept("[")) {
        ast::MfCall lower = mf_call();
        expect(",");
        ast::MfCall upper = mf_call();
        expect("]");
        term.value = ast::IntervalCall{std::move(lower), std::move(upper)};
      } else if (peek().kind == Tok::Ident && peek(1).kind == Tok::Punct && peek(1).text == "(") {
        term.value = mf_call();
      } else {
        term.value = linear_expr();
      }
      v.terms.push_back(std::move(term));
    }
    expect_word("end");
    return v;
  }

  ast::Prop relation(ast::Name var) {
    expect("==");
    const Token& term = expect_ident("term name");
    ast::Prop p;
    p.kind = Proposition::Kind::Relation;
    p.loc = var.loc;
    p.variable = std::move(var);
    p.term = term.text;
    return p;
  }

  ast::Prop unary(std::optional<ast::Name>& head) {
    if (head) {
      ast::Name n = std::move(*head);
      head.reset();
      return relation(std::move(n));
    }
    if (++depth_ > kMaxDepth) error(peek(), "expression nested too deeply");
    ast::Prop out;
    if (check("!")) {
      const Loc loc = peek().loc;
      ++pos_;
      ast::Prop child = unary(head);
      out.kind = Proposition::Kind::Not;
      out.loc = loc;
      out.children.push_back(std::move(child));
    } else if (accept("(")) {
      out = disjunction(head);
      expect(")");
    } else {
      out = relation(name());
    }
    --depth_;
    return out;
  }

  ast::Prop conjunction(std::optional<ast::Name>& head) {
    ast::Prop lhs = unary(head);
    while (check("&&")) {
      const Loc loc = peek().loc;
      ++pos_;
      ast::Prop rhs = unary(head);
      ast::Prop node;
      node.kind = Proposition::Kind::And;
      node.loc = loc;
      node.children.push_back(std::move(lhs));
      node.children.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

  ast::Prop disjunction(std::optional<ast::Name>& head) {
    ast::Prop lhs = conjunction(head);
    while (check("||")) {
      const Loc loc = peek().loc;
      ++pos_;
      ast::Prop rhs = conjunction(head);
      ast::Prop node;
      node.kind = Proposition::Kind::Or;
      node.loc = loc;
      node.children.push_back(std::move(lhs));
      node.children.push_back(std::move(rhs));
      lhs = std::move(node);
    }
    return lhs;
  }

  ast::RuleStmt rule(std::optional<ast::Name> head) {
    ast::RuleStmt r;
    r.loc = head ? head->loc : peek().loc;
    r.antecedent = disjunction(head);
    expect("-->");
    do {
      ast::Name var = name();
      expect("==");
      const Token& term = expect_ident("term name");
      r.consequents.emplace_back(std::move(var), term.text);
    } while (accept(","));
    if (accept("*")) r.weight = number();
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

// ---------------------------------------------------------------------------
// Loop expansion

[[noreturn]] void fail_at(const Loc& loc, const std::string& msg) {
  throw ParseError(loc.line, loc.column, msg);
}

using Env = std::map<std::string, long>;

constexpr long kMaxExpansion = 100000;

void resolve(ast::Name& n, const Env& env) {
  if (!n.indexed()) return;
  long idx = 0;
  if (const auto* lit = std::get_if<long>(&n.index)) {
    idx = *lit;
  } else {
    const auto& var = std::get<std::string>(n.index);
    const auto it = env.find(var);
    if (it == env.end()) fail_at(n.loc, "unknown loop variable " + var);
    idx = it->second;
  }
  n.base += std::to_string(idx);
  n.index = std::monostate{};
}

void resolve(ast::Prop& p, const Env& env) {
  if (p.kind == Proposition::Kind::Relation) resolve(p.variable, env);
  for (auto& c : p.children) resolve(c, env);
}

void expand_into(const std::vector<ast::Stmt>& body, Env& env, std::vector<ast::Stmt>& out,
                 long& budget) {
  for (const auto& stmt : body) {
    if (const auto* lp = std::get_if<ast::Loop>(&stmt.node)) {
      if (lp->lo > lp->hi) {
        fail_at(lp->loc, "empty loop range " + std::to_string(lp->lo) + ":" + std::to_string(lp->hi));
      }
      if (env.count(lp->variable)) fail_at(lp->loc, "loop variable " + lp->variable + " shadows an outer loop");
      for (long i = lp->lo; i <= lp->hi; ++i) {
        if (--budget < 0) fail_at(lp->loc, "loop expansion too large");
        env[lp->variable] = i;
        expand_into(lp->body, env, out, budget);
      }
      env.erase(lp->variable);
      continue;
    }
    if (--budget < 0) fail_at({1, 1}, "loop expansion too large");
    ast::Stmt copy = stmt;
    std::visit(util::Overloaded{
                   [&](ast::VarDef& v) {
                     resolve(v.name, env);
                     for (auto& t : v.terms) {
                       if (auto* lin = std::get_if<ast::LinearExpr>(&t.value)) {
                         for (auto& [n, c] : lin->coefficients) resolve(n, env);
                       }
                     }
                   },
                   [](ast::Setting&) {},
                   [](ast::Loop&) {},
                   [&](ast::RuleStmt& r) {
                     resolve(r.antecedent, env);
                     for (auto& [n, t] : r.consequents) resolve(n, env);
                   },
               },
               copy.node);
    out.push_back(std::move(copy));
  }
}

std::vector<ast::Param> expand_params(const std::vector<ast::Param>& params, long& budget) {
  std::vector<ast::Param> out;
  for (const auto& p : params) {
    if (!p.range) {
      out.push_back(p);
      continue;
    }
    const auto [lo, hi] = *p.range;
    if (lo > hi) {
      fail_at(p.loc, "empty vector range " + std::to_string(lo) + ":" + std::to_string(hi));
    }
    for (long i = lo; i <= hi; ++i) {
      if (--budget < 0) fail_at(p.loc, "vector expansion too large");
      out.push_back({p.name + std::to_string(i), std::nullopt, p.loc});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Semantic construction

MembershipFunction make_mf(const ast::MfCall& call) {
  const auto& a = call.args;
  const auto arity = [&](std::size_t n) {
    if (a.size() != n) {
      fail_at(call.loc, call.constructor + " takes " + std::to_string(n) + " arguments, got " +
                            std::to_string(a.size()));
    }
  };
  MembershipFunction mf;
  if (call.constructor == "TriangularMF") {
    arity(3);
    mf = Triangular{a[0], a[1], a[2]};
  } else if (call.constructor == "TrapezoidalMF") {
    arity(4);
    mf = Trapezoidal{a[0], a[1], a[2], a[3]};
  } else if (call.constructor == "GaussianMF") {
    arity(2);
    mf = Gaussian{a[0], a[1]};
  } else if (call.constructor == "SingletonMF") {
    arity(1);
    mf = Singleton{a[0]};
  } else if (call.constructor == "GeneralizedBellMF") {
    arity(3);
    mf = GeneralizedBell{a[0], a[1], a[2]};
  } else if (call.constructor == "SigmoidMF") {
    arity(2);
    mf = Sigmoid{a[0], a[1]};
  } else if (call.constructor == "PiecewiseLinearMF") {
    if (a.empty() || a.size() % 2 != 0) {
      fail_at(call.loc, "PiecewiseLinearMF takes an even, non-zero number of arguments (x, mu pairs)");
    }
    PiecewiseLinear pl;
    for (std::size_t i = 0; i < a.size(); i += 2) pl.points.emplace_back(a[i], a[i + 1]);
    mf = std::move(pl);
  } else {
    fail_at(call.loc, "unknown membership function " + call.constructor);
  }
  try {
    validate(mf);
  } catch (const ModelError& e) {
    fail_at(call.loc, e.what());
  }
  return mf;
}

}  // namespace

ast::SystemAst parse_ast(const DslSource& src) { return Parser(lex(src.text)).parse(); }

ast::SystemAst expand_loops(ast::SystemAst tree) {
  long budget = kMaxExpansion;
  tree.inputs = expand_params(tree.inputs, budget);
  tree.outputs = expand_params(tree.outputs, budget);
  Env env;
  std::vector<ast::Stmt> flat;
  expand_into(tree.body, env, flat, budget);
  tree.body = std::move(flat);
  return tree;
}

FuzzySystem build_system(const ast::SystemAst& tree) {
  const bool sugeno = tree.directive == "sugfis";
  SystemDescription d;
  d.name = tree.name;

  std::map<std::string, std::pair<bool, std::size_t>> declared;  // name -> (is_output, index)
  for (const auto& p : tree.inputs) {
    if (!declared.emplace(p.name, std::make_pair(false, d.inputs.size())).second) {
      fail_at(p.loc, "duplicate variable " + p.name);
    }
    d.inputs.push_back({p.name, {}, {}, std::nullopt});
  }
  for (const auto& p : tree.outputs) {
    if (!declared.emplace(p.name, std::make_pair(true, d.outputs.size())).second) {
      fail_at(p.loc, "duplicate variable " + p.name);
    }
    d.outputs.push_back({p.name, {}, {}, std::nullopt});
  }

  std::set<std::string> defined;
  bool any_interval = false;
  bool any_plain = false;
  std::optional<Loc> first_interval;
  std::optional<Loc> first_plain;

  for (const auto& stmt : tree.body) {
    if (const auto* v = std::get_if<ast::VarDef>(&stmt.node)) {
      const auto it = declared.find(v->name.base);
      if (it == declared.end()) fail_at(v->loc, "variable " + v->name.base + " is not declared in the header");
      if (!defined.insert(v->name.base).second) fail_at(v->loc, "duplicate variable " + v->name.base);
      const bool is_output = it->second.first;
      Variable& var = is_output ? d.outputs[it->second.second] : d.inputs[it->second.second];
      if (!v->domain) fail_at(v->loc, "variable " + v->name.base + " has no domain");
      const auto [lo, hi] = *v->domain;
      if (!(lo < hi)) fail_at(v->loc, "domain of " + v->name.base + " requires lo < hi");
      var.domain = {lo, hi};
      var.default_value = v->default_value;
      if (v->terms.empty()) fail_at(v->loc, "variable " + v->name.base + " has no terms");
      for (const auto& t : v->terms) {
        if (var.term_index(t.name)) fail_at(t.loc, "duplicate term " + t.name + " in " + var.name);
        Term term{t.name, MembershipFunction{}};
        std::visit(
            util::Overloaded{
                [&](const ast::MfCall& call) {
                  if (sugeno && is_output) {
                    fail_at(t.loc, "Sugeno output terms are constants or linear expressions");
                  }
                  term.shape = make_mf(call);
                  any_plain = true;
                  if (!first_plain) first_plain = t.loc;
                },
                [&](const ast::IntervalCall& call) {
                  if (sugeno) fail_at(t.loc, "interval terms are only supported in mamfis systems");
                  term.shape = IntervalMF{make_mf(call.lower), make_mf(call.upper)};
                  any_interval = true;
                  if (!first_interval) first_interval = t.loc;
                },
                [&](const ast::LinearExpr& e) {
                  if (!sugeno || !is_output) {
                    fail_at(t.loc, "expected a membership function constructor for term " + t.name);
                  }
                  if (e.coefficients.empty()) {
                    term.shape = SugenoConsequent{SugenoConstant{e.offset}};
                  } else {
                    SugenoLinear lin;
                    for (const auto& [n, c] : e.coefficients) {
                      const auto in = declared.find(n.base);
                      if (in == declared.end() || in->second.first) {
                        fail_at(n.loc, "unknown input " + n.base + " in linear consequent");
                      }
                      lin.coefficients.emplace_back(n.base, c);
                    }
                    lin.offset = e.offset;
                    term.shape = SugenoConsequent{std::move(lin)};
                  }
                },
            },
            t.value);
        var.terms.push_back(std::move(term));
      }
    } else if (const auto* s = std::get_if<ast::Setting>(&stmt.node)) {
      auto& st = d.settings;
      const auto bad = [&]() -> void { fail_at(s->loc, "invalid value " + s->value + " for setting " + s->key); };
      if (s->key == "resolution") {
        if (!s->numeric || s->value.find_first_not_of("0123456789") != std::string::npos ||
            s->value.size() > 7) {
          bad();
        }
        st.resolution = std::stoi(s->value);
        if (st.resolution < 2) fail_at(s->loc, "resolution must be at least 2");
      } else if (s->numeric) {
        bad();
      } else if (s->key == "and") {
        const auto k = tnorm_from_dsl(s->value);
        if (!k) bad();
        st.conjunction = *k;
      } else if (s->key == "or") {
        const auto k = snorm_from_dsl(s->value);
        if (!k) bad();
        st.disjunction = *k;
      } else if (s->key == "implication") {
        const auto k = implication_from_dsl(s->value);
        if (!k) bad();
        st.implication = *k;
      } else if (s->key == "aggregator") {
        const auto k = aggregator_from_dsl(s->value);
        if (!k) bad();
        st.aggregation = *k;
      } else if (s->key == "defuzzifier") {
        const auto k = defuzzifier_from_dsl(s->value);
        if (!k) bad();
        st.defuzzifier = *k;
      } else {
        fail_at(s->loc, "unknown setting " + s->key);
      }
    } else if (std::holds_alternative<ast::Loop>(stmt.node)) {
      fail_at(std::get<ast::Loop>(stmt.node).loc, "loops must be expanded before building");
    }
  }

  for (const auto& p : tree.inputs) {
    if (!defined.count(p.name)) fail_at(p.loc, "variable " + p.name + " has no definition");
  }
  for (const auto& p : tree.outputs) {
    if (!defined.count(p.name)) fail_at(p.loc, "variable " + p.name + " has no definition");
  }
  if (any_interval && any_plain) {
    fail_at(*first_plain, "interval and type-1 terms cannot be mixed in one system");
  }
  d.kind = sugeno ? SystemKind::SugenoT1 : (any_interval ? SystemKind::MamdaniIT2 : SystemKind::MamdaniT1);

  const auto lookup_term = [&](const ast::Name& n, const std::string& term, bool want_output) {
    const auto it = declared.find(n.base);
    if (it == declared.end()) fail_at(n.loc, "unknown variable " + n.base);
    if (it->second.first != want_output) {
      fail_at(n.loc, std::string(want_output ? "consequent" : "antecedent") + " variable " + n.base +
                         " must be an " + (want_output ? "output" : "input"));
    }
    const Variable& var = want_output ? d.outputs[it->second.second] : d.inputs[it->second.second];
    if (!var.term_index(term)) fail_at(n.loc, "variable " + n.base + " has no term " + term);
  };

  // Converts a checked AST proposition into the core tree.
  struct Converter {
    const decltype(lookup_term)& check;
    Proposition operator()(const ast::Prop& p) const {
      switch (p.kind) {
        case Proposition::Kind::Relation:
          check(p.variable, p.term, false);
          return Proposition::is(p.variable.base, p.term);
        case Proposition::Kind::And: return Proposition::conj((*this)(p.children[0]), (*this)(p.children[1]));
        case Proposition::Kind::Or: return Proposition::disj((*this)(p.children[0]), (*this)(p.children[1]));
        case Proposition::Kind::Not: return Proposition::negate((*this)(p.children[0]));
      }
      return {};
    }
  };
  const Converter convert{lookup_term};

  for (const auto& stmt : tree.body) {
    const auto* r = std::get_if<ast::RuleStmt>(&stmt.node);
    if (!r) continue;
    Rule rule;
    rule.antecedent = convert(r->antecedent);
    for (const auto& [n, term] : r->consequents) {
      lookup_term(n, term, true);
      rule.consequents.push_back({n.base, term});
    }
    if (!(r->weight >= 0.0 && r->weight <= 1.0)) fail_at(r->loc, "rule weight must lie in [0, 1]");
    rule.weight = r->weight;
    d.rules.push_back(std::move(rule));
  }

  try {
    return FuzzySystem::create(std::move(d));
  } catch (const ModelError& e) {
    throw ParseError(tree.loc.line, tree.loc.column, e.what());
  }
}

FuzzySystem parse_system(const DslSource& src) { return build_system(expand_loops(parse_ast(src))); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Proposition& p) {
  switch (p.kind) {
    case Proposition::Kind::Or: return 1;
    case Proposition::Kind::And: return 2;
    case Proposition::Kind::Not: return 3;
    case Proposition::Kind::Relation: return 4;
  }
  return 4;
}

void print_prop(std::ostream& os, const Proposition& p) {
  const auto child = [&os](const Proposition& c, bool parens) {
    if (parens) os << '(';
    print_prop(os, c);
    if (parens) os << ')';
  };
  switch (p.kind) {
    case Proposition::Kind::Relation: os << p.relation.variable << " == " << p.relation.term; return;
    case Proposition::Kind::Not:
      os << '!';
      child(p.children[0], precedence(p.children[0]) < 3);
      return;
    case Proposition::Kind::And:
    case Proposition::Kind::Or: {
      const int prec = precedence(p);
      child(p.children[0], precedence(p.children[0]) < prec);
      os << (p.kind == Proposition::Kind::And ? " && " : " || ");
      child(p.children[1], precedence(p.children[1]) <= prec);
      return;
    }
  }
}

std::string num(double v) { return util::format_number(v); }

void print_mf(std::ostream& os, const MembershipFunction& mf) {
  if (std::holds_alternative<Custom>(mf)) {
    throw Error("cannot print custom membership function " + mf_constructor_name(mf));
  }
  os << mf_constructor_name(mf) << '(';
  const auto params = mf_parameters(mf);
  for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ", " : "") << num(params[i]);
  os << ')';
}

void print_signed_term(std::ostream& os, double coeff, bool first) {
  if (std::signbit(coeff)) {
    os << (first ? "-" : " - ") << num(-coeff);
  } else {
    os << (first ? "" : " + ") << num(coeff);
  }
}

void print_variable(std::ostream& os, const Variable& v) {
  os << "  " << v.name << " := begin\n";
  os << "    domain = " << num(v.domain.lo) << ':' << num(v.domain.hi) << '\n';
  if (v.default_value) os << "    default = " << num(*v.default_value) << '\n';
  for (const auto& t : v.terms) {
    os << "    " << t.name << " = ";
    std::visit(util::Overloaded{
                   [&](const MembershipFunction& mf) { print_mf(os, mf); },
                   [&](const IntervalMF& imf) {
                     os << '[';
                     print_mf(os, imf.lower);
                     os << ", ";
                     print_mf(os, imf.upper);
                     os << ']';
                   },
                   [&](const SugenoConsequent& sc) {
                     std::visit(util::Overloaded{
                                    [&](const SugenoConstant& c) { os << num(c.value); },
                                    [&](const SugenoLinear& lin) {
                                      bool first = true;
                                      for (const auto& [name, coeff] : lin.coefficients) {
                                        print_signed_term(os, coeff, first);
                                        os << '*' << name;
                                        first = false;
                                      }
                                      print_signed_term(os, lin.offset, false);
                                    },
                                },
                                sc);
                   },
               },
               t.shape);
    os << '\n';
  }
  os << "  end\n\n";
}

}  // namespace

std::string print_system(const FuzzySystem& sys) {
  std::ostringstream os;
  os << (sys.kind() == SystemKind::SugenoT1 ? "sugfis" : "mamfis") << " function " << sys.name() << '(';
  for (std::size_t i = 0; i < sys.inputs().size(); ++i) os << (i ? ", " : "") << sys.inputs()[i].name;
  os << ")::";
  if (sys.outputs().size() == 1) {
    os << sys.outputs()[0].name;
  } else {
    os << '(';
    for (std::size_t i = 0; i < sys.outputs().size(); ++i) os << (i ? ", " : "") << sys.outputs()[i].name;
    os << ')';
  }
  os << "\n";
  for (const auto& v : sys.inputs()) print_variable(os, v);
  for (const auto& v : sys.outputs()) print_variable(os, v);

  const auto& s = sys.settings();
  os << "  and = " << dsl_name(s.conjunction) << '\n';
  os << "  or = " << dsl_name(s.disjunction) << '\n';
  os << "  implication = " << dsl_name(s.implication) << '\n';
  os << "  aggregator = " << dsl_aggregator_name(s.aggregation) << '\n';
  os << "  defuzzifier = " << dsl_name(s.defuzzifier) << '\n';
  os << "  resolution = " << s.resolution << "\n\n";

  for (const auto& r : sys.rules()) os << "  " << print_rule(r) << '\n';
  os << "end\n";
  return os.str();
}

std::string print_rule(const Rule& rule) {
  std::ostringstream os;
  print_prop(os, rule.antecedent);
  os << " --> ";
  for (std::size_t i = 0; i < rule.consequents.size(); ++i) {
    os << (i ? ", " : "") << rule.consequents[i].variable << " == " << rule.consequents[i].term;
  }
  if (rule.weight != 1.0) os << " * " << num(rule.weight);
  return os.str();
}

}  // namespace fuzzkit
