#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "fuzzkit/error.hpp"
#include "fuzzkit/interop.hpp"
#include "interop_util.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace {

enum class Tok { Word, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view src) {
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
  const auto digit = [&](std::size_t j) {
    return j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]));
  };
  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (src.compare(i, 2, "(*") == 0) {
      const int l = line;
      const int cl = col;
      const auto end = src.find("*)", i + 2);
      if (end == std::string_view::npos) throw ParseError(l, cl, "unterminated comment");
      advance(end + 2 - i);
      continue;
    }
    if (src.compare(i, 2, "//") == 0) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Word, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && digit(i + 1))) {
      std::size_t j = i;
      while (digit(j)) ++j;
      if (j < src.size() && src[j] == '.' && !(j + 1 < src.size() && src[j + 1] == '.')) {
        ++j;
        while (digit(j)) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (digit(k)) {
          while (digit(k)) ++k;
          j = k;
        }
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    static constexpr std::string_view kPuncts[] = {":=", "..", ":", ";", "(", ")", ",", "-", "+"};
    bool matched = false;
    for (const auto p : kPuncts) {
      if (src.compare(i, p.size(), p) == 0) {
        out.push_back({Tok::Punct, std::string(p), l, cl});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(l, cl, "unexpected character " + interop::show_char(c));
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct TermInfo {
  std::string name;
  MembershipFunction mf;
  int line, col;
};

struct VarInfo {
  std::string name;
  bool output = false;
  int line = 0, col = 0;
  std::optional<Domain> range;
  std::vector<TermInfo> terms;
  bool has_block = false;
  std::optional<double> default_value;
  std::optional<std::string> method;
  int method_line = 0, method_col = 0;
};

struct BlockSettings {
  std::optional<TNorm> conj;
  std::optional<SNorm> disj;
  std::optional<Implication> act;
  std::optional<SNorm> accu;
};

struct RuleInfo {
  Proposition antecedent;
  std::vector<Relation> consequents;
  double weight = 1.0;
  int line, col;
};

class FclParser {
 public:
  explicit FclParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedModel parse() {
    const Token& fb = expect_kw("FUNCTION_BLOCK");
    std::string name = "fcl";
    if (peek().kind == Tok::Word && !is_section_kw(peek())) name = toks_[pos_++].text;
    while (!check_kw("END_FUNCTION_BLOCK")) {
      const Token& t = peek();
      if (t.kind == Tok::End) error(t, "unexpected end of input", {"END_FUNCTION_BLOCK"});
      if (kw(t, "VAR_INPUT")) {
        ++pos_;
        var_decls(false);
      } else if (kw(t, "VAR_OUTPUT")) {
        ++pos_;
        var_decls(true);
      } else if (kw(t, "FUZZIFY")) {
        ++pos_;
        fuzzify();
      } else if (kw(t, "DEFUZZIFY")) {
        ++pos_;
        defuzzify();
      } else if (kw(t, "RULEBLOCK")) {
        ++pos_;
        ruleblock();
      } else if (t.kind == Tok::Word && (kw(t, "VAR") || kw(t, "VAR_IN_OUT") || kw(t, "OPTION"))) {
        error(t, "unsupported construct " + t.text);
      } else {
        error(t, "unexpected " + describe(t),
              {"VAR_INPUT", "VAR_OUTPUT", "FUZZIFY", "DEFUZZIFY", "RULEBLOCK", "END_FUNCTION_BLOCK"});
      }
    }
    ++pos_;
    if (peek().kind != Tok::End) error(peek(), "unexpected text after END_FUNCTION_BLOCK");
    return build(interop::safe_identifier(name, diag_, fb.line, fb.col), fb);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  static bool kw(const Token& t, std::string_view word) {
    return t.kind == Tok::Word && util::iequals(t.text, word);
  }
  bool check_kw(std::string_view word) const { return kw(peek(), word); }
  bool check(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool accept(std::string_view p) {
    if (!check(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(std::string_view word) {
    if (!check_kw(word)) return false;
    ++pos_;
    return true;
  }
  static bool is_section_kw(const Token& t) {
    for (const auto w : {"VAR_INPUT", "VAR_OUTPUT", "FUZZIFY", "DEFUZZIFY", "RULEBLOCK", "END_FUNCTION_BLOCK"}) {
      if (kw(t, w)) return true;
    }
    return false;
  }
  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Word: return "'" + t.text + "'";
      case Tok::Number: return "number " + t.text;
      case Tok::Punct: return "'" + t.text + "'";
    }
    return "token";
  }
  [[noreturn]] static void error(const Token& t, const std::string& msg, std::vector<std::string> expected = {}) {
    throw ParseError(t.line, t.col, msg, std::move(expected));
  }
  const Token& expect(std::string_view p) {
    if (!check(p)) error(peek(), "unexpected " + describe(peek()), {"'" + std::string(p) + "'"});
    return toks_[pos_++];
  }
  const Token& expect_kw(std::string_view word) {
    if (!check_kw(word)) error(peek(), "unexpected " + describe(peek()), {std::string(word)});
    return toks_[pos_++];
  }
  const Token& word(const char* what) {
    if (peek().kind != Tok::Word) error(peek(), "unexpected " + describe(peek()), {what});
    return toks_[pos_++];
  }
  double number() {
    double sign = 1.0;
    if (accept("-")) {
      sign = -1.0;
    } else {
      accept("+");
    }
    const Token& t = peek();
    if (t.kind != Tok::Number) {
      if (t.kind == Tok::Word) error(t, "unsupported construct: variable reference " + t.text + " as a value");
      error(t, "unexpected " + describe(t), {"number"});
    }
    ++pos_;
    double v = 0.0;
    if (!util::parse_number(t.text, v)) error(t, "invalid number " + t.text);
    return sign * v;
  }
  bool at_number() const {
    return peek().kind == Tok::Number ||
           ((check("-") || check("+")) && peek(1).kind == Tok::Number);
  }

  VarInfo& variable(const Token& name, bool create, std::optional<bool> output) {
    auto it = index_.find(name.text);
    if (it == index_.end()) {
      if (!create) error(name, "variable " + name.text + " is not declared");
      index_[name.text] = vars_.size();
      VarInfo v;
      v.name = name.text;
      v.output = output.value_or(false);
      v.line = name.line;
      v.col = name.col;
      vars_.push_back(std::move(v));
      return vars_.back();
    }
    if (create) error(name, "duplicate variable " + name.text);
    return vars_[it->second];
  }

  Domain range() {
    const Token& open = expect("(");
    const double lo = number();
    expect("..");
    const double hi = number();
    expect(")");
    if (!(lo < hi)) error(open, "RANGE requires lo < hi");
    return {lo, hi};
  }

  void var_decls(bool output) {
    while (!accept_kw("END_VAR")) {
      const Token& name = word("variable name");
      VarInfo& v = variable(name, true, output);
      expect(":");
      const Token& type = word("type");
      if (!kw(type, "REAL")) error(type, "unsupported variable type " + type.text, {"REAL"});
      if (accept_kw("RANGE")) {
        accept(":=");
        v.range = range();
      }
      expect(";");
    }
  }

  MembershipFunction term_shape() {
    if (at_number() && !check("(")) {
      return Singleton{number()};
    }
    if (check("(")) {
      PiecewiseLinear pl;
      while (check("(")) {
        const Token& open = toks_[pos_++];
        const double x = number();
        expect(",");
        const double m = number();
        expect(")");
        if (!pl.points.empty() && x == pl.points.back().first) {
          if (m == pl.points.back().second) continue;
          error(open, "vertical edge at x = " + util::format_number(x) + " is not supported");
        }
        if (!pl.points.empty() && x < pl.points.back().first) error(open, "term points must have increasing x");
        pl.points.emplace_back(x, m);
      }
      return pl;
    }
    const Token& shape = word("term definition");
    const auto args = [&](std::size_t n) {
      std::vector<double> v;
      for (std::size_t k = 0; k < n; ++k) v.push_back(number());
      return v;
    };
    if (kw(shape, "trian")) {
      const auto a = args(3);
      return Triangular{a[0], a[1], a[2]};
    }
    if (kw(shape, "trape")) {
      const auto a = args(4);
      return Trapezoidal{a[0], a[1], a[2], a[3]};
    }
    if (kw(shape, "gauss")) {
      const auto a = args(2);
      return Gaussian{a[0], a[1]};
    }
    if (kw(shape, "gbell")) {
      const auto a = args(3);
      return GeneralizedBell{a[0], a[1], a[2]};
    }
    if (kw(shape, "sigm")) {
      const auto a = args(2);
      return Sigmoid{a[0], a[1]};
    }
    if (kw(shape, "singleton")) return Singleton{number()};
    error(shape, "unsupported construct: term shape " + shape.text);
  }

  void term(VarInfo& v) {
    const Token& name = word("term name");
    expect(":=");
    const Token& at = peek();
    MembershipFunction mf = term_shape();
    try {
      validate(mf);
    } catch (const ModelError& e) {
      error(at, "term " + name.text + ": " + e.what());
    }
    for (const auto& t : v.terms) {
      if (t.name == name.text) error(name, "duplicate term " + name.text + " in " + v.name);
    }
    v.terms.push_back({name.text, std::move(mf), name.line, name.col});
    expect(";");
  }

  void fuzzify() {
    const Token& name = word("variable name");
    VarInfo& v = variable(name, false, std::nullopt);
    if (v.output) error(name, "FUZZIFY names output variable " + v.name);
    if (v.has_block) error(name, "duplicate FUZZIFY block for " + v.name);
    v.has_block = true;
    while (!accept_kw("END_FUZZIFY")) {
      const Token& t = peek();
      if (kw(t, "TERM")) {
        ++pos_;
        term(v);
      } else if (kw(t, "RANGE")) {
        ++pos_;
        accept(":=");
        v.range = range();
        expect(";");
      } else {
        error(t, "unexpected " + describe(t), {"TERM", "RANGE", "END_FUZZIFY"});
      }
    }
  }

  void defuzzify() {
    const Token& name = word("variable name");
    VarInfo& v = variable(name, false, std::nullopt);
    if (!v.output) error(name, "DEFUZZIFY names input variable " + v.name);
    if (v.has_block) error(name, "duplicate DEFUZZIFY block for " + v.name);
    v.has_block = true;
    while (!accept_kw("END_DEFUZZIFY")) {
      const Token& t = peek();
      if (kw(t, "TERM")) {
        ++pos_;
        term(v);
      } else if (kw(t, "RANGE")) {
        ++pos_;
        accept(":=");
        v.range = range();
        expect(";");
      } else if (kw(t, "METHOD")) {
        ++pos_;
        expect(":");
        const Token& m = word("defuzzification method");
        v.method = util::ascii_upper_copy(m.text);
        v.method_line = m.line;
        v.method_col = m.col;
        expect(";");
      } else if (kw(t, "DEFAULT")) {
        ++pos_;
        expect(":=");
        if (check_kw("NC")) {
          diag_.warnings.push_back({peek().line, peek().col,
                                    "DEFAULT := NC is not supported; the domain midpoint is used when no rule fires"});
          ++pos_;
        } else {
          v.default_value = number();
        }
        expect(";");
      } else if (kw(t, "ACCU")) {
        ++pos_;
        expect(":");
        accu(block_, word("accumulation method"));
        expect(";");
      } else if (kw(t, "LOCK")) {
        error(t, "unsupported construct LOCK");
      } else {
        error(t, "unexpected " + describe(t), {"TERM", "METHOD", "DEFAULT", "RANGE", "END_DEFUZZIFY"});
      }
    }
  }

  void accu(BlockSettings& s, const Token& m) {
    if (kw(m, "MAX")) {
      s.accu = SNorm::Max;
    } else if (kw(m, "BSUM")) {
      s.accu = SNorm::BoundedSum;
    } else if (kw(m, "NSUM")) {
      s.accu = SNorm::ProbSum;
      diag_.warnings.push_back({m.line, m.col, "ACCU NSUM approximated by probabilistic sum"});
    } else if (kw(m, "ASUM")) {
      s.accu = SNorm::ProbSum;
    } else {
      error(m, "unsupported accumulation method " + m.text, {"MAX", "BSUM", "NSUM"});
    }
  }

  Proposition cond(int depth) {
    if (depth > 200) error(peek(), "condition nested too deeply");
    Proposition lhs = conj(depth);
    while (accept_kw("OR")) lhs = Proposition::disj(std::move(lhs), conj(depth));
    return lhs;
  }

  Proposition conj(int depth) {
    Proposition lhs = unary(depth);
    while (accept_kw("AND")) lhs = Proposition::conj(std::move(lhs), unary(depth));
    return lhs;
  }

  Proposition unary(int depth) {
    if (depth > 200) error(peek(), "condition nested too deeply");
    if (accept_kw("NOT")) return Proposition::negate(unary(depth + 1));
    if (accept("(")) {
      Proposition p = cond(depth + 1);
      expect(")");
      return p;
    }
    const Token& var = word("input variable");
    VarInfo& v = variable(var, false, std::nullopt);
    if (v.output) error(var, "antecedent variable " + v.name + " must be an input");
    expect_kw("IS");
    const bool negated = accept_kw("NOT");
    const Token& term = word("term name");
    check_term(v, term);
    Proposition p = Proposition::is(v.name, term.text);
    return negated ? Proposition::negate(std::move(p)) : p;
  }

  void check_term(const VarInfo& v, const Token& term) {
    if (!v.has_block) error(term, "variable " + v.name + " is used before its FUZZIFY/DEFUZZIFY block");
    for (const auto& t : v.terms) {
      if (t.name == term.text) return;
    }
    error(term, "variable " + v.name + " has no term " + term.text);
  }

  void rule() {
    const Token& head = toks_[pos_ - 1];
    if (peek().kind == Tok::Number || peek().kind == Tok::Word) ++pos_;  // rule label
    expect(":");
    expect_kw("IF");
    RuleInfo r{cond(0), {}, 1.0, head.line, head.col};
    expect_kw("THEN");
    std::optional<double> weight;
    do {
      const Token& var = word("output variable");
      VarInfo& v = variable(var, false, std::nullopt);
      if (!v.output) error(var, "consequent variable " + v.name + " must be an output");
      expect_kw("IS");
      const Token& term = word("term name");
      check_term(v, term);
      r.consequents.push_back({v.name, term.text});
      if (check_kw("WITH")) {
        const Token& with = toks_[pos_++];
        const double w = number();
        if (!(w >= 0.0 && w <= 1.0)) error(with, "rule weight must lie in [0, 1]");
        if (weight && *weight != w) error(with, "unsupported construct: different weights within one rule");
        weight = w;
      }
    } while (accept(","));
    r.weight = weight.value_or(1.0);
    expect(";");
    rules_.push_back(std::move(r));
  }

  void ruleblock() {
    const Token& head = toks_[pos_ - 1];
    if (peek().kind == Tok::Word && !kw(peek(), "AND") && !kw(peek(), "OR") && !kw(peek(), "ACT") &&
        !kw(peek(), "ACCU") && !kw(peek(), "RULE") && !kw(peek(), "END_RULEBLOCK")) {
      ++pos_;
    }
    BlockSettings s;
    while (!accept_kw("END_RULEBLOCK")) {
      const Token& t = peek();
      if (kw(t, "AND") || kw(t, "OR") || kw(t, "ACT") || kw(t, "ACCU")) {
        ++pos_;
        expect(":");
        const Token& m = word("method");
        if (kw(t, "AND")) {
          if (kw(m, "MIN")) s.conj = TNorm::Min;
          else if (kw(m, "PROD")) s.conj = TNorm::Prod;
          else if (kw(m, "BDIF")) s.conj = TNorm::Lukasiewicz;
          else error(m, "unsupported AND method " + m.text, {"MIN", "PROD", "BDIF"});
        } else if (kw(t, "OR")) {
          if (kw(m, "MAX")) s.disj = SNorm::Max;
          else if (kw(m, "ASUM")) s.disj = SNorm::ProbSum;
          else if (kw(m, "BSUM")) s.disj = SNorm::BoundedSum;
          else error(m, "unsupported OR method " + m.text, {"MAX", "ASUM", "BSUM"});
        } else if (kw(t, "ACT")) {
          if (kw(m, "MIN")) s.act = Implication::Min;
          else if (kw(m, "PROD")) s.act = Implication::Prod;
          else error(m, "unsupported ACT method " + m.text, {"MIN", "PROD"});
        } else {
          accu(s, m);
        }
        expect(";");
      } else if (kw(t, "RULE")) {
        ++pos_;
        rule();
      } else {
        error(t, "unexpected " + describe(t), {"AND", "OR", "ACT", "ACCU", "RULE", "END_RULEBLOCK"});
      }
    }
    // Unspecified connective follows from its De Morgan partner.
    if (s.conj && !s.disj) {
      s.disj = *s.conj == TNorm::Min ? SNorm::Max : (*s.conj == TNorm::Prod ? SNorm::ProbSum : SNorm::BoundedSum);
    } else if (s.disj && !s.conj) {
      s.conj = *s.disj == SNorm::Max ? TNorm::Min : (*s.disj == SNorm::ProbSum ? TNorm::Prod : TNorm::Lukasiewicz);
    }
    const auto merge = [&](auto& dst, const auto& src, const char* what) {
      if (!src) return;
      if (dst && *dst != *src) error(head, std::string("rule blocks disagree on ") + what);
      dst = src;
    };
    merge(block_.conj, s.conj, "AND");
    merge(block_.disj, s.disj, "OR");
    merge(block_.act, s.act, "ACT");
    merge(block_.accu, s.accu, "ACCU");
  }

  Domain inferred_domain(const VarInfo& v) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& t : v.terms) {
      const auto [a, b] = interop::extent(t.mf);
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    if (!(lo < hi)) {
      lo -= 0.5;
      hi += 0.5;
    }
    diag_.warnings.push_back({v.line, v.col,
                              "RANGE missing for " + v.name + "; inferred [" + util::format_number(lo) + ", " +
                                  util::format_number(hi) + "] from its terms"});
    return {lo, hi};
  }

  ParsedModel build(std::string name, const Token& fb) {
    SystemDescription d;
    d.name = std::move(name);
    std::map<std::string, std::string> renamed_vars;
    std::optional<std::string> shared_method;
    bool sugeno = false;
    bool mamdani = false;
    for (auto& v : vars_) {
      if (!v.has_block) {
        throw ParseError(v.line, v.col,
                         "variable " + v.name + " has no " + (v.output ? "DEFUZZIFY" : "FUZZIFY") + " block");
      }
      if (v.terms.empty()) throw ParseError(v.line, v.col, "variable " + v.name + " has no terms");
      if (v.output) {
        std::string method = v.method.value_or("COG");
        if (!v.method) diag_.warnings.push_back({v.line, v.col, "METHOD missing for " + v.name + "; using COG"});
        const bool all_singletons = std::all_of(v.terms.begin(), v.terms.end(), [](const TermInfo& t) {
          return std::holds_alternative<Singleton>(t.mf);
        });
        if (method == "COG" && all_singletons) {
          diag_.warnings.push_back({v.method_line, v.method_col,
                                    "COG over singleton terms of " + v.name + " evaluated as COGS"});
          method = "COGS";
        }
        if (method == "COGS") {
          if (!all_singletons) {
            throw ParseError(v.method_line, v.method_col, "METHOD COGS requires singleton terms in " + v.name);
          }
          sugeno = true;
        } else {
          mamdani = true;
          if (shared_method && *shared_method != method) {
            throw ParseError(v.method_line, v.method_col, "unsupported construct: outputs use different METHODs");
          }
          shared_method = method;
        }
        if (sugeno && mamdani) {
          throw ParseError(v.method_line, v.method_col, "unsupported construct: COGS mixed with other METHODs");
        }
      }
    }
    if (shared_method) {
      const auto& m = *shared_method;
      if (m == "COG") d.settings.defuzzifier = Defuzzifier::Centroid;
      else if (m == "COA") d.settings.defuzzifier = Defuzzifier::Bisector;
      else if (m == "MOM") d.settings.defuzzifier = Defuzzifier::MeanOfMaxima;
      else if (m == "LM") d.settings.defuzzifier = Defuzzifier::FirstOfMaxima;
      else if (m == "RM") d.settings.defuzzifier = Defuzzifier::LastOfMaxima;
      else {
        const auto it = std::find_if(vars_.begin(), vars_.end(), [&](const VarInfo& v) { return v.method == m; });
        throw ParseError(it->method_line, it->method_col, "unsupported defuzzification method " + m,
                         {"COG", "COGS", "COA", "MOM", "LM", "RM"});
      }
    }
    d.kind = sugeno ? SystemKind::SugenoT1 : SystemKind::MamdaniT1;
    d.settings.conjunction = block_.conj.value_or(TNorm::Min);
    d.settings.disjunction = block_.disj.value_or(SNorm::Max);
    d.settings.implication = block_.act.value_or(Implication::Min);
    d.settings.aggregation = block_.accu.value_or(SNorm::Max);

    std::map<std::string, std::map<std::string, std::string>> term_names;
    for (const auto& v : vars_) {
      Variable out{interop::safe_identifier(v.name, diag_, v.line, v.col), {}, {}, v.default_value};
      renamed_vars[v.name] = out.name;
      out.domain = v.range ? *v.range : inferred_domain(v);
      for (const auto& t : v.terms) {
        const std::string tn = interop::safe_term_name(t.name, diag_, t.line, t.col);
        term_names[v.name][t.name] = tn;
        if (v.output && sugeno) {
          out.terms.push_back({tn, SugenoConsequent{SugenoConstant{std::get<Singleton>(t.mf).c}}});
        } else {
          out.terms.push_back({tn, t.mf});
        }
      }
      (v.output ? d.outputs : d.inputs).push_back(std::move(out));
    }

    const auto rename = [&](Proposition p, const auto& self) -> Proposition {
      if (p.kind == Proposition::Kind::Relation) {
        p.relation.term = term_names[p.relation.variable][p.relation.term];
        p.relation.variable = renamed_vars[p.relation.variable];
      }
      for (auto& c : p.children) c = self(std::move(c), self);
      return p;
    };
    for (auto& r : rules_) {
      Rule rule{rename(std::move(r.antecedent), rename), {}, r.weight};
      for (const auto& c : r.consequents) {
        rule.consequents.push_back({renamed_vars[c.variable], term_names[c.variable][c.term]});
      }
      d.rules.push_back(std::move(rule));
    }
    diag_.format = SourceFormat::Fcl;
    try {
      return {FuzzySystem::create(std::move(d)), std::move(diag_)};
    } catch (const ModelError& e) {
      throw ParseError(fb.line, fb.col, e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<VarInfo> vars_;
  std::map<std::string, std::size_t> index_;
  std::vector<RuleInfo> rules_;
  BlockSettings block_;
  FormatDiagnostics diag_;
};

}  // namespace

ParsedModel parse_fcl(std::string_view text) { return FclParser(lex(text)).parse(); }

}  // namespace fuzzkit
