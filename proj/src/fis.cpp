#include <cctype>
#include <cmath>
#include <map>

#include "fuzzkit/error.hpp"
#include "fuzzkit/interop.hpp"
#include "interop_util.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace {

struct Entry {
  std::string value;
  int line;
  int col;  // of the value
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::pair<int, std::string>> lines;  // raw lines ([Rules] only)
};

[[noreturn]] void fail(int line, int col, const std::string& msg) { throw ParseError(line, col, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string unquote(const Entry& e) {
  std::string_view v = trim(e.value);
  if (v.size() >= 2 && v.front() == '\'' && v.back() == '\'') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

// Cursor over one value text, used for MF definitions and rule lines.
class Scanner {
 public:
  Scanner(std::string_view text, int line, int col) : text_(text), line_(line), col0_(col) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  std::string quoted() {
    expect('\'');
    const auto end = text_.find('\'', pos_);
    if (end == std::string_view::npos) error("unterminated quoted string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }
  bool at_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }
  double number() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                  text_[end] == '.' || text_[end] == '-' || text_[end] == '+')) {
      ++end;
    }
    double v = 0.0;
    if (end == pos_ || !util::parse_number(text_.substr(pos_, end - pos_), v)) {
      error("expected a number");
    }
    pos_ = end;
    return v;
  }
  std::vector<double> vector() {
    expect('[');
    std::vector<double> out;
    while (!accept(']')) {
      if (at_end()) error("unterminated '['");
      accept(',');
      if (accept(']')) break;
      out.push_back(number());
    }
    return out;
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(line_, col0_ + static_cast<int>(pos_), msg);
  }

 private:
  std::string_view text_;
  int line_;
  int col0_;
  std::size_t pos_ = 0;
};

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);
    const int indent = static_cast<int>(raw.size() - trim(raw).size() == 0 ? 0 : raw.find_first_not_of(" \t"));
    if (line.empty() || line.front() == '%' || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, indent + 1, "malformed section header");
      out.push_back({std::string(trim(line.substr(1, line.size() - 2))), line_no, {}, {}});
    } else if (out.empty()) {
      fail(line_no, indent + 1, "entry outside of any section");
    } else if (util::iequals(out.back().name, "Rules")) {
      out.back().lines.emplace_back(line_no, std::string(line));
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, indent + 1, "expected key=value");
      const std::string key(trim(line.substr(0, eq)));
      const std::string_view value = line.substr(eq + 1);
      const int col = indent + static_cast<int>(eq) + 2;
      if (!out.back().entries.emplace(key, Entry{std::string(value), line_no, col}).second) {
        fail(line_no, indent + 1, "duplicate key " + key + " in [" + out.back().name + "]");
      }
    }
    if (end == text.size()) break;
  }
  return out;
}

const Entry& require(const Section& s, const std::string& key) {
  const auto it = s.entries.find(key);
  if (it == s.entries.end()) fail(s.line, 1, "[" + s.name + "] lacks " + key);
  return it->second;
}

int integer(const Entry& e, const std::string& what) {
  double v = 0.0;
  const auto text = trim(e.value);
  if (!util::parse_number(text, v) || v != std::floor(v) || v < 0 || v > 100000) {
    fail(e.line, e.col, what + " must be a non-negative integer");
  }
  return static_cast<int>(v);
}

struct FisReader {
  FormatDiagnostics diag{SourceFormat::Fis, {}};
  bool sugeno = false;
  std::vector<std::string> input_names;

  MembershipFunction make_mf(const std::string& type, const std::vector<double>& p, Scanner& sc) {
    const auto arity = [&](std::size_t n) {
      if (p.size() != n) sc.error(type + " takes " + std::to_string(n) + " parameters, got " + std::to_string(p.size()));
    };
    MembershipFunction mf;
    if (type == "trimf") {
      arity(3);
      mf = Triangular{p[0], p[1], p[2]};
    } else if (type == "trapmf") {
      arity(4);
      mf = Trapezoidal{p[0], p[1], p[2], p[3]};
    } else if (type == "gaussmf") {
      arity(2);
      mf = Gaussian{p[1], p[0]};
    } else if (type == "gbellmf") {
      arity(3);
      mf = GeneralizedBell{p[0], p[1], p[2]};
    } else if (type == "sigmf") {
      arity(2);
      mf = Sigmoid{p[0], p[1]};
    } else {
      sc.error("unknown membership function type " + type);
    }
    try {
      validate(mf);
    } catch (const ModelError& e) {
      sc.error(e.what());
    }
    return mf;
  }

  Variable variable(const Section& s, bool output) {
    const Entry& name = require(s, "Name");
    Variable v{interop::safe_identifier(unquote(name), diag, name.line, name.col), {}, {}, std::nullopt};
    const Entry& range = require(s, "Range");
    Scanner rs(range.value, range.line, range.col);
    const auto r = rs.vector();
    if (r.size() != 2) rs.error("Range takes two numbers");
    if (!(r[0] < r[1])) rs.error("Range requires lo < hi");
    v.domain = {r[0], r[1]};
    const int n = integer(require(s, "NumMFs"), "NumMFs");
    for (int k = 1; k <= n; ++k) {
      const Entry& e = require(s, "MF" + std::to_string(k));
      Scanner sc(e.value, e.line, e.col);
      const std::string term = interop::safe_term_name(sc.quoted(), diag, e.line, e.col);
      sc.expect(':');
      const std::string type = sc.quoted();
      sc.expect(',');
      const auto params = sc.vector();
      if (!sc.at_end()) sc.error("unexpected text after parameters");
      if (output && sugeno) {
        if (type == "constant") {
          if (params.size() != 1) sc.error("constant takes 1 parameter");
          v.terms.push_back({term, SugenoConsequent{SugenoConstant{params[0]}}});
        } else if (type == "linear") {
          if (params.size() != input_names.size() + 1) {
            sc.error("linear takes " + std::to_string(input_names.size() + 1) + " parameters");
          }
          SugenoLinear lin;
          for (std::size_t i = 0; i < input_names.size(); ++i) lin.coefficients.emplace_back(input_names[i], params[i]);
          lin.offset = params.back();
          v.terms.push_back({term, SugenoConsequent{std::move(lin)}});
        } else {
          sc.error("Sugeno output terms must be constant or linear, got " + type);
        }
      } else {
        v.terms.push_back({term, make_mf(type, params, sc)});
      }
    }
    for (const auto& [key, entry] : s.entries) {
      if (key.rfind("MF", 0) == 0 && key != "MF" && integer(Entry{key.substr(2), entry.line, 1}, key) > n) {
        fail(entry.line, 1, key + " exceeds NumMFs");
      }
    }
    return v;
  }

  ParsedModel read(std::string_view text) {
    const auto sections = split_sections(text);
    const Section* system = nullptr;
    const Section* rules = nullptr;
    std::map<int, const Section*> inputs;
    std::map<int, const Section*> outputs;
    for (const auto& s : sections) {
      const auto indexed = [&](std::string_view prefix, std::map<int, const Section*>& into) {
        if (s.name.size() <= prefix.size() || s.name.compare(0, prefix.size(), prefix) != 0) return false;
        const int k = integer(Entry{s.name.substr(prefix.size()), s.line, 1}, "section index");
        if (!into.emplace(k, &s).second) fail(s.line, 1, "duplicate section [" + s.name + "]");
        return true;
      };
      if (s.name == "System") {
        if (system) fail(s.line, 1, "duplicate section [System]");
        system = &s;
      } else if (s.name == "Rules") {
        if (rules) fail(s.line, 1, "duplicate section [Rules]");
        rules = &s;
      } else if (!indexed("Input", inputs) && !indexed("Output", outputs)) {
        fail(s.line, 1, "unknown section [" + s.name + "]");
      }
    }
    if (!system) fail(1, 1, "missing [System] section");
    if (!rules) fail(system->line, 1, "missing [Rules] section");

    SystemDescription d;
    const Entry& name = require(*system, "Name");
    d.name = interop::safe_identifier(unquote(name), diag, name.line, name.col);
    const Entry& type = require(*system, "Type");
    const std::string kind = unquote(type);
    if (util::iequals(kind, "sugeno")) {
      sugeno = true;
    } else if (!util::iequals(kind, "mamdani")) {
      fail(type.line, type.col, "unsupported system type " + kind);
    }
    d.kind = sugeno ? SystemKind::SugenoT1 : SystemKind::MamdaniT1;

    const auto method = [&](const char* key, const char* fallback) -> std::pair<std::string, const Entry*> {
      const auto it = system->entries.find(key);
      if (it == system->entries.end()) return {fallback, nullptr};
      return {unquote(it->second), &it->second};
    };
    const auto bad = [](const std::pair<std::string, const Entry*>& m, const char* key) {
      const int line = m.second ? m.second->line : 0;
      const int col = m.second ? m.second->col : 0;
      fail(line, col, std::string("unsupported ") + key + " '" + m.first + "'");
    };
    auto& st = d.settings;
    if (const auto m = method("AndMethod", "min"); m.first == "min") st.conjunction = TNorm::Min;
    else if (m.first == "prod") st.conjunction = TNorm::Prod;
    else bad(m, "AndMethod");
    if (const auto m = method("OrMethod", "max"); m.first == "max") st.disjunction = SNorm::Max;
    else if (m.first == "probor") st.disjunction = SNorm::ProbSum;
    else bad(m, "OrMethod");
    if (const auto m = method("ImpMethod", "min"); m.first == "min") st.implication = Implication::Min;
    else if (m.first == "prod") st.implication = Implication::Prod;
    else bad(m, "ImpMethod");
    if (const auto m = method("AggMethod", "max"); m.first == "max") {
      st.aggregation = SNorm::Max;
    } else if (m.first == "probor") {
      st.aggregation = SNorm::ProbSum;
    } else if (m.first == "sum") {
      st.aggregation = SNorm::BoundedSum;
      diag.warnings.push_back({m.second->line, m.second->col, "AggMethod 'sum' evaluated as bounded sum"});
    } else {
      bad(m, "AggMethod");
    }
    const auto defuzz = method("DefuzzMethod", sugeno ? "wtaver" : "centroid");
    if (sugeno) {
      if (defuzz.first != "wtaver") bad(defuzz, "DefuzzMethod");
    } else if (defuzz.first == "centroid") {
      st.defuzzifier = Defuzzifier::Centroid;
    } else if (defuzz.first == "bisector") {
      st.defuzzifier = Defuzzifier::Bisector;
    } else if (defuzz.first == "mom") {
      st.defuzzifier = Defuzzifier::MeanOfMaxima;
    } else if (defuzz.first == "som") {
      st.defuzzifier = Defuzzifier::FirstOfMaxima;
    } else if (defuzz.first == "lom") {
      st.defuzzifier = Defuzzifier::LastOfMaxima;
    } else {
      bad(defuzz, "DefuzzMethod");
    }

    const auto check_count = [&](const char* key, std::size_t actual) {
      const auto it = system->entries.find(key);
      if (it != system->entries.end() && static_cast<std::size_t>(integer(it->second, key)) != actual) {
        fail(it->second.line, it->second.col, std::string(key) + " does not match the file contents");
      }
    };
    const auto contiguous = [](const std::map<int, const Section*>& m, const char* what) {
      int expect = 1;
      for (const auto& [k, s] : m) {
        if (k != expect++) fail(s->line, 1, std::string("missing [") + what + std::to_string(expect - 1) + "]");
      }
    };
    contiguous(inputs, "Input");
    contiguous(outputs, "Output");
    check_count("NumInputs", inputs.size());
    check_count("NumOutputs", outputs.size());
    if (inputs.empty()) fail(system->line, 1, "system has no inputs");
    if (outputs.empty()) fail(system->line, 1, "system has no outputs");

    for (const auto& [k, s] : inputs) {
      d.inputs.push_back(variable(*s, false));
      input_names.push_back(d.inputs.back().name);
    }
    for (const auto& [k, s] : outputs) d.outputs.push_back(variable(*s, true));

    for (const auto& [line_no, text] : rules->lines) d.rules.push_back(rule(d, line_no, text));
    check_count("NumRules", d.rules.size());

    try {
      return {FuzzySystem::create(std::move(d)), std::move(diag)};
    } catch (const ModelError& e) {
      fail(system->line, 1, e.what());
    }
  }

  Rule rule(const SystemDescription& d, int line_no, const std::string& text) {
    Scanner sc(text, line_no, 1);
    const auto index = [&]() {
      const double v = sc.number();
      if (v != std::floor(v)) sc.error("fractional term indices (hedges) are not supported");
      if (std::abs(v) > 1e6) sc.error("term index out of range");
      return static_cast<long>(v);
    };
    std::vector<long> ante;
    for (std::size_t i = 0; i < d.inputs.size(); ++i) ante.push_back(index());
    sc.accept(',');
    std::vector<long> cons;
    for (std::size_t i = 0; i < d.outputs.size(); ++i) cons.push_back(index());
    Rule r;
    if (sc.accept('(')) {
      r.weight = sc.number();
      sc.expect(')');
      if (!(r.weight >= 0.0 && r.weight <= 1.0)) sc.error("rule weight must lie in [0, 1]");
    }
    sc.expect(':');
    const long conn = index();
    if (conn != 1 && conn != 2) sc.error("connective must be 1 (AND) or 2 (OR)");
    if (!sc.at_end()) sc.error("unexpected text after rule");

    std::optional<Proposition> ant;
    for (std::size_t i = 0; i < ante.size(); ++i) {
      const long t = ante[i];
      if (t == 0) continue;
      const auto& v = d.inputs[i];
      if (static_cast<std::size_t>(std::abs(t)) > v.terms.size()) {
        fail(line_no, 1, "rule term index " + std::to_string(t) + " out of range for input " + v.name);
      }
      Proposition p = Proposition::is(v.name, v.terms[static_cast<std::size_t>(std::abs(t)) - 1].name);
      if (t < 0) p = Proposition::negate(std::move(p));
      if (!ant) {
        ant = std::move(p);
      } else {
        ant = conn == 1 ? Proposition::conj(std::move(*ant), std::move(p)) : Proposition::disj(std::move(*ant), std::move(p));
      }
    }
    if (!ant) fail(line_no, 1, "rule has no antecedent");
    r.antecedent = std::move(*ant);
    for (std::size_t o = 0; o < cons.size(); ++o) {
      const long t = cons[o];
      if (t == 0) continue;
      const auto& v = d.outputs[o];
      if (t < 0) fail(line_no, 1, "negated consequents are not supported");
      if (static_cast<std::size_t>(t) > v.terms.size()) {
        fail(line_no, 1, "rule term index " + std::to_string(t) + " out of range for output " + v.name);
      }
      r.consequents.push_back({v.name, v.terms[static_cast<std::size_t>(t) - 1].name});
    }
    if (r.consequents.empty()) fail(line_no, 1, "rule has no consequent");
    return r;
  }
};

}  // namespace

ParsedModel parse_fis(std::string_view text) { return FisReader{}.read(text); }

}  // namespace fuzzkit
