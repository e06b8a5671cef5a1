#include "fuzzkit/codegen.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "fuzzkit/error.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace {

using util::Overloaded;

const std::set<std::string, std::less<>>& reserved_words() {
  static const std::set<std::string, std::less<>> words{
      "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool", "break",
      "case", "catch", "char", "char8_t", "char16_t", "char32_t", "class", "compl", "concept",
      "const", "consteval", "constexpr", "constinit", "const_cast", "continue", "co_await",
      "co_return", "co_yield", "decltype", "default", "delete", "do", "double", "dynamic_cast",
      "else", "enum", "explicit", "export", "extern", "false", "float", "for", "friend", "goto",
      "if", "inline", "int", "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq",
      "nullptr", "operator", "or", "or_eq", "private", "protected", "public", "register",
      "reinterpret_cast", "requires", "return", "short", "signed", "sizeof", "static",
      "static_assert", "static_cast", "struct", "switch", "template", "this", "thread_local",
      "throw", "true", "try", "typedef", "typeid", "typename", "union", "unsigned", "using",
      "virtual", "void", "volatile", "wchar_t", "while", "xor", "xor_eq", "std", "main",
      "final", "override", "import", "module", "HUGE_VAL", "NAN", "INFINITY"};
  return words;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Literal that can be dropped into any expression context.
std::string lit(double v) {
  const std::string s = util::format_double_literal(v);
  return s.front() == '-' ? "(" + s + ")" : s;
}

std::string mf_expr(const MembershipFunction& mf, const std::string& x, bool inline_mfs) {
  return std::visit(
      Overloaded{
          [&](const Triangular& m) -> std::string {
            if (!inline_mfs) return "tri_(" + x + ", " + lit(m.a) + ", " + lit(m.b) + ", " + lit(m.c) + ")";
            const auto a = lit(m.a), b = lit(m.b), c = lit(m.c);
            return "(!(" + x + " >= " + a + " && " + x + " <= " + c + ") ? 0.0 : " + x + " < " + b +
                   " ? (" + x + " - " + a + ") / (" + b + " - " + a + ") : " + x + " > " + b + " ? (" +
                   c + " - " + x + ") / (" + c + " - " + b + ") : 1.0)";
          },
          [&](const Trapezoidal& m) -> std::string {
            const auto a = lit(m.a), b = lit(m.b), c = lit(m.c), d = lit(m.d);
            if (!inline_mfs) return "trap_(" + x + ", " + a + ", " + b + ", " + c + ", " + d + ")";
            return "(!(" + x + " >= " + a + " && " + x + " <= " + d + ") ? 0.0 : " + x + " < " + b +
                   " ? (" + x + " - " + a + ") / (" + b + " - " + a + ") : " + x + " > " + c + " ? (" +
                   d + " - " + x + ") / (" + d + " - " + c + ") : 1.0)";
          },
          [&](const Gaussian& m) -> std::string {
            const auto mu = lit(m.mu), s = lit(m.sigma);
            if (!inline_mfs) return "gauss_(" + x + ", " + mu + ", " + s + ")";
            return "std::exp(-((" + x + " - " + mu + ") * (" + x + " - " + mu + ")) / (2.0 * " + s + " * " +
                   s + "))";
          },
          [&](const Singleton& m) -> std::string { return "(" + x + " == " + lit(m.c) + " ? 1.0 : 0.0)"; },
          [&](const GeneralizedBell& m) -> std::string {
            const auto a = lit(m.a), b = lit(m.b), c = lit(m.c);
            if (!inline_mfs) return "bell_(" + x + ", " + a + ", " + b + ", " + c + ")";
            return "1.0 / (1.0 + std::pow(std::abs((" + x + " - " + c + ") / " + a + "), 2.0 * " + b + "))";
          },
          [&](const Sigmoid& m) -> std::string {
            if (!inline_mfs) return "sig_(" + x + ", " + lit(m.a) + ", " + lit(m.c) + ")";
            return "1.0 / (1.0 + std::exp(" + lit(-m.a) + " * (" + x + " - " + lit(m.c) + ")))";
          },
          [&](const PiecewiseLinear& m) -> std::string {
            const auto& p = m.points;
            const auto seg = [&](std::size_t i) {
              return lit(p[i - 1].second) + " + (" + lit(p[i].second) + " - " + lit(p[i - 1].second) + ") * (" +
                     x + " - " + lit(p[i - 1].first) + ") / (" + lit(p[i].first) + " - " + lit(p[i - 1].first) + ")";
            };
            if (p.size() == 1) return lit(p[0].second);
            std::string out = "(!(" + x + " > " + lit(p.front().first) + ") ? " + lit(p.front().second) + " : !(" +
                              x + " < " + lit(p.back().first) + ") ? " + lit(p.back().second) + " : ";
            for (std::size_t i = 1; i + 1 < p.size(); ++i) out += x + " < " + lit(p[i].first) + " ? " + seg(i) + " : ";
            return out + seg(p.size() - 1) + ")";
          },
          [&](const Custom&) -> std::string {
            throw Error("codegen unsupported for custom membership functions");
          },
      },
      mf);
}

std::string_view tnorm_body(TNorm k) {
  switch (k) {
    case TNorm::Min: return "return std::min(u_, v_);";
    case TNorm::Prod: return "return u_ * v_;";
    case TNorm::Lukasiewicz: return "return std::max(0.0, u_ + v_ - 1.0);";
    case TNorm::Drastic: return "return u_ == 1.0 ? v_ : (v_ == 1.0 ? u_ : 0.0);";
    case TNorm::Nilpotent: return "return u_ + v_ > 1.0 ? std::min(u_, v_) : 0.0;";
    case TNorm::Hamacher: return "return u_ == 0.0 && v_ == 0.0 ? 0.0 : (u_ * v_) / (u_ + v_ - u_ * v_);";
  }
  return {};
}

std::string_view snorm_body(SNorm k) {
  switch (k) {
    case SNorm::Max: return "return std::max(u_, v_);";
    case SNorm::ProbSum: return "return u_ + v_ - u_ * v_;";
    case SNorm::BoundedSum: return "return std::min(1.0, u_ + v_);";
    case SNorm::Drastic: return "return u_ == 0.0 ? v_ : (v_ == 0.0 ? u_ : 1.0);";
    case SNorm::Nilpotent: return "return u_ + v_ < 1.0 ? std::max(u_, v_) : 1.0;";
    case SNorm::Einstein: return "return (u_ + v_) / (1.0 + u_ * v_);";
  }
  return {};
}

class Generator {
 public:
  Generator(const FuzzySystem& sys, const CodegenOptions& opts) : sys_(sys), opts_(opts) {}

  std::string run() {
    if (sys_.kind() == SystemKind::MamdaniIT2) throw Error("codegen unsupported for interval type-2");
    std::string fname = opts_.function_name.empty() ? codegen_identifier(sys_.name()) : opts_.function_name;
    if (!valid_identifier(fname) || reserved_words().count(fname)) {
      throw Error("invalid function name for generated code: " + fname);
    }
    assign_parameter_names();
    const auto& rules = sys_.rules();
    const auto& outs = sys_.outputs();
    const std::size_t n_result = opts_.antecedents_only ? rules.size() : outs.size();

    collect_used_slots();
    std::string body = emit_memberships() + emit_rules();
    if (!opts_.antecedents_only) {
      for (std::size_t o = 0; o < outs.size(); ++o) {
        body += sys_.kind() == SystemKind::SugenoT1 ? emit_sugeno(o) : emit_mamdani(o);
      }
    }

    std::ostringstream os;
    os << "// " << sys_.name() << ": " << to_string(sys_.kind()) << ", " << sys_.inputs().size()
       << (sys_.inputs().size() == 1 ? " input, " : " inputs, ") << rules.size()
       << (rules.size() == 1 ? " rule" : " rules");
    os << (opts_.antecedents_only ? "; returns rule activations.\n" : ".\n");
    os << "#include <algorithm>\n#include <array>\n#include <cmath>\n#include <cstddef>\n\n";
    os << "inline std::array<double, " << n_result << "> " << fname << "(";
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? ", " : "") << "[[maybe_unused]] double " << params_[i];
    os << ") {\n";
    os << emit_helpers();
    os << body;
    os << "  return {";
    for (std::size_t k = 0; k < n_result; ++k) {
      os << (k ? ", " : "") << (opts_.antecedents_only ? "r" : "y") << k << "_";
    }
    os << "};\n}\n";
    return os.str();
  }

 private:
  void assign_parameter_names() {
    std::set<std::string> taken;
    for (const auto& v : sys_.inputs()) {
      std::string id = codegen_identifier(v.name);
      for (int k = 2; !taken.insert(id).second; ++k) id = codegen_identifier(v.name) + "_" + std::to_string(k) + "v";
      params_.push_back(id);
    }
  }

  std::size_t slot(const Relation& rel) const {
    const std::size_t v = *sys_.input_index(rel.variable);
    return sys_.compiled().slot_offset[v] + *sys_.inputs()[v].term_index(rel.term);
  }

  void collect_used_slots() {
    std::vector<const Proposition*> todo;
    for (const auto& r : sys_.rules()) todo.push_back(&r.antecedent);
    while (!todo.empty()) {
      const Proposition* p = todo.back();
      todo.pop_back();
      switch (p->kind) {
        case Proposition::Kind::Relation: used_slots_.insert(slot(p->relation)); break;
        case Proposition::Kind::And: uses_and_ = true; break;
        case Proposition::Kind::Or: uses_or_ = true; break;
        case Proposition::Kind::Not: break;
      }
      for (const auto& c : p->children) todo.push_back(&c);
    }
  }

  std::string emit_memberships() {
    std::string out;
    const auto& vars = sys_.inputs();
    for (std::size_t v = 0; v < vars.size(); ++v) {
      for (std::size_t t = 0; t < vars[v].terms.size(); ++t) {
        const std::size_t s = sys_.compiled().slot_offset[v] + t;
        if (!used_slots_.count(s)) continue;
        const auto& mf = std::get<MembershipFunction>(vars[v].terms[t].shape);
        families_.insert(mf.index());
        out += "  const double m" + std::to_string(s) + "_ = " + mf_expr(mf, params_[v], opts_.inline_mfs) + ";\n";
      }
    }
    return out;
  }

  std::string prop_expr(const Proposition& p) const {
    switch (p.kind) {
      case Proposition::Kind::Relation: return "m" + std::to_string(slot(p.relation)) + "_";
      case Proposition::Kind::And: return "and_(" + prop_expr(p.children[0]) + ", " + prop_expr(p.children[1]) + ")";
      case Proposition::Kind::Or: return "or_(" + prop_expr(p.children[0]) + ", " + prop_expr(p.children[1]) + ")";
      case Proposition::Kind::Not: return "(1.0 - " + prop_expr(p.children[0]) + ")";
    }
    return {};
  }

  std::string emit_rules() const {
    std::string out;
    const auto& rules = sys_.rules();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      const double w = sys_.compiled().rules[r].weight;
      out += "  const double r" + std::to_string(r) + "_ = ";
      out += w == 1.0 ? prop_expr(rules[r].antecedent) : lit(w) + " * " + prop_expr(rules[r].antecedent);
      out += ";\n";
    }
    return out;
  }

  std::string emit_helpers() const {
    std::string out;
    const auto& st = sys_.settings();
    if (uses_and_) out += "  const auto and_ = [](double u_, double v_) { " + std::string(tnorm_body(st.conjunction)) + " };\n";
    if (uses_or_) out += "  const auto or_ = [](double u_, double v_) { " + std::string(snorm_body(st.disjunction)) + " };\n";
    if (!opts_.antecedents_only && sys_.kind() == SystemKind::MamdaniT1 && st.aggregation != SNorm::Max) {
      out += "  const auto agg_ = [](double u_, double v_) { " + std::string(snorm_body(st.aggregation)) + " };\n";
    }
    if (opts_.inline_mfs) return out;
    const auto has = [&](auto tag) { return families_.count(MembershipFunction(tag).index()) > 0; };
    if (has(Triangular{})) {
      out += "  const auto tri_ = [](double x_, double a_, double b_, double c_) {\n"
             "    if (!(x_ >= a_ && x_ <= c_)) return 0.0;\n"
             "    if (x_ < b_) return (x_ - a_) / (b_ - a_);\n"
             "    return x_ > b_ ? (c_ - x_) / (c_ - b_) : 1.0;\n  };\n";
    }
    if (has(Trapezoidal{})) {
      out += "  const auto trap_ = [](double x_, double a_, double b_, double c_, double d_) {\n"
             "    if (!(x_ >= a_ && x_ <= d_)) return 0.0;\n"
             "    if (x_ < b_) return (x_ - a_) / (b_ - a_);\n"
             "    return x_ > c_ ? (d_ - x_) / (d_ - c_) : 1.0;\n  };\n";
    }
    if (has(Gaussian{})) {
      out += "  const auto gauss_ = [](double x_, double mu_, double s_) {\n"
             "    const double d_ = x_ - mu_;\n"
             "    return std::exp(-(d_ * d_) / (2.0 * s_ * s_));\n  };\n";
    }
    if (has(GeneralizedBell{})) {
      out += "  const auto bell_ = [](double x_, double a_, double b_, double c_) {\n"
             "    return 1.0 / (1.0 + std::pow(std::abs((x_ - c_) / a_), 2.0 * b_));\n  };\n";
    }
    if (has(Sigmoid{})) {
      out += "  const auto sig_ = [](double x_, double a_, double c_) { return 1.0 / (1.0 + std::exp(-a_ * (x_ - c_))); };\n";
    }
    return out;
  }

  static std::string table(const std::string& name, const std::vector<double>& values) {
    std::string out = "    static constexpr double " + name + "[" + std::to_string(values.size()) + "] = {";
    for (std::size_t i = 0; i < values.size(); ++i) {
      out += (i % 5 == 0 ? "\n        " : " ") + util::format_double_literal(values[i]) + ",";
    }
    return out + "};\n";
  }

  std::string emit_mamdani(std::size_t o) const {
    const auto& var = sys_.outputs()[o];
    const auto& tables = sys_.compiled().outputs[o];
    const std::size_t n = tables.xs.size();
    const std::string N = std::to_string(n);
    const std::string y = "y" + std::to_string(o) + "_";
    const double lo = tables.xs.front();
    const double hi = tables.xs.back();
    const double fallback = var.default_value.value_or(0.5 * (lo + hi));
    const double step = (var.domain.hi - var.domain.lo) / static_cast<double>(n - 1);

    std::string out = "  double " + y + " = " + lit(fallback) + ";\n  {\n";
    out += "    static constexpr std::array<double, " + N + "> x_ = [] {\n";
    out += "      std::array<double, " + N + "> g_{};\n";
    out += "      for (std::size_t i_ = 0; i_ < " + std::to_string(n - 1) + "; ++i_) g_[i_] = " + lit(var.domain.lo) +
           " + static_cast<double>(i_) * " + lit(step) + ";\n";
    out += "      g_[" + std::to_string(n - 1) + "] = " + lit(var.domain.hi) + ";\n      return g_;\n    }();\n";
    std::set<std::size_t> terms;
    for (const auto& c : tables.contributions) terms.insert(c.term);
    for (const std::size_t t : terms) out += table("c" + std::to_string(t) + "_", tables.curves[t]);
    out += "    double a_[" + N + "] = {};\n";
    for (const auto& c : tables.contributions) {
      const std::string r = "r" + std::to_string(c.rule) + "_";
      // Value-form min/max (same results as std::min/std::max) so the loops vectorize.
      const std::string c_i = "c" + std::to_string(c.term) + "_[i_]";
      const std::string imp = sys_.settings().implication == Implication::Min
                                  ? c_i + " < " + r + " ? " + c_i + " : " + r
                                  : r + " * " + c_i;
      const std::string agg = sys_.settings().aggregation == SNorm::Max ? "a_[i_] < v_ ? v_ : a_[i_]"
                                                                        : "agg_(a_[i_], v_)";
      out += "    if (" + r + " > 0.0) {\n      for (std::size_t i_ = 0; i_ < " + N + "; ++i_) {\n        const double v_ = " +
             imp + ";\n        a_[i_] = " + agg + ";\n      }\n    }\n";
    }
    const std::string clamp_lo = lit(lo);
    const std::string clamp_hi = lit(hi);
    switch (sys_.settings().defuzzifier) {
      case Defuzzifier::Centroid:
        // Separate loops: each reduction then maps onto one vector accumulator.
        out += "    const std::size_t n4_ = " + std::to_string(n / 4 * 4) + ";\n";
        out += "    double w0_ = 0.0, w1_ = 0.0, w2_ = 0.0, w3_ = 0.0;\n"
               "    for (std::size_t i_ = 0; i_ < n4_; i_ += 4) {\n"
               "      w0_ += x_[i_] * a_[i_];\n      w1_ += x_[i_ + 1] * a_[i_ + 1];\n"
               "      w2_ += x_[i_ + 2] * a_[i_ + 2];\n      w3_ += x_[i_ + 3] * a_[i_ + 3];\n    }\n";
        out += "    double s0_ = 0.0, s1_ = 0.0, s2_ = 0.0, s3_ = 0.0;\n"
               "    for (std::size_t i_ = 0; i_ < n4_; i_ += 4) {\n"
               "      s0_ += a_[i_];\n      s1_ += a_[i_ + 1];\n      s2_ += a_[i_ + 2];\n      s3_ += a_[i_ + 3];\n    }\n";
        out += "    double wt_ = (w0_ + w1_) + (w2_ + w3_);\n"
               "    double ms_ = (s0_ + s1_) + (s2_ + s3_);\n";
        out += "    for (std::size_t i_ = n4_; i_ < " + N + "; ++i_) {\n      wt_ += x_[i_] * a_[i_];\n      ms_ += a_[i_];\n    }\n";
        out += "    if (ms_ != 0.0) " + y + " = std::min(std::max(wt_ / ms_, " + clamp_lo + "), " + clamp_hi + ");\n";
        break;
      case Defuzzifier::Bisector:
        out += "    double t_ = 0.0;\n    for (std::size_t i_ = 0; i_ < " + N + "; ++i_) t_ += a_[i_];\n";
        out += "    if (t_ != 0.0) {\n      const double h_ = 0.5 * t_;\n      double run_ = 0.0;\n      " + y +
               " = " + clamp_hi + ";\n";
        out += "      for (std::size_t i_ = 0; i_ < " + N + "; ++i_) {\n        run_ += a_[i_];\n        if (run_ >= h_) {\n          " +
               y + " = x_[i_];\n          break;\n        }\n      }\n    }\n";
        break;
      case Defuzzifier::MeanOfMaxima:
      case Defuzzifier::FirstOfMaxima:
      case Defuzzifier::LastOfMaxima: {
        out += "    double p_ = 0.0;\n    for (std::size_t i_ = 0; i_ < " + N + "; ++i_) p_ = std::max(p_, a_[i_]);\n";
        out += "    if (p_ != 0.0) {\n";
        const auto kind = sys_.settings().defuzzifier;
        if (kind == Defuzzifier::MeanOfMaxima) {
          out += "      double sum_ = 0.0;\n      double count_ = 0.0;\n";
          out += "      for (std::size_t i_ = 0; i_ < " + N + "; ++i_) {\n        if (a_[i_] == p_) {\n"
                 "          sum_ += x_[i_];\n          count_ += 1.0;\n        }\n      }\n";
          out += "      " + y + " = std::min(std::max(sum_ / count_, " + clamp_lo + "), " + clamp_hi + ");\n";
        } else {
          out += kind == Defuzzifier::FirstOfMaxima ? "      for (std::size_t i_ = 0; i_ < " + N + "; ++i_) {\n"
                                                    : "      for (std::size_t i_ = " + N + "; i_-- > 0;) {\n";
          out += "        if (a_[i_] == p_) {\n          " + y + " = x_[i_];\n          break;\n        }\n      }\n";
        }
        out += "    }\n";
        break;
      }
    }
    return out + "  }\n";
  }

  std::string emit_sugeno(std::size_t o) const {
    const auto& var = sys_.outputs()[o];
    const auto& tables = sys_.compiled().outputs[o];
    const std::string y = "y" + std::to_string(o) + "_";
    const double fallback = var.default_value.value_or(var.domain.midpoint());
    std::string out = "  double " + y + " = " + lit(fallback) + ";\n  {\n";
    out += "    double nu_ = 0.0;\n    double de_ = 0.0;\n    double lo_ = HUGE_VAL;\n    double hi_ = -HUGE_VAL;\n";
    for (const auto& c : tables.contributions) {
      const std::string r = "r" + std::to_string(c.rule) + "_";
      const auto& st = tables.sugeno[c.term];
      out += "    if (" + r + " > 0.0) {\n      double z_ = " + lit(st.offset) + ";\n";
      for (const auto& [input, coeff] : st.coefficients) {
        out += "      z_ += " + lit(coeff) + " * " + params_[input] + ";\n";
      }
      out += "      nu_ += " + r + " * z_;\n      de_ += " + r + ";\n"
             "      lo_ = std::min(lo_, z_);\n      hi_ = std::max(hi_, z_);\n    }\n";
    }
    out += "    if (de_ != 0.0) " + y + " = std::min(std::max(nu_ / de_, lo_), hi_);\n  }\n";
    return out;
  }

  const FuzzySystem& sys_;
  const CodegenOptions& opts_;
  std::vector<std::string> params_;
  std::set<std::size_t> used_slots_;
  std::set<std::size_t> families_;
  bool uses_and_ = false;
  bool uses_or_ = false;
};

}  // namespace

std::string codegen_identifier(std::string_view name) {
  std::string id;
  for (const char c : name) {
    const char d = std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    if (d != '_' || id.empty() || id.back() != '_') id += d;
  }
  if (id.empty()) id = "v";
  // Generated locals all end in '_'; parameters never do.
  if (id.back() == '_') id += 'v';
  if (id.front() == '_') id = "v" + id;
  if (std::isdigit(static_cast<unsigned char>(id.front())) || reserved_words().count(id)) id = "v_" + id;
  return id;
}

std::string generate(const FuzzySystem& sys, const CodegenOptions& opts) { return Generator(sys, opts).run(); }

}  // namespace fuzzkit
