#include "fuzzkit/system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fuzzkit/error.hpp"
#include "util.hpp"

namespace fuzzkit {

Proposition Proposition::is(std::string variable, std::string term) {
  Proposition p;
  p.kind = Kind::Relation;
  p.relation = {std::move(variable), std::move(term)};
  return p;
}

Proposition Proposition::conj(Proposition lhs, Proposition rhs) {
  Proposition p;
  p.kind = Kind::And;
  p.children.reserve(2);
  p.children.push_back(std::move(lhs));
  p.children.push_back(std::move(rhs));
  return p;
}

Proposition Proposition::disj(Proposition lhs, Proposition rhs) {
  Proposition p = conj(std::move(lhs), std::move(rhs));
  p.kind = Kind::Or;
  return p;
}

Proposition Proposition::negate(Proposition child) {
  Proposition p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(child));
  return p;
}

std::optional<std::size_t> Variable::term_index(std::string_view term) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].name == term) return i;
  }
  return std::nullopt;
}

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::MamdaniT1: return "mamdani";
    case SystemKind::SugenoT1: return "sugeno";
    case SystemKind::MamdaniIT2: return "mamdani-it2";
  }
  return "";
}

std::vector<double> sample_grid(const Domain& domain, int resolution) {
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<double> xs(n);
  const double step = (domain.hi - domain.lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) xs[i] = domain.lo + static_cast<double>(i) * step;
  xs[n - 1] = domain.hi;
  return xs;
}

std::optional<std::size_t> FuzzySystem::input_index(std::string_view name) const {
  for (std::size_t i = 0; i < desc_->inputs.size(); ++i) {
    if (desc_->inputs[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> FuzzySystem::output_index(std::string_view name) const {
  for (std::size_t i = 0; i < desc_->outputs.size(); ++i) {
    if (desc_->outputs[i].name == name) return i;
  }
  return std::nullopt;
}

namespace {

using util::Overloaded;

[[noreturn]] void fail(const std::string& message) { throw ModelError(message); }

std::optional<std::size_t> find_variable(const std::vector<Variable>& vars, std::string_view name) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

void check_interval(const Variable& var, const Term& term, const IntervalMF& imf) {
  validate(imf.lower);
  validate(imf.upper);
  constexpr int kSamples = 1001;
  const auto xs = sample_grid(var.domain, kSamples);
  for (double x : xs) {
    if (eval_mf(imf.lower, x) > eval_mf(imf.upper, x)) {
      fail("interval term " + var.name + "." + term.name + ": lower exceeds upper at x = " +
           util::format_number(x));
    }
  }
}

void validate_variable(const Variable& var, SystemKind kind, bool is_output,
                       const std::vector<Variable>& inputs) {
  const std::string where = (is_output ? "output " : "input ") + var.name;
  if (var.name.empty()) fail("variable name must not be empty");
  if (!(std::isfinite(var.domain.lo) && std::isfinite(var.domain.hi)) ||
      !(var.domain.lo < var.domain.hi)) {
    fail(where + ": domain requires lo < hi");
  }
  if (var.terms.empty()) fail(where + " has no terms");
  std::set<std::string> seen;
  for (const auto& term : var.terms) {
    if (!seen.insert(term.name).second) fail(where + ": duplicate term " + term.name);
    const std::string what = where + "." + term.name;
    try {
      std::visit(
          Overloaded{
              [&](const MembershipFunction& mf) {
                if (kind == SystemKind::MamdaniIT2) fail(what + ": interval membership expected");
                if (kind == SystemKind::SugenoT1 && is_output) {
                  fail(what + ": Sugeno outputs take constant or linear consequents");
                }
                validate(mf);
              },
              [&](const IntervalMF& imf) {
                if (kind != SystemKind::MamdaniIT2) {
                  fail(what + ": interval memberships need an interval type-2 system");
                }
                check_interval(var, term, imf);
              },
              [&](const SugenoConsequent& sc) {
                if (kind != SystemKind::SugenoT1 || !is_output) {
                  fail(what + ": Sugeno consequents are only valid on Sugeno outputs");
                }
                std::visit(Overloaded{
                               [&](const SugenoConstant& c) {
                                 if (!std::isfinite(c.value)) fail(what + ": non-finite constant");
                               },
                               [&](const SugenoLinear& lin) {
                                 if (!std::isfinite(lin.offset)) fail(what + ": non-finite offset");
                                 for (const auto& [name, coeff] : lin.coefficients) {
                                   if (!find_variable(inputs, name)) {
                                     fail(what + ": unknown input " + name + " in linear consequent");
                                   }
                                   if (!std::isfinite(coeff)) fail(what + ": non-finite coefficient");
                                 }
                               },
                           },
                           sc);
              },
          },
          term.shape);
    } catch (const ModelError& e) {
      const std::string msg = e.what();
      if (msg.rfind(where, 0) == 0) throw;
      fail(what + ": " + msg);
    }
  }
  if (var.default_value && !std::isfinite(*var.default_value)) fail(where + ": non-finite default");
}

struct Emitter {
  const SystemDescription& d;
  const std::vector<std::size_t>& offsets;
  std::vector<detail::Instr>& program;
  std::size_t depth = 0;
  std::size_t max_depth = 0;

  void push() { max_depth = std::max(max_depth, ++depth); }

  void emit(const Proposition& p) {
    switch (p.kind) {
      case Proposition::Kind::Relation: {
        const auto& rel = p.relation;
        const auto vi = find_variable(d.inputs, rel.variable);
        if (!vi) {
          if (find_variable(d.outputs, rel.variable)) {
            fail("rule antecedent references output variable " + rel.variable);
          }
          fail("rule references unknown variable " + rel.variable);
        }
        const auto ti = d.inputs[*vi].term_index(rel.term);
        if (!ti) fail("variable " + rel.variable + " has no term " + rel.term);
        program.push_back({detail::Instr::Load, static_cast<std::uint32_t>(offsets[*vi] + *ti)});
        push();
        return;
      }
      case Proposition::Kind::And:
      case Proposition::Kind::Or:
        if (p.children.size() != 2) fail("binary connective needs two operands");
        emit(p.children[0]);
        emit(p.children[1]);
        program.push_back(
            {p.kind == Proposition::Kind::And ? detail::Instr::And : detail::Instr::Or, 0});
        --depth;
        return;
      case Proposition::Kind::Not:
        if (p.children.size() != 1) fail("negation needs one operand");
        emit(p.children[0]);
        program.push_back({detail::Instr::Not, 0});
        return;
    }
  }
};

}  // namespace

FuzzySystem FuzzySystem::create(SystemDescription d) {
  if (d.name.empty()) fail("system name must not be empty");
  if (d.inputs.empty()) fail("system " + d.name + " has no input variables");
  if (d.outputs.empty()) fail("system " + d.name + " has no output variables");
  if (d.settings.resolution < 2) fail("resolution must be at least 2");
  if (d.settings.resolution > EngineSettings::kMaxResolution) {
    fail("resolution must be at most " + std::to_string(EngineSettings::kMaxResolution));
  }

  // A linear consequent without coefficients is a constant.
  for (auto& v : d.outputs) {
    for (auto& t : v.terms) {
      if (auto* sc = std::get_if<SugenoConsequent>(&t.shape)) {
        if (const auto* lin = std::get_if<SugenoLinear>(sc); lin && lin->coefficients.empty()) {
          *sc = SugenoConstant{lin->offset};
        }
      }
    }
  }

  std::set<std::string> names;
  for (const auto& v : d.inputs) {
    if (!names.insert(v.name).second) fail("duplicate variable " + v.name);
  }
  for (const auto& v : d.outputs) {
    if (!names.insert(v.name).second) fail("duplicate variable " + v.name);
  }
  for (const auto& v : d.inputs) validate_variable(v, d.kind, false, d.inputs);
  for (const auto& v : d.outputs) validate_variable(v, d.kind, true, d.inputs);

  auto compiled = std::make_shared<detail::Compiled>();
  for (const auto& v : d.inputs) {
    compiled->slot_offset.push_back(compiled->slot_count);
    compiled->slot_count += v.terms.size();
  }
  compiled->outputs.resize(d.outputs.size());

  for (std::size_t r = 0; r < d.rules.size(); ++r) {
    const Rule& rule = d.rules[r];
    const std::string where = "rule " + std::to_string(r + 1);
    if (!(rule.weight >= 0.0 && rule.weight <= 1.0)) fail(where + ": weight must lie in [0, 1]");
    if (rule.consequents.empty()) fail(where + " has no consequent");

    detail::CompiledRule cr;
    cr.weight = rule.weight;
    Emitter emitter{d, compiled->slot_offset, cr.program};
    try {
      emitter.emit(rule.antecedent);
    } catch (const ModelError& e) {
      fail(where + ": " + e.what());
    }
    compiled->max_stack = std::max(compiled->max_stack, emitter.max_depth);
    compiled->rules.push_back(std::move(cr));

    for (const auto& rel : rule.consequents) {
      const auto oi = find_variable(d.outputs, rel.variable);
      if (!oi) fail(where + ": consequent " + rel.variable + " is not an output variable");
      const auto ti = d.outputs[*oi].term_index(rel.term);
      if (!ti) fail(where + ": variable " + rel.variable + " has no term " + rel.term);
      compiled->outputs[*oi].contributions.push_back({r, *ti});
    }
  }

  for (std::size_t o = 0; o < d.outputs.size(); ++o) {
    const Variable& out = d.outputs[o];
    auto& tables = compiled->outputs[o];
    if (tables.contributions.empty()) fail("no rule mentions output " + out.name);
    if (d.kind == SystemKind::SugenoT1) {
      for (const auto& term : out.terms) {
        auto& st = tables.sugeno.emplace_back();
        std::visit(Overloaded{
                       [&](const SugenoConstant& c) { st.offset = c.value; },
                       [&](const SugenoLinear& lin) {
                         st.offset = lin.offset;
                         for (const auto& [name, coeff] : lin.coefficients) {
                           st.coefficients.emplace_back(*find_variable(d.inputs, name), coeff);
                         }
                       },
                   },
                   std::get<SugenoConsequent>(term.shape));
      }
      continue;
    }
    tables.xs = sample_grid(out.domain, d.settings.resolution);
    for (const auto& term : out.terms) {
      if (d.kind == SystemKind::MamdaniT1) {
        const auto& mf = std::get<MembershipFunction>(term.shape);
        auto& curve = tables.curves.emplace_back(tables.xs.size());
        for (std::size_t i = 0; i < tables.xs.size(); ++i) curve[i] = eval_mf(mf, tables.xs[i]);
      } else {
        const auto& imf = std::get<IntervalMF>(term.shape);
        auto& lo = tables.lower.emplace_back(tables.xs.size());
        auto& up = tables.upper.emplace_back(tables.xs.size());
        for (std::size_t i = 0; i < tables.xs.size(); ++i) {
          lo[i] = eval_mf(imf.lower, tables.xs[i]);
          up[i] = eval_mf(imf.upper, tables.xs[i]);
        }
      }
    }
  }

  return FuzzySystem(std::make_shared<const SystemDescription>(std::move(d)), std::move(compiled));
}

}  // namespace fuzzkit
