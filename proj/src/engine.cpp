#include "fuzzkit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fuzzkit/error.hpp"
#include "fuzzkit/kernels.hpp"

namespace fuzzkit {

namespace {

using detail::Instr;

// Postfix antecedent programs, specialized per connective pair so the inner
// loop carries no strategy dispatch.
using ProgramFn = double (*)(const std::vector<Instr>&, const double*, double*);
using IntervalProgramFn = void (*)(const std::vector<Instr>&, const double*, const double*,
                                   double*, double*, double&, double&);

template <TNorm T, SNorm S>
double run_program(const std::vector<Instr>& program, const double* slots, double* stack) {
  std::size_t sp = 0;
  for (const Instr ins : program) {
    switch (ins.op) {
      case Instr::Load: stack[sp++] = slots[ins.slot]; break;
      case Instr::And:
        --sp;
        stack[sp - 1] = tnorm<T>(stack[sp - 1], stack[sp]);
        break;
      case Instr::Or:
        --sp;
        stack[sp - 1] = snorm<S>(stack[sp - 1], stack[sp]);
        break;
      case Instr::Not: stack[sp - 1] = 1.0 - stack[sp - 1]; break;
    }
  }
  return stack[0];
}

// Interval evaluation: connectives are monotone so bounds map to bounds;
// negation swaps them.
template <TNorm T, SNorm S>
void run_interval_program(const std::vector<Instr>& program, const double* lo_slots,
                          const double* up_slots, double* lo, double* up, double& out_lo,
                          double& out_up) {
  std::size_t sp = 0;
  for (const Instr ins : program) {
    switch (ins.op) {
      case Instr::Load:
        lo[sp] = lo_slots[ins.slot];
        up[sp] = up_slots[ins.slot];
        ++sp;
        break;
      case Instr::And:
        --sp;
        lo[sp - 1] = tnorm<T>(lo[sp - 1], lo[sp]);
        up[sp - 1] = tnorm<T>(up[sp - 1], up[sp]);
        break;
      case Instr::Or:
        --sp;
        lo[sp - 1] = snorm<S>(lo[sp - 1], lo[sp]);
        up[sp - 1] = snorm<S>(up[sp - 1], up[sp]);
        break;
      case Instr::Not: {
        const double l = lo[sp - 1];
        lo[sp - 1] = 1.0 - up[sp - 1];
        up[sp - 1] = 1.0 - l;
        break;
      }
    }
  }
  out_lo = lo[0];
  out_up = up[0];
}

template <TNorm T>
ProgramFn pick_program(SNorm s) {
  switch (s) {
    case SNorm::Max: return &run_program<T, SNorm::Max>;
    case SNorm::ProbSum: return &run_program<T, SNorm::ProbSum>;
    case SNorm::BoundedSum: return &run_program<T, SNorm::BoundedSum>;
    case SNorm::Drastic: return &run_program<T, SNorm::Drastic>;
    case SNorm::Nilpotent: return &run_program<T, SNorm::Nilpotent>;
    case SNorm::Einstein: return &run_program<T, SNorm::Einstein>;
  }
  return nullptr;
}

ProgramFn pick_program(TNorm t, SNorm s) {
  switch (t) {
    case TNorm::Min: return pick_program<TNorm::Min>(s);
    case TNorm::Prod: return pick_program<TNorm::Prod>(s);
    case TNorm::Lukasiewicz: return pick_program<TNorm::Lukasiewicz>(s);
    case TNorm::Drastic: return pick_program<TNorm::Drastic>(s);
    case TNorm::Nilpotent: return pick_program<TNorm::Nilpotent>(s);
    case TNorm::Hamacher: return pick_program<TNorm::Hamacher>(s);
  }
  return nullptr;
}

template <TNorm T>
IntervalProgramFn pick_interval_program(SNorm s) {
  switch (s) {
    case SNorm::Max: return &run_interval_program<T, SNorm::Max>;
    case SNorm::ProbSum: return &run_interval_program<T, SNorm::ProbSum>;
    case SNorm::BoundedSum: return &run_interval_program<T, SNorm::BoundedSum>;
    case SNorm::Drastic: return &run_interval_program<T, SNorm::Drastic>;
    case SNorm::Nilpotent: return &run_interval_program<T, SNorm::Nilpotent>;
    case SNorm::Einstein: return &run_interval_program<T, SNorm::Einstein>;
  }
  return nullptr;
}

IntervalProgramFn pick_interval_program(TNorm t, SNorm s) {
  switch (t) {
    case TNorm::Min: return pick_interval_program<TNorm::Min>(s);
    case TNorm::Prod: return pick_interval_program<TNorm::Prod>(s);
    case TNorm::Lukasiewicz: return pick_interval_program<TNorm::Lukasiewicz>(s);
    case TNorm::Drastic: return pick_interval_program<TNorm::Drastic>(s);
    case TNorm::Nilpotent: return pick_interval_program<TNorm::Nilpotent>(s);
    case TNorm::Hamacher: return pick_interval_program<TNorm::Hamacher>(s);
  }
  return nullptr;
}

double grid_midpoint(std::span<const double> xs) { return 0.5 * (xs.front() + xs.back()); }

// Largest index k with xs[k] <= y (0 if y is left of the grid).
std::size_t switch_point(std::span<const double> xs, double y) {
  const auto it = std::upper_bound(xs.begin(), xs.end(), y);
  return it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
}

}  // namespace

double InferenceResult::at(std::string_view output) const {
  for (const auto& [name, value] : crisp) {
    if (name == output) return value;
  }
  throw std::out_of_range("unknown output: " + std::string(output));
}

Defuzzified defuzzify(Defuzzifier kind, std::span<const double> xs, std::span<const double> mus) {
  if (xs.empty() || xs.size() != mus.size()) {
    throw std::invalid_argument("defuzzify: grid and curve sizes differ or are empty");
  }
  const double lo = xs.front();
  const double hi = xs.back();
  switch (kind) {
    case Defuzzifier::Centroid: {
      const auto m = kernels::moments(xs, mus);
      if (m.mass == 0.0) return {grid_midpoint(xs), true};
      return {std::min(std::max(m.weighted / m.mass, lo), hi), false};
    }
    case Defuzzifier::Bisector: {
      double total = 0.0;
      for (double mu : mus) total += mu;
      if (total == 0.0) return {grid_midpoint(xs), true};
      const double half = 0.5 * total;
      double running = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        running += mus[i];
        if (running >= half) return {xs[i], false};
      }
      return {hi, false};
    }
    case Defuzzifier::MeanOfMaxima:
    case Defuzzifier::FirstOfMaxima:
    case Defuzzifier::LastOfMaxima: {
      const double peak = kernels::max_value(mus);
      if (peak == 0.0) return {grid_midpoint(xs), true};
      if (kind == Defuzzifier::FirstOfMaxima) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (mus[i] == peak) return {xs[i], false};
        }
      } else if (kind == Defuzzifier::LastOfMaxima) {
        for (std::size_t i = xs.size(); i-- > 0;) {
          if (mus[i] == peak) return {xs[i], false};
        }
      } else {
        double sum = 0.0;
        double count = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (mus[i] == peak) {
            sum += xs[i];
            count += 1.0;
          }
        }
        return {std::min(std::max(sum / count, lo), hi), false};
      }
      return {grid_midpoint(xs), true};
    }
  }
  return {grid_midpoint(xs), true};
}

double embedded_centroid(std::span<const double> xs, std::span<const double> lower,
                         std::span<const double> upper, std::size_t switch_index, bool left) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool use_upper = left ? i <= switch_index : i >= switch_index;
    const double theta = use_upper ? upper[i] : lower[i];
    num += xs[i] * theta;
    den += theta;
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

namespace {

constexpr int kMaxKmIterations = 100;

// Left form: upper up to the last sample <= y. Right form: upper from the
// first sample > y.
std::size_t km_switch(std::span<const double> xs, double y, bool left) {
  if (left) return switch_point(xs, y);
  const auto it = std::upper_bound(xs.begin(), xs.end(), y);
  return std::min(static_cast<std::size_t>(it - xs.begin()), xs.size() - 1);
}

double km_endpoint(std::span<const double> xs, std::span<const double> lower,
                   std::span<const double> upper, double start, bool left, int& iterations) {
  const std::size_t n = xs.size();
  const auto better = [left](double cand, double cur) {
    return !std::isnan(cand) && (std::isnan(cur) || (left ? cand < cur : cand > cur));
  };
  std::size_t k = km_switch(xs, start, left);
  for (int iter = 0; iter < kMaxKmIterations; ++iter) {
    ++iterations;
    double y = embedded_centroid(xs, lower, upper, k, left);
    if (std::isnan(y)) {
      // Empty embedded set on the iteration path: fall back to a full scan.
      for (std::size_t cand = 0; cand < n; ++cand) {
        const double v = embedded_centroid(xs, lower, upper, cand, left);
        if (better(v, y)) y = v;
      }
      return y;
    }
    const std::size_t next = km_switch(xs, y, left);
    if (next != k) {
      k = next;
      continue;
    }
    // Fixed point reached; settle rounding-level ties between neighbouring
    // switch points.
    double best = y;
    for (bool moved = true; moved;) {
      moved = false;
      for (std::size_t cand : {k - 1, k + 1}) {
        if (cand >= n) continue;  // also catches k - 1 wrapping below zero
        const double v = embedded_centroid(xs, lower, upper, cand, left);
        if (better(v, best)) {
          best = v;
          k = cand;
          moved = true;
          break;
        }
      }
    }
    return best;
  }
  throw EvaluationError("Karnik-Mendel type reduction did not converge in " +
                        std::to_string(kMaxKmIterations) + " iterations");
}

}  // namespace

CentroidInterval km_reduce(std::span<const double> xs, std::span<const double> lower,
                           std::span<const double> upper) {
  if (xs.empty() || xs.size() != lower.size() || xs.size() != upper.size()) {
    throw std::invalid_argument("km_reduce: grid and curve sizes differ or are empty");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double mid = 0.5 * (lower[i] + upper[i]);
    num += xs[i] * mid;
    den += mid;
  }
  if (den == 0.0) {
    const double m = grid_midpoint(xs);
    return {m, m, true, 0};
  }
  const double start = num / den;
  CentroidInterval out{0.0, 0.0, false, 0};
  out.left = std::clamp(km_endpoint(xs, lower, upper, start, true, out.iterations), xs.front(), xs.back());
  out.right = std::clamp(km_endpoint(xs, lower, upper, start, false, out.iterations), xs.front(), xs.back());
  return out;
}

// ---------------------------------------------------------------------------

Evaluator::Evaluator(FuzzySystem system) : system_(std::move(system)) {
  const auto& c = system_.compiled();
  slots_.resize(c.slot_count);
  stack_.resize(c.max_stack);
  activations_.resize(c.rules.size());
  std::size_t grid = 0;
  for (const auto& o : c.outputs) grid = std::max(grid, o.xs.size());
  acc_.resize(grid);
  if (system_.kind() == SystemKind::MamdaniIT2) {
    slots_lower_.resize(c.slot_count);
    stack_lower_.resize(c.max_stack);
    activations_lower_.resize(c.rules.size());
    acc_lower_.resize(grid);
  }
}

void Evaluator::fuzzify(std::span<const double> inputs) {
  const auto& vars = system_.inputs();
  const auto& offsets = system_.compiled().slot_offset;
  if (inputs.size() != vars.size()) {
    throw std::invalid_argument("expected " + std::to_string(vars.size()) + " inputs, got " +
                                std::to_string(inputs.size()));
  }
  const bool interval = system_.kind() == SystemKind::MamdaniIT2;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const double x = inputs[v];
    const auto& terms = vars[v].terms;
    double* slot = slots_.data() + offsets[v];
    if (!interval) {
      for (std::size_t t = 0; t < terms.size(); ++t) {
        slot[t] = eval_mf(std::get<MembershipFunction>(terms[t].shape), x);
      }
    } else {
      double* slot_lo = slots_lower_.data() + offsets[v];
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto& imf = std::get<IntervalMF>(terms[t].shape);
        slot_lo[t] = eval_mf(imf.lower, x);
        slot[t] = eval_mf(imf.upper, x);
      }
    }
  }
}

void Evaluator::fire_interval(std::span<const double> inputs) {
  fuzzify(inputs);
  const auto& settings = system_.settings();
  const auto run = pick_interval_program(settings.conjunction, settings.disjunction);
  const auto& rules = system_.compiled().rules;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    double lo = 0.0;
    double up = 0.0;
    run(rules[r].program, slots_lower_.data(), slots_.data(), stack_lower_.data(), stack_.data(),
        lo, up);
    activations_lower_[r] = rules[r].weight * lo;
    activations_[r] = rules[r].weight * up;
  }
}

void Evaluator::fire(std::span<const double> inputs, std::span<double> activations) {
  const auto& rules = system_.compiled().rules;
  if (activations.size() != rules.size()) {
    throw std::invalid_argument("activation buffer size must equal the rule count");
  }
  if (system_.kind() == SystemKind::MamdaniIT2) {
    fire_interval(inputs);
    std::copy(activations_.begin(), activations_.end(), activations.begin());
    return;
  }
  fuzzify(inputs);
  const auto& settings = system_.settings();
  const ProgramFn run = pick_program(settings.conjunction, settings.disjunction);
  for (std::size_t r = 0; r < rules.size(); ++r) {
    activations[r] = rules[r].weight * run(rules[r].program, slots_.data(), stack_.data());
  }
}

double Evaluator::sugeno_output(std::size_t output, std::span<const double> inputs,
                                bool& degenerate) const {
  const auto& tables = system_.compiled().outputs[output];
  double num = 0.0;
  double den = 0.0;
  double zmin = std::numeric_limits<double>::infinity();
  double zmax = -std::numeric_limits<double>::infinity();
  for (const auto& [rule, term] : tables.contributions) {
    const double r = activations_[rule];
    if (!(r > 0.0)) continue;
    const auto& st = tables.sugeno[term];
    double z = st.offset;
    for (const auto& [input, coeff] : st.coefficients) z += coeff * inputs[input];
    num += r * z;
    den += r;
    zmin = std::min(zmin, z);
    zmax = std::max(zmax, z);
  }
  const auto& var = system_.outputs()[output];
  if (den == 0.0) {
    degenerate = true;
    return var.default_value.value_or(var.domain.midpoint());
  }
  degenerate = false;
  return std::min(std::max(num / den, zmin), zmax);
}

double Evaluator::mamdani_output(std::size_t output, bool& degenerate) {
  const auto& settings = system_.settings();
  const auto& tables = system_.compiled().outputs[output];
  const std::span<double> acc(acc_.data(), tables.xs.size());
  std::fill(acc.begin(), acc.end(), 0.0);
  for (const auto& [rule, term] : tables.contributions) {
    const double r = activations_[rule];
    if (r > 0.0) {
      kernels::accumulate_implied(acc, tables.curves[term], r, settings.implication,
                                  settings.aggregation);
    }
  }
  const auto d = defuzzify(settings.defuzzifier, tables.xs, acc);
  degenerate = d.degenerate;
  const auto& var = system_.outputs()[output];
  return d.degenerate && var.default_value ? *var.default_value : d.value;
}

double Evaluator::it2_output(std::size_t output, bool& degenerate,
                             std::pair<double, double>& interval) {
  const auto& settings = system_.settings();
  const auto& tables = system_.compiled().outputs[output];
  const std::size_t n = tables.xs.size();
  const std::span<double> up(acc_.data(), n);
  const std::span<double> lo(acc_lower_.data(), n);
  std::fill(up.begin(), up.end(), 0.0);
  std::fill(lo.begin(), lo.end(), 0.0);
  for (const auto& [rule, term] : tables.contributions) {
    if (const double r = activations_[rule]; r > 0.0) {
      kernels::accumulate_implied(up, tables.upper[term], r, settings.implication,
                                  settings.aggregation);
    }
    if (const double r = activations_lower_[rule]; r > 0.0) {
      kernels::accumulate_implied(lo, tables.lower[term], r, settings.implication,
                                  settings.aggregation);
    }
  }
  const auto km = km_reduce(tables.xs, lo, up);
  degenerate = km.degenerate;
  interval = {km.left, km.right};
  const auto& var = system_.outputs()[output];
  if (km.degenerate && var.default_value) return *var.default_value;
  return 0.5 * (km.left + km.right);
}

void Evaluator::evaluate(std::span<const double> inputs, std::span<double> outputs) {
  const std::size_t n_out = system_.outputs().size();
  if (outputs.size() != n_out) {
    throw std::invalid_argument("output buffer size must equal the output count");
  }
  if (system_.kind() == SystemKind::MamdaniIT2) {
    fire_interval(inputs);
  } else {
    fire(inputs, activations_);
  }
  bool degenerate = false;
  std::pair<double, double> interval;
  for (std::size_t o = 0; o < n_out; ++o) {
    switch (system_.kind()) {
      case SystemKind::MamdaniT1: outputs[o] = mamdani_output(o, degenerate); break;
      case SystemKind::SugenoT1: outputs[o] = sugeno_output(o, inputs, degenerate); break;
      case SystemKind::MamdaniIT2: outputs[o] = it2_output(o, degenerate, interval); break;
    }
  }
}

InferenceResult Evaluator::infer(std::span<const double> inputs) {
  InferenceResult result;
  if (system_.kind() == SystemKind::MamdaniIT2) {
    fire_interval(inputs);
    result.firing.lower = activations_lower_;
  } else {
    fire(inputs, activations_);
  }
  result.firing.activations = activations_;
  if (system_.kind() != SystemKind::SugenoT1) result.aggregated.emplace();

  const auto& outs = system_.outputs();
  for (std::size_t o = 0; o < outs.size(); ++o) {
    bool degenerate = false;
    double value = 0.0;
    const auto& tables = system_.compiled().outputs[o];
    switch (system_.kind()) {
      case SystemKind::SugenoT1: value = sugeno_output(o, inputs, degenerate); break;
      case SystemKind::MamdaniT1: {
        value = mamdani_output(o, degenerate);
        const auto n = tables.xs.size();
        result.aggregated->push_back(
            {outs[o].name, tables.xs, std::vector<double>(acc_.begin(), acc_.begin() + n), {}, {}});
        break;
      }
      case SystemKind::MamdaniIT2: {
        std::pair<double, double> interval;
        value = it2_output(o, degenerate, interval);
        const auto n = tables.xs.size();
        result.aggregated->push_back({outs[o].name, tables.xs,
                                      std::vector<double>(acc_.begin(), acc_.begin() + n),
                                      std::vector<double>(acc_lower_.begin(), acc_lower_.begin() + n),
                                      interval});
        break;
      }
    }
    result.crisp.emplace_back(outs[o].name, value);
    result.degenerate_outputs.push_back(degenerate);
    result.degenerate = result.degenerate || degenerate;
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<double> input_vector(const FuzzySystem& sys, const InputMap& inputs) {
  std::vector<double> out;
  out.reserve(sys.inputs().size());
  for (const auto& v : sys.inputs()) {
    const auto it = inputs.find(v.name);
    if (it == inputs.end()) throw MissingInputError(v.name);
    out.push_back(it->second);
  }
  return out;
}

namespace {

double eval_tree(const Proposition& p, const FuzzySystem& sys, const InputMap& inputs) {
  const auto& settings = sys.settings();
  switch (p.kind) {
    case Proposition::Kind::Relation: {
      const auto vi = sys.input_index(p.relation.variable);
      if (!vi) throw ModelError("unknown input variable " + p.relation.variable);
      const auto& var = sys.inputs()[*vi];
      const auto ti = var.term_index(p.relation.term);
      if (!ti) throw ModelError("variable " + var.name + " has no term " + p.relation.term);
      const auto it = inputs.find(var.name);
      if (it == inputs.end()) throw MissingInputError(var.name);
      return eval_mf(std::get<MembershipFunction>(var.terms[*ti].shape), it->second);
    }
    case Proposition::Kind::And:
      return tnorm(settings.conjunction, eval_tree(p.children.at(0), sys, inputs),
                   eval_tree(p.children.at(1), sys, inputs));
    case Proposition::Kind::Or:
      return snorm(settings.disjunction, eval_tree(p.children.at(0), sys, inputs),
                   eval_tree(p.children.at(1), sys, inputs));
    case Proposition::Kind::Not: return 1.0 - eval_tree(p.children.at(0), sys, inputs);
  }
  return 0.0;
}

void require_kind(const FuzzySystem& sys, SystemKind kind, const char* what) {
  if (sys.kind() != kind) {
    throw EvaluationError(std::string(what) + " requires a " + std::string(to_string(kind)) +
                          " system, got " + std::string(to_string(sys.kind())));
  }
}

}  // namespace

double eval_proposition(const Proposition& p, const FuzzySystem& sys, const InputMap& inputs) {
  if (sys.kind() == SystemKind::MamdaniIT2) {
    throw EvaluationError("eval_proposition: interval type-2 antecedents yield intervals; use fire_rules");
  }
  return eval_tree(p, sys, inputs);
}

FiringVector fire_rules(const FuzzySystem& sys, const InputMap& inputs) {
  const auto x = input_vector(sys, inputs);
  Evaluator ev(sys);
  FiringVector out;
  out.activations.resize(sys.rules().size());
  ev.fire(x, out.activations);
  if (sys.kind() == SystemKind::MamdaniIT2) out.lower = ev.infer(x).firing.lower;
  return out;
}

InferenceResult infer_mamdani(const FuzzySystem& sys, const InputMap& inputs) {
  require_kind(sys, SystemKind::MamdaniT1, "infer_mamdani");
  return Evaluator(sys).infer(input_vector(sys, inputs));
}

InferenceResult infer_sugeno(const FuzzySystem& sys, const InputMap& inputs) {
  require_kind(sys, SystemKind::SugenoT1, "infer_sugeno");
  return Evaluator(sys).infer(input_vector(sys, inputs));
}

InferenceResult infer_it2_mamdani(const FuzzySystem& sys, const InputMap& inputs) {
  require_kind(sys, SystemKind::MamdaniIT2, "infer_it2_mamdani");
  return Evaluator(sys).infer(input_vector(sys, inputs));
}

InferenceResult infer(const FuzzySystem& sys, const InputMap& inputs) {
  return Evaluator(sys).infer(input_vector(sys, inputs));
}

double grouped_max_detector(std::span<const double> activations, RuleGroup positive,
                            RuleGroup negative, int gray_levels) {
  if (positive.begin > positive.end || positive.end > activations.size() ||
      negative.begin > negative.end || negative.end > activations.size()) {
    throw std::invalid_argument("grouped_max_detector: rule group out of range");
  }
  if (gray_levels < 1) throw std::invalid_argument("grouped_max_detector: gray_levels must be positive");
  double l1 = 0.0;
  for (std::size_t i = positive.begin; i < positive.end; ++i) l1 = std::max(l1, activations[i]);
  double l2 = 0.0;
  for (std::size_t i = negative.begin; i < negative.end; ++i) l2 = std::max(l2, activations[i]);
  const double l0 = std::max(0.0, 1.0 - l1 - l2);
  return static_cast<double>(gray_levels - 1) * (l1 - l2) / (l1 + l2 + l0);
}

double denoise_detector(const FuzzySystem& sys, const InputMap& inputs, int gray_levels) {
  if (sys.rules().size() != 26) {
    throw EvaluationError("denoise_detector expects the 26-rule denoising system, got " +
                          std::to_string(sys.rules().size()) + " rules");
  }
  const auto firing = fire_rules(sys, inputs);
  return grouped_max_detector(firing.activations, {0, 13}, {13, 26}, gray_levels);
}

}  // namespace fuzzkit
