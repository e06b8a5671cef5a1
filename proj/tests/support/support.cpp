#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fuzzkit/dsl.hpp"
#include "fuzzkit/engine.hpp"

namespace fuzzkit::testing {

std::string read_model(const std::string& file) {
  const std::string path = std::string(FUZZKIT_MODELS_DIR) + "/" + file;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FuzzySystem tipper() { return parse_system({read_model("tipper.fzl"), "tipper.fzl"}); }
FuzzySystem denoise() { return parse_system({read_model("denoise.fzl"), "denoise.fzl"}); }

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> sorted_points(std::mt19937_64& rng, int n, double lo, double hi) {
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = uniform(rng, lo, hi);
  std::sort(p.begin(), p.end());
  return p;
}

MembershipFunction random_mf(std::mt19937_64& rng, const Domain& d, bool allow_singleton) {
  const double w = d.hi - d.lo;
  const int family = pick(rng, 0, allow_singleton ? 6 : 5);
  switch (family) {
    case 0: {
      const auto p = sorted_points(rng, 3, d.lo - 0.2 * w, d.hi + 0.2 * w);
      return Triangular{p[0], p[1], p[2]};
    }
    case 1: {
      const auto p = sorted_points(rng, 4, d.lo - 0.2 * w, d.hi + 0.2 * w);
      return Trapezoidal{p[0], p[1], p[2], p[3]};
    }
    case 2: return Gaussian{uniform(rng, d.lo, d.hi), uniform(rng, 0.05, 0.5) * w};
    case 3:
      return GeneralizedBell{uniform(rng, 0.05, 0.4) * w, uniform(rng, 0.5, 4.0),
                             uniform(rng, d.lo, d.hi)};
    case 4: {
      const double a = uniform(rng, 2.0, 20.0) / w;
      return Sigmoid{pick(rng, 0, 1) ? a : -a, uniform(rng, d.lo, d.hi)};
    }
    case 5: {
      const int n = pick(rng, 2, 5);
      const auto xs = sorted_points(rng, n, d.lo, d.hi);
      PiecewiseLinear pl;
      for (double x : xs) {
        if (!pl.points.empty() && !(x > pl.points.back().first)) continue;
        pl.points.emplace_back(x, uniform(rng, 0.0, 1.0));
      }
      return pl;
    }
    default: return Singleton{d.lo + w * 0.25 * pick(rng, 0, 4)};
  }
}

Proposition random_prop(std::mt19937_64& rng, const std::vector<Variable>& inputs, int depth) {
  const int choice = depth <= 0 ? 0 : pick(rng, 0, 5);
  if (choice <= 2) {
    const auto& v = inputs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(inputs.size()) - 1))];
    const auto& t = v.terms[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(v.terms.size()) - 1))];
    return Proposition::is(v.name, t.name);
  }
  if (choice == 3) return Proposition::negate(random_prop(rng, inputs, depth - 1));
  auto lhs = random_prop(rng, inputs, depth - 1);
  auto rhs = random_prop(rng, inputs, depth - 1);
  return choice == 4 ? Proposition::conj(std::move(lhs), std::move(rhs))
                     : Proposition::disj(std::move(lhs), std::move(rhs));
}

Domain random_domain(std::mt19937_64& rng) {
  const double lo = uniform(rng, -100.0, 100.0);
  return {lo, lo + uniform(rng, 0.5, 200.0)};
}

}  // namespace

SystemDescription random_description(std::mt19937_64& rng, const RandomSystemOptions& opts) {
  SystemDescription d;
  d.name = "random";
  d.kind = opts.kind;
  const int n_in = pick(rng, 1, opts.max_inputs);
  const int n_out = pick(rng, 1, opts.max_outputs);
  for (int i = 0; i < n_in; ++i) {
    Variable v{"in" + std::to_string(i), random_domain(rng), {}, std::nullopt};
    const int n_terms = pick(rng, 1, opts.max_terms);
    for (int t = 0; t < n_terms; ++t) {
      auto mf = random_mf(rng, v.domain, true);
      if (opts.kind == SystemKind::MamdaniIT2) {
        v.terms.push_back({"t" + std::to_string(t), IntervalMF{mf, mf}});
      } else {
        v.terms.push_back({"t" + std::to_string(t), std::move(mf)});
      }
    }
    d.inputs.push_back(std::move(v));
  }
  for (int o = 0; o < n_out; ++o) {
    Variable v{"out" + std::to_string(o), random_domain(rng), {}, std::nullopt};
    const int n_terms = pick(rng, 1, opts.max_terms);
    for (int t = 0; t < n_terms; ++t) {
      const std::string name = "c" + std::to_string(t);
      switch (opts.kind) {
        case SystemKind::SugenoT1:
          if (pick(rng, 0, 1)) {
            v.terms.push_back({name, SugenoConsequent{SugenoConstant{uniform(rng, v.domain.lo, v.domain.hi)}}});
          } else {
            SugenoLinear lin;
            for (const auto& in : d.inputs) {
              if (pick(rng, 0, 2)) lin.coefficients.emplace_back(in.name, uniform(rng, -2.0, 2.0));
            }
            lin.offset = uniform(rng, v.domain.lo, v.domain.hi);
            v.terms.push_back({name, SugenoConsequent{std::move(lin)}});
          }
          break;
        case SystemKind::MamdaniT1: v.terms.push_back({name, random_mf(rng, v.domain, false)}); break;
        case SystemKind::MamdaniIT2: {
          // Nested Gaussians: a shared centre keeps lower <= upper everywhere.
          const double mu = uniform(rng, v.domain.lo, v.domain.hi);
          const double s = uniform(rng, 0.05, 0.4) * (v.domain.hi - v.domain.lo);
          v.terms.push_back({name, IntervalMF{Gaussian{mu, s}, Gaussian{mu, s * uniform(rng, 1.0, 2.0)}}});
          break;
        }
      }
    }
    d.outputs.push_back(std::move(v));
  }
  const int n_rules = pick(rng, 1, opts.max_rules);
  for (int r = 0; r < n_rules; ++r) {
    Rule rule;
    rule.antecedent = random_prop(rng, d.inputs, 3);
    for (const auto& out : d.outputs) {
      if (r < static_cast<int>(d.outputs.size()) && &out != &d.outputs[static_cast<std::size_t>(r)] && pick(rng, 0, 1)) {
        continue;
      }
      const auto& t = out.terms[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(out.terms.size()) - 1))];
      rule.consequents.push_back({out.name, t.name});
    }
    rule.weight = pick(rng, 0, 3) ? 1.0 : uniform(rng, 0.0, 1.0);
    d.rules.push_back(std::move(rule));
  }
  // Every output must be mentioned by some rule.
  for (const auto& out : d.outputs) {
    const bool used = std::any_of(d.rules.begin(), d.rules.end(), [&](const Rule& r) {
      return std::any_of(r.consequents.begin(), r.consequents.end(),
                         [&](const Relation& c) { return c.variable == out.name; });
    });
    if (!used) d.rules.front().consequents.push_back({out.name, out.terms.front().name});
  }
  if (opts.allow_custom_settings) {
    auto& s = d.settings;
    s.conjunction = kAllTNorms[static_cast<std::size_t>(pick(rng, 0, kAllTNorms.size() - 1))];
    s.disjunction = kAllSNorms[static_cast<std::size_t>(pick(rng, 0, kAllSNorms.size() - 1))];
    s.implication = kAllImplications[static_cast<std::size_t>(pick(rng, 0, 1))];
    s.aggregation = kAllSNorms[static_cast<std::size_t>(pick(rng, 0, kAllSNorms.size() - 1))];
    s.defuzzifier = kAllDefuzzifiers[static_cast<std::size_t>(pick(rng, 0, kAllDefuzzifiers.size() - 1))];
    s.resolution = pick(rng, 2, 4) == 2 ? pick(rng, 2, 50) : 101;
  }
  return d;
}

FuzzySystem zero_width_it2(const FuzzySystem& t1) {
  SystemDescription d = t1.description();
  d.kind = SystemKind::MamdaniIT2;
  for (auto* vars : {&d.inputs, &d.outputs}) {
    for (auto& v : *vars) {
      for (auto& t : v.terms) {
        const auto mf = std::get<MembershipFunction>(t.shape);
        t.shape = IntervalMF{mf, mf};
      }
    }
  }
  return FuzzySystem::create(std::move(d));
}

std::vector<double> random_inputs(const FuzzySystem& sys, std::mt19937_64& rng) {
  std::vector<double> out;
  for (const auto& v : sys.inputs()) out.push_back(uniform(rng, v.domain.lo, v.domain.hi));
  return out;
}

namespace {

double oracle_prop(const Proposition& p, const FuzzySystem& sys, std::span<const double> inputs) {
  switch (p.kind) {
    case Proposition::Kind::Relation: {
      const std::size_t v = *sys.input_index(p.relation.variable);
      const auto& var = sys.inputs()[v];
      const auto& term = var.terms[*var.term_index(p.relation.term)];
      return eval_mf(std::get<MembershipFunction>(term.shape), inputs[v]);
    }
    case Proposition::Kind::Not: return 1.0 - oracle_prop(p.children[0], sys, inputs);
    case Proposition::Kind::And:
      return tnorm(sys.settings().conjunction, oracle_prop(p.children[0], sys, inputs),
                   oracle_prop(p.children[1], sys, inputs));
    case Proposition::Kind::Or:
      return snorm(sys.settings().disjunction, oracle_prop(p.children[0], sys, inputs),
                   oracle_prop(p.children[1], sys, inputs));
  }
  return 0.0;
}

}  // namespace

double dense_centroid(const FuzzySystem& sys, std::span<const double> inputs, std::size_t output,
                      std::size_t points) {
  const auto& var = sys.outputs()[output];
  std::vector<std::pair<double, const MembershipFunction*>> parts;
  for (const auto& rule : sys.rules()) {
    const double r = rule.weight * oracle_prop(rule.antecedent, sys, inputs);
    for (const auto& c : rule.consequents) {
      if (c.variable != var.name) continue;
      parts.emplace_back(r, &std::get<MembershipFunction>(var.terms[*var.term_index(c.term)].shape));
    }
  }
  const auto& s = sys.settings();
  double num = 0.0;
  double den = 0.0;
  const double step = (var.domain.hi - var.domain.lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = var.domain.lo + step * static_cast<double>(i);
    double mu = 0.0;
    for (const auto& [r, mf] : parts) mu = snorm(s.aggregation, mu, implication(s.implication, r, eval_mf(*mf, x)));
    num += x * mu;
    den += mu;
  }
  return den > 0.0 ? num / den : var.domain.midpoint();
}

namespace {

double sequential_centroid(std::span<const double> xs, const std::vector<double>& theta) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += xs[i] * theta[i];
    den += theta[i];
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::pair<double, double> km_switch_point_oracle(std::span<const double> xs,
                                                 std::span<const double> lower,
                                                 std::span<const double> upper) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> theta(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t i = 0; i < xs.size(); ++i) theta[i] = i <= k ? upper[i] : lower[i];
    if (const double v = sequential_centroid(xs, theta); !std::isnan(v)) lo = std::min(lo, v);
    for (std::size_t i = 0; i < xs.size(); ++i) theta[i] = i < k ? lower[i] : upper[i];
    if (const double v = sequential_centroid(xs, theta); !std::isnan(v)) hi = std::max(hi, v);
  }
  return {std::clamp(lo, xs.front(), xs.back()), std::clamp(hi, xs.front(), xs.back())};
}

std::pair<double, double> km_brute_force(std::span<const double> xs, std::span<const double> lower,
                                         std::span<const double> upper) {
  const std::size_t n = xs.size();
  if (n > 20) throw std::invalid_argument("km_brute_force: grid too large");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<double> theta(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) theta[i] = (mask >> i) & 1u ? upper[i] : lower[i];
    const double v = sequential_centroid(xs, theta);
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {std::clamp(lo, xs.front(), xs.back()), std::clamp(hi, xs.front(), xs.back())};
}

}  // namespace fuzzkit::testing
