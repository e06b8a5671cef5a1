#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzkit/membership.hpp"
#include "fuzzkit/norms.hpp"

namespace fuzzkit {

/// Closed interval [lo, hi] of a variable's universe; lo < hi.
struct Domain {
  double lo = 0.0;
  double hi = 1.0;

  double midpoint() const { return 0.5 * (lo + hi); }
  bool operator==(const Domain&) const = default;
};

struct SugenoConstant {
  double value;
  bool operator==(const SugenoConstant&) const = default;
};

/// offset + sum(coefficient * input), evaluated in coefficient order.
struct SugenoLinear {
  std::vector<std::pair<std::string, double>> coefficients;
  double offset = 0.0;
  bool operator==(const SugenoLinear&) const = default;
};

using SugenoConsequent = std::variant<SugenoConstant, SugenoLinear>;

using TermShape = std::variant<MembershipFunction, IntervalMF, SugenoConsequent>;

struct Term {
  std::string name;
  TermShape shape;
  bool operator==(const Term&) const = default;
};

struct Variable {
  std::string name;
  Domain domain;
  std::vector<Term> terms;  // declaration order
  // Outputs only: crisp value reported when no rule fires.
  std::optional<double> default_value;

  std::optional<std::size_t> term_index(std::string_view term) const;
  bool operator==(const Variable&) const = default;
};

/// "variable is term"
struct Relation {
  std::string variable;
  std::string term;
  bool operator==(const Relation&) const = default;
};

/// Lazy antecedent tree: relation leaves joined by AND/OR/NOT.
struct Proposition {
  enum class Kind { Relation, And, Or, Not };

  Kind kind = Kind::Relation;
  Relation relation;                  // Kind::Relation
  std::vector<Proposition> children;  // two for And/Or, one for Not

  static Proposition is(std::string variable, std::string term);
  static Proposition conj(Proposition lhs, Proposition rhs);
  static Proposition disj(Proposition lhs, Proposition rhs);
  static Proposition negate(Proposition child);

  bool operator==(const Proposition&) const = default;
};

struct Rule {
  Proposition antecedent;
  std::vector<Relation> consequents;
  double weight = 1.0;
  bool operator==(const Rule&) const = default;
};

struct EngineSettings {
  static constexpr int kMaxResolution = 1000000;

  TNorm conjunction = TNorm::Min;
  SNorm disjunction = SNorm::Max;
  Implication implication = Implication::Min;
  SNorm aggregation = SNorm::Max;
  Defuzzifier defuzzifier = Defuzzifier::Centroid;
  int resolution = 101;  // output-domain samples, endpoints included

  bool operator==(const EngineSettings&) const = default;
};

enum class SystemKind { MamdaniT1, SugenoT1, MamdaniIT2 };

std::string_view to_string(SystemKind kind);

/// Plain, mutable description of a system. Turned into an immutable,
/// validated FuzzySystem by FuzzySystem::create.
struct SystemDescription {
  std::string name;
  SystemKind kind = SystemKind::MamdaniT1;
  std::vector<Variable> inputs;
  std::vector<Variable> outputs;
  std::vector<Rule> rules;
  EngineSettings settings;

  bool operator==(const SystemDescription&) const = default;
};

namespace detail {

// Antecedents compiled to postfix programs over a flat table of membership
// degrees (one slot per input term).
struct Instr {
  enum Op : std::uint8_t { Load, And, Or, Not };
  Op op;
  std::uint32_t slot;
};

struct CompiledRule {
  std::vector<Instr> program;
  double weight = 1.0;
};

struct Contribution {
  std::size_t rule;
  std::size_t term;
};

struct SugenoTerm {
  double offset = 0.0;  // the constant for SugenoConstant
  std::vector<std::pair<std::size_t, double>> coefficients;  // (input index, coefficient)
};

struct OutputTables {
  std::vector<double> xs;                   // uniform grid over the output domain
  std::vector<std::vector<double>> curves;  // MamdaniT1: term curves sampled on xs
  std::vector<std::vector<double>> lower;   // MamdaniIT2
  std::vector<std::vector<double>> upper;   // MamdaniIT2
  std::vector<SugenoTerm> sugeno;           // SugenoT1
  std::vector<Contribution> contributions;  // (rule, term) pairs targeting this output
};

struct Compiled {
  std::vector<std::size_t> slot_offset;  // first slot of each input variable
  std::size_t slot_count = 0;
  std::size_t max_stack = 1;
  std::vector<CompiledRule> rules;
  std::vector<OutputTables> outputs;
};

}  // namespace detail

/// Immutable, validated fuzzy inference system. Cheap to copy (shared
/// immutable state) and safe to evaluate from many threads at once.
class FuzzySystem {
 public:
  /// Validates every construction invariant; throws ModelError on violation.
  static FuzzySystem create(SystemDescription description);

  const std::string& name() const { return desc_->name; }
  SystemKind kind() const { return desc_->kind; }
  const std::vector<Variable>& inputs() const { return desc_->inputs; }
  const std::vector<Variable>& outputs() const { return desc_->outputs; }
  const std::vector<Rule>& rules() const { return desc_->rules; }
  const EngineSettings& settings() const { return desc_->settings; }
  const SystemDescription& description() const { return *desc_; }

  std::optional<std::size_t> input_index(std::string_view name) const;
  std::optional<std::size_t> output_index(std::string_view name) const;

  const detail::Compiled& compiled() const { return *compiled_; }

 private:
  FuzzySystem(std::shared_ptr<const SystemDescription> desc,
              std::shared_ptr<const detail::Compiled> compiled)
      : desc_(std::move(desc)), compiled_(std::move(compiled)) {}

  std::shared_ptr<const SystemDescription> desc_;
  std::shared_ptr<const detail::Compiled> compiled_;
};

/// Uniform grid of `resolution` points over `domain`, both endpoints exact.
std::vector<double> sample_grid(const Domain& domain, int resolution);

}  // namespace fuzzkit
