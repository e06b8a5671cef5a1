#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzkit/system.hpp"

namespace fuzzkit {

using InputMap = std::map<std::string, double, std::less<>>;

/// Per-rule antecedent activations (weight applied), in rule order.
struct FiringVector {
  std::vector<double> activations;  // type-1 strengths; upper strengths for interval type-2
  std::vector<double> lower;        // interval type-2 only
};

/// Aggregated output membership sampled on the output grid.
struct OutputCurve {
  std::string name;
  std::vector<double> xs;
  std::vector<double> mus;    // type-1 aggregate, or the upper aggregate for interval type-2
  std::vector<double> lower;  // interval type-2 only
  std::optional<std::pair<double, double>> interval;  // type-reduced centroid interval
};

struct InferenceResult {
  std::vector<std::pair<std::string, double>> crisp;  // output declaration order
  FiringVector firing;
  std::optional<std::vector<OutputCurve>> aggregated;  // absent for Sugeno
  std::vector<bool> degenerate_outputs;  // nothing fired; fallback value reported
  bool degenerate = false;               // any output degenerate

  /// Throws std::out_of_range for an unknown output.
  double at(std::string_view output) const;
};

struct Defuzzified {
  double value;
  bool degenerate;  // all-zero curve: value is the grid midpoint
};

/// Collapses a sampled curve to a crisp value. Centroid is the discrete
/// weighted mean over the samples.
Defuzzified defuzzify(Defuzzifier kind, std::span<const double> xs, std::span<const double> mus);

struct CentroidInterval {
  double left;
  double right;
  bool degenerate;  // upper curve identically zero
  int iterations;   // Karnik-Mendel iterations used (both endpoints)
};

/// Karnik-Mendel type reduction of the interval set bounded by lower <= upper
/// on the strictly increasing grid xs. Throws EvaluationError if the switch
/// point does not settle within 100 iterations.
CentroidInterval km_reduce(std::span<const double> xs, std::span<const double> lower,
                           std::span<const double> upper);

/// Centroid of the embedded type-1 set switching between the bounds at
/// `switch_index` = k. Left endpoint form: upper for i <= k, lower after.
/// Right endpoint form: lower for i < k, upper from k on. NaN if empty.
double embedded_centroid(std::span<const double> xs, std::span<const double> lower,
                         std::span<const double> upper, std::size_t switch_index, bool left);

/// Reusable evaluation context bound to one system. Owns scratch buffers, so
/// an instance must only be used by one thread at a time; the system itself
/// may be shared by any number of evaluators.
class Evaluator {
 public:
  explicit Evaluator(FuzzySystem system);

  const FuzzySystem& system() const { return system_; }

  /// Antecedent activations for inputs given in input declaration order.
  /// For interval type-2 systems the upper strengths are written.
  void fire(std::span<const double> inputs, std::span<double> activations);

  /// Crisp outputs only, no allocation after construction.
  void evaluate(std::span<const double> inputs, std::span<double> outputs);

  InferenceResult infer(std::span<const double> inputs);

 private:
  void fuzzify(std::span<const double> inputs);
  void fire_interval(std::span<const double> inputs);
  double sugeno_output(std::size_t output, std::span<const double> inputs, bool& degenerate) const;
  double mamdani_output(std::size_t output, bool& degenerate);
  double it2_output(std::size_t output, bool& degenerate, std::pair<double, double>& interval);

  FuzzySystem system_;
  std::vector<double> slots_;
  std::vector<double> slots_lower_;
  std::vector<double> stack_;
  std::vector<double> stack_lower_;
  std::vector<double> activations_;
  std::vector<double> activations_lower_;
  std::vector<double> acc_;
  std::vector<double> acc_lower_;
};

/// Orders a name -> value map by input declaration; throws MissingInputError.
std::vector<double> input_vector(const FuzzySystem& sys, const InputMap& inputs);

/// Recursive evaluation of an antecedent tree with the system's connectives.
/// Type-1 systems only.
double eval_proposition(const Proposition& p, const FuzzySystem& sys, const InputMap& inputs);

FiringVector fire_rules(const FuzzySystem& sys, const InputMap& inputs);

InferenceResult infer_mamdani(const FuzzySystem& sys, const InputMap& inputs);
InferenceResult infer_sugeno(const FuzzySystem& sys, const InputMap& inputs);
InferenceResult infer_it2_mamdani(const FuzzySystem& sys, const InputMap& inputs);

/// Dispatches on the system kind.
InferenceResult infer(const FuzzySystem& sys, const InputMap& inputs);

/// Half-open range [begin, end) of 0-based rule indices.
struct RuleGroup {
  std::size_t begin;
  std::size_t end;
};

/// Two-group max aggregation used by the impulse-noise detector:
///   l1 = max over `positive`, l2 = max over `negative`, l0 = max(0, 1 - l1 - l2)
///   y  = (gray_levels - 1) * (l1 - l2) / (l1 + l2 + l0)
double grouped_max_detector(std::span<const double> activations, RuleGroup positive,
                            RuleGroup negative, int gray_levels);

/// The detector bound to the canonical 26-rule denoising system (rules 1-13
/// positive, 14-26 negative). Throws EvaluationError if the rule count differs.
double denoise_detector(const FuzzySystem& sys, const InputMap& inputs, int gray_levels);

}  // namespace fuzzkit
