#pragma once

// Compiles a type-1 system into a standalone C++ function with every setting
// and constant baked in. The emitted text depends only on <algorithm>,
// <array>, <cmath> and <cstddef>, and reproduces the interpreter's floating-point
// operations in the same order.

#include <string>

#include "fuzzkit/system.hpp"

namespace fuzzkit {

struct CodegenOptions {
  std::string function_name;       // empty: derived from the system name
  bool inline_mfs = true;          // membership formulas expanded in place; else small local helpers
  bool antecedents_only = false;   // return rule activations instead of crisp outputs
};

/// Emits `inline std::array<double, N> name(double in1, ...)`, one parameter
/// per input in declaration order. N is the output count, or the rule count
/// with antecedents_only. Throws Error for interval type-2 systems, custom
/// membership functions and invalid function names.
std::string generate(const FuzzySystem& sys, const CodegenOptions& opts = {});

/// C++ identifier used for a variable name in generated code.
std::string codegen_identifier(std::string_view name);

}  // namespace fuzzkit
