#pragma once

// The bundled example systems, embedded at build time, and their generated
// standalone counterparts.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzkit/interop.hpp"

namespace fuzzkit::corpus {

namespace detail {
extern const char* const k_tipper;
extern const char* const k_robot;
extern const char* const k_denoise;
}  // namespace detail

struct Model {
  std::string_view name;
  std::string_view file;  // original file name, selects the reader
  std::string_view text;
};

const std::vector<Model>& models();

/// Looks up "tipper", "robot" or "denoise".
std::optional<Model> find(std::string_view name);

ParsedModel load(const Model& model);

std::array<double, 1> tipper_generated(double service, double food);
std::array<double, 2> robot_generated(double rdist, double dquot, double vel, double orient);
/// Rule activations of the denoising system.
std::array<double, 26> denoise_generated(const double* x);

}  // namespace fuzzkit::corpus
