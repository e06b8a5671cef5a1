#include "corpus.hpp"

#include "corpus_generated.inc"

// The generated bodies are flattened into clones for the baseline ISA and for
// AVX2, picked at load time like the library kernels.
#define FUZZKIT_CORPUS_KERNEL [[gnu::flatten, gnu::target_clones("avx2", "default")]]

namespace fuzzkit::corpus {

const std::vector<Model>& models() {
  static const std::vector<Model> all{
      {"tipper", "tipper.fzl", detail::k_tipper},
      {"robot", "robot.fcl", detail::k_robot},
      {"denoise", "denoise.fzl", detail::k_denoise},
  };
  return all;
}

std::optional<Model> find(std::string_view name) {
  for (const auto& m : models()) {
    if (m.name == name) return m;
  }
  return std::nullopt;
}

ParsedModel load(const Model& model) { return parse_model(model.text, *format_from_path(std::string(model.file))); }

FUZZKIT_CORPUS_KERNEL std::array<double, 1> tipper_generated(double service, double food) { return corpus_tipper(service, food); }

FUZZKIT_CORPUS_KERNEL std::array<double, 2> robot_generated(double rdist, double dquot, double vel, double orient) {
  return corpus_robot(rdist, dquot, vel, orient);
}

FUZZKIT_CORPUS_KERNEL std::array<double, 26> denoise_generated(const double* x) {
  return corpus_denoise(x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]);
}

}  // namespace fuzzkit::corpus
