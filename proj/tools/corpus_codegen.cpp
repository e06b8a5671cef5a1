// Build step: embeds the bundled models and compiles them to standalone
// functions for the benchmark corpus.
//
//   corpus_codegen <models-dir> <out-dir>
//
// writes <out-dir>/corpus_text.cpp and <out-dir>/corpus_generated.inc.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fuzzkit/codegen.hpp"
#include "fuzzkit/error.hpp"
#include "fuzzkit/interop.hpp"

namespace fs = std::filesystem;

namespace {

struct Entry {
  const char* name;
  const char* file;
  bool antecedents_only;
};

constexpr Entry kCorpus[] = {
    {"tipper", "tipper.fzl", false},
    {"robot", "robot.fcl", false},
    {"denoise", "denoise.fzl", true},
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_if_changed(const fs::path& path, const std::string& text) {
  if (fs::exists(path) && slurp(path) == text) return;
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: corpus_codegen <models-dir> <out-dir>\n";
    return 1;
  }
  try {
    const fs::path models = argv[1];
    const fs::path out = argv[2];
    fs::create_directories(out);

    std::string text = "#include \"corpus.hpp\"\n\nnamespace fuzzkit::corpus::detail {\n\n";
    std::string generated;
    for (const auto& e : kCorpus) {
      const std::string source = slurp(models / e.file);
      if (source.find(")fzk\"") != std::string::npos) throw std::runtime_error("raw string delimiter in model");
      text += "extern const char* const k_" + std::string(e.name) + " = R\"fzk(" + source + ")fzk\";\n";
      const auto model = fuzzkit::load_model(models / e.file);
      fuzzkit::CodegenOptions opts;
      opts.function_name = "corpus_" + std::string(e.name);
      opts.antecedents_only = e.antecedents_only;
      generated += fuzzkit::generate(model.system, opts) + "\n";
    }
    text += "\n}  // namespace fuzzkit::corpus::detail\n";
    write_if_changed(out / "corpus_text.cpp", text);
    write_if_changed(out / "corpus_generated.inc", generated);
  } catch (const std::exception& e) {
    std::cerr << "corpus_codegen: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
