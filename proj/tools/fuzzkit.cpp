// fuzzkit: evaluate, convert, plot, generate code for and benchmark fuzzy
// inference systems.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "bench.hpp"
#include "corpus.hpp"
#include "fuzzkit/codegen.hpp"
#include "fuzzkit/dsl.hpp"
#include "fuzzkit/engine.hpp"
#include "fuzzkit/error.hpp"
#include "fuzzkit/interop.hpp"
#include "fuzzkit/viz.hpp"

namespace fs = std::filesystem;
using namespace fuzzkit;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitInput = 2;
constexpr int kExitEval = 3;

// Carries an exit code out of a subcommand.
struct Exit {
  int code;
};

[[noreturn]] void fail(int code, const std::string& message) {
  std::cerr << "fuzzkit: " << message << "\n";
  throw Exit{code};
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string s = buf;
  if (s.find_first_of(".eninf") == std::string::npos) s += ".0";
  return s;
}

void print_warnings(const FormatDiagnostics& diag, const std::string& path) {
  for (const auto& w : diag.warnings) {
    std::cerr << path << ":";
    if (w.line > 0) std::cerr << w.line << ":" << w.column << ":";
    std::cerr << " warning: " << w.message << "\n";
  }
}

// A file path, or the name of a bundled model when no such file exists.
ParsedModel load(const std::string& path) {
  try {
    if (!fs::exists(path)) {
      if (const auto m = corpus::find(path)) return corpus::load(*m);
      fail(kExitParse, "cannot read " + path);
    }
    auto model = load_model(path);
    print_warnings(model.diagnostics, path);
    return model;
  } catch (const ParseError& e) {
    fail(kExitParse, path + ":" + e.what());
  } catch (const Error& e) {
    fail(kExitParse, path + ": " + e.what());
  }
}

InputMap parse_assignments(const FuzzySystem& sys, const std::vector<std::string>& args) {
  InputMap inputs;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) fail(kExitParse, "expected name=value, got '" + a + "'");
    const std::string name = a.substr(0, eq);
    const std::string text = a.substr(eq + 1);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) fail(kExitParse, "invalid number for " + name + ": '" + text + "'");
    if (!sys.input_index(name)) fail(kExitInput, "unknown input: " + name);
    inputs[name] = value;
  }
  return inputs;
}

struct EvalArgs {
  std::string model;
  std::vector<std::string> assignments;
  bool json = false;
  bool firing = false;
  std::string pipeline;
  int gray_levels = 256;
};

int cmd_eval(const EvalArgs& args) {
  const auto model = load(args.model);
  const auto& sys = model.system;
  const auto inputs = parse_assignments(sys, args.assignments);
  std::vector<std::pair<std::string, double>> crisp;
  FiringVector firing;
  bool degenerate = false;
  try {
    if (args.pipeline == "eq1") {
      const double y = denoise_detector(sys, inputs, args.gray_levels);
      crisp.emplace_back(sys.outputs().front().name, y);
      firing = fire_rules(sys, inputs);
    } else {
      auto r = infer(sys, inputs);
      crisp = std::move(r.crisp);
      firing = std::move(r.firing);
      degenerate = r.degenerate;
    }
  } catch (const MissingInputError& e) {
    fail(kExitInput, e.what());
  } catch (const Error& e) {
    fail(kExitEval, e.what());
  }

  if (args.json) {
    nlohmann::ordered_json j;
    j["crisp"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : crisp) j["crisp"][name] = v;
    j["firing"] = firing.activations;
    if (!firing.lower.empty()) j["firing_lower"] = firing.lower;
    j["degenerate"] = degenerate;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const auto& [name, v] : crisp) std::cout << name << " = " << format_value(v) << "\n";
  if (args.firing) {
    std::cout << "firing =";
    for (const double a : firing.activations) std::cout << " " << format_value(a);
    std::cout << "\n";
  }
  if (degenerate) std::cerr << "fuzzkit: warning: no rule fired; reporting domain midpoint\n";
  return 0;
}

int cmd_convert(const std::string& in, const std::string& out, bool to_stdout) {
  if (!to_stdout && format_from_path(out) != SourceFormat::Dsl) {
    fail(kExitParse, "output must be a .fzl file (or use --stdout)");
  }
  const auto model = load(in);
  const auto text = print_system(model.system);
  if (to_stdout) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!(f << text)) fail(kExitParse, "cannot write " + out);
  return 0;
}

struct PlotArgs {
  std::string model;
  std::string out;
  bool ascii = false;
  int width = 80;
  int height = 20;
  std::string variable;
  int samples = viz::kDefaultSamples;
};

int cmd_plot(const PlotArgs& args) {
  const auto model = load(args.model);
  const auto& sys = model.system;
  try {
    if (args.ascii) {
      const Variable* var = sys.inputs().empty() ? nullptr : &sys.inputs().front();
      if (!args.variable.empty()) {
        var = nullptr;
        for (const auto* group : {&sys.inputs(), &sys.outputs()}) {
          for (const auto& v : *group) {
            if (v.name == args.variable) var = &v;
          }
        }
        if (var == nullptr) fail(kExitParse, "unknown variable: " + args.variable);
      }
      if (var == nullptr) fail(kExitParse, "system has no variables to plot");
      std::cout << viz::render_ascii(viz::plot_variable(*var, args.samples), args.width, args.height);
      return 0;
    }
    if (args.out.empty()) fail(kExitParse, "an output path or --ascii is required");
    const auto svg = viz::render_svg(viz::plot_system(sys, args.samples));
    std::ofstream f(args.out, std::ios::binary);
    if (!(f << svg)) fail(kExitParse, "cannot write " + args.out);
  } catch (const std::invalid_argument& e) {
    fail(kExitParse, e.what());
  }
  return 0;
}

struct CodegenArgs {
  std::string model;
  std::string out;
  bool to_stdout = false;
  CodegenOptions options;
};

int cmd_codegen(CodegenArgs args) {
  if (args.out.empty() && !args.to_stdout) fail(kExitParse, "an output path or --stdout is required");
  const auto model = load(args.model);
  std::string text;
  try {
    text = generate(model.system, args.options);
  } catch (const Error& e) {
    fail(kExitEval, e.what());
  }
  if (args.to_stdout) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(args.out, std::ios::binary);
  if (!(f << text)) fail(kExitParse, "cannot write " + args.out);
  return 0;
}

struct BenchArgs {
  std::string which = "all";
  std::size_t iterations = 10000;
  std::string csv;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_bench(const BenchArgs& args) {
  std::vector<std::string> cases;
  if (args.which == "all") {
    cases = bench::case_names();
  } else {
    cases.push_back(args.which);
  }
  bench::Options opt;
  opt.iterations = args.iterations;
  opt.seed = args.seed ? *args.seed : bench::seed_from_env(bench::kDefaultSeed);

  const bool csv_stdout = args.csv == "-";
  std::ofstream csv_file;
  if (!args.csv.empty() && !csv_stdout) {
    csv_file.open(args.csv, std::ios::binary);
    if (!csv_file) fail(kExitParse, "cannot write " + args.csv);
  }
  std::ostream* csv = csv_stdout ? &std::cout : (csv_file.is_open() ? &csv_file : nullptr);
  if (csv) *csv << bench::csv_header() << "\n";
  if (!csv_stdout) std::printf("%-8s %-8s %12s %12s %11s\n", "case", "impl", "median_ns", "p99_ns", "iterations");

  for (const auto& c : cases) {
    for (const auto& r : bench::run_case(c, opt)) {
      if (csv) *csv << bench::csv_row(r) << "\n";
      if (!csv_stdout) {
        std::printf("%-8s %-8s %12.1f %12.1f %11zu\n", r.case_name.c_str(), r.impl.c_str(), r.median_ns, r.p99_ns,
                    r.iterations);
      }
    }
  }
  if (args.threads > 0 && args.iterations > 0) {
    for (const auto& c : cases) {
      const auto t = bench::run_throughput(c, args.threads, args.iterations, opt.seed);
      std::fprintf(csv_stdout ? stderr : stdout, "throughput %-8s threads=%u %.0f inferences/s\n", t.case_name.c_str(),
                   t.threads, t.per_second);
    }
  }
  std::fflush(stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy inference toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fuzzkit 1.0.0");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate a model at one input point");
  e->add_option("model", eval.model, "Model file (.fzl, .fcl, .fis) or bundled model name")->required();
  e->add_option("inputs", eval.assignments, "Input assignments name=value");
  e->add_flag("--json", eval.json, "Print crisp outputs, firing strengths and degeneracy as JSON");
  e->add_flag("--firing", eval.firing, "Also print rule firing strengths");
  e->add_option("--pipeline", eval.pipeline, "Custom output stage")->check(CLI::IsMember({"eq1"}));
  e->add_option("--gray-levels", eval.gray_levels, "Gray levels for the eq1 pipeline")->check(CLI::PositiveNumber);

  std::string conv_in, conv_out;
  bool conv_stdout = false;
  auto* c = app.add_subcommand("convert", "Convert a model to .fzl text");
  c->add_option("input", conv_in, "Source model")->required();
  c->add_option("output", conv_out, "Destination .fzl file");
  c->add_flag("--stdout", conv_stdout, "Write to standard output");

  PlotArgs plot;
  auto* p = app.add_subcommand("plot", "Plot membership functions");
  p->add_option("model", plot.model, "Model file or bundled model name")->required();
  p->add_option("output", plot.out, "Destination .svg file");
  p->add_flag("--ascii", plot.ascii, "Draw one variable as text on standard output");
  p->add_option("--width", plot.width, "ASCII width in characters");
  p->add_option("--height", plot.height, "ASCII height in lines");
  p->add_option("--variable", plot.variable, "Variable for --ascii (default: first input)");
  p->add_option("--samples", plot.samples, "Samples per curve");

  CodegenArgs gen;
  bool no_inline = false;
  auto* g = app.add_subcommand("codegen", "Generate a standalone C++ function");
  g->add_option("model", gen.model, "Model file or bundled model name")->required();
  g->add_option("output", gen.out, "Destination source file");
  g->add_flag("--stdout", gen.to_stdout, "Write to standard output");
  g->add_option("--name", gen.options.function_name, "Function name (default: the system name)");
  g->add_flag("--no-inline-mfs", no_inline, "Emit membership helpers instead of inline expressions");
  g->add_flag("--antecedents-only", gen.options.antecedents_only, "Return rule activations instead of outputs");

  BenchArgs bench;
  std::uint64_t seed = 0;
  auto* b = app.add_subcommand("bench", "Benchmark the bundled systems");
  b->add_option("case", bench.which, "tipper, robot, denoise or all")
      ->check(CLI::IsMember({"tipper", "robot", "denoise", "all"}));
  b->add_option("--iterations", bench.iterations, "Minimum timed inferences per implementation");
  b->add_option("--csv", bench.csv, "Also write CSV to a file, or '-' for CSV on standard output");
  b->add_option("--threads", bench.threads, "Run a throughput pass with this many threads");
  auto* seed_opt = b->add_option("--seed", seed, "Input set seed (default: FUZZKIT_SEED or built in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*e) return cmd_eval(eval);
    if (*c) return cmd_convert(conv_in, conv_out, conv_stdout);
    if (*p) return cmd_plot(plot);
    if (*g) {
      gen.options.inline_mfs = !no_inline;
      return cmd_codegen(gen);
    }
    if (*seed_opt) bench.seed = seed;
    return cmd_bench(bench);
  } catch (const Exit& ex) {
    return ex.code;
  } catch (const std::exception& ex) {
    std::cerr << "fuzzkit: " << ex.what() << "\n";
    return kExitEval;
  }
}
