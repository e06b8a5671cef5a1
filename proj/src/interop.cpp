#include "fuzzkit/interop.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fuzzkit/dsl.hpp"
#include "fuzzkit/error.hpp"
#include "interop_util.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace interop {

std::string show_char(unsigned char c) {
  if (std::isprint(c)) return std::string("'") + static_cast<char>(c) + "'";
  static const char* const kHex = "0123456789abcdef";
  return std::string("byte 0x") + kHex[c >> 4] + kHex[c & 15];
}

namespace {

std::string sanitize(const std::string& name, std::initializer_list<std::string_view> reserved,
                     FormatDiagnostics& diag, int line, int col) {
  std::string out;
  for (const char c : name) out += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), '_');
  for (const auto r : reserved) {
    if (out == r) {
      out += '_';
      break;
    }
  }
  if (out != name) diag.warnings.push_back({line, col, "name '" + name + "' renamed to " + out});
  return out;
}

}  // namespace

std::string safe_identifier(const std::string& name, FormatDiagnostics& diag, int line, int col) {
  return sanitize(name, {"end", "for", "function", "mamfis", "sugfis"}, diag, line, col);
}

std::string safe_term_name(const std::string& name, FormatDiagnostics& diag, int line, int col) {
  return sanitize(name, {"end", "for", "function", "mamfis", "sugfis", "domain", "default"}, diag, line, col);
}

std::pair<double, double> extent(const MembershipFunction& mf) {
  return std::visit(
      util::Overloaded{
          [](const Triangular& m) { return std::pair{m.a, m.c}; },
          [](const Trapezoidal& m) { return std::pair{m.a, m.d}; },
          [](const Gaussian& m) { return std::pair{m.mu - 3.0 * m.sigma, m.mu + 3.0 * m.sigma}; },
          [](const Singleton& m) { return std::pair{m.c, m.c}; },
          [](const GeneralizedBell& m) {
            const double w = 3.0 * std::abs(m.a);
            return std::pair{m.c - w, m.c + w};
          },
          [](const Sigmoid& m) {
            const double w = 6.0 / std::max(std::abs(m.a), 1e-12);
            return std::pair{m.c - w, m.c + w};
          },
          [](const PiecewiseLinear& m) { return std::pair{m.points.front().first, m.points.back().first}; },
          [](const Custom&) { return std::pair{0.0, 1.0}; },
      },
      mf);
}

}  // namespace interop

std::string_view to_string(SourceFormat format) {
  switch (format) {
    case SourceFormat::Dsl: return "fzl";
    case SourceFormat::Fcl: return "fcl";
    case SourceFormat::Fis: return "fis";
  }
  return "?";
}

std::optional<SourceFormat> format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (util::iequals(ext, ".fzl")) return SourceFormat::Dsl;
  if (util::iequals(ext, ".fcl")) return SourceFormat::Fcl;
  if (util::iequals(ext, ".fis")) return SourceFormat::Fis;
  return std::nullopt;
}

ParsedModel parse_model(std::string_view text, SourceFormat format) {
  switch (format) {
    case SourceFormat::Fcl: return parse_fcl(text);
    case SourceFormat::Fis: return parse_fis(text);
    case SourceFormat::Dsl: break;
  }
  return {parse_system({std::string(text)}), {SourceFormat::Dsl, {}}};
}

ParsedModel load_model(const std::filesystem::path& path) {
  const auto format = format_from_path(path);
  if (!format) throw Error("unknown model format for " + path.string() + " (expected .fzl, .fcl or .fis)");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (*format == SourceFormat::Dsl) {
    return {parse_system({ss.str(), path.string()}), {SourceFormat::Dsl, {}}};
  }
  return parse_model(ss.str(), *format);
}

}  // namespace fuzzkit
