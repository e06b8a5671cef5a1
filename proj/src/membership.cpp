#include "fuzzkit/membership.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzkit/error.hpp"
#include "util.hpp"

namespace fuzzkit {

namespace {

using util::Overloaded;

void require(bool ok, const std::string& what) {
  if (!ok) throw ModelError(what);
}

bool finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void validate(const MembershipFunction& mf) {
  std::visit(
      Overloaded{
          [](const Triangular& m) {
            require(finite({m.a, m.b, m.c}), "TriangularMF parameters must be finite");
            require(m.a <= m.b && m.b <= m.c, "TriangularMF requires a <= b <= c");
          },
          [](const Trapezoidal& m) {
            require(finite({m.a, m.b, m.c, m.d}), "TrapezoidalMF parameters must be finite");
            require(m.a <= m.b && m.b <= m.c && m.c <= m.d,
                    "TrapezoidalMF requires a <= b <= c <= d");
          },
          [](const Gaussian& m) {
            require(finite({m.mu, m.sigma}), "GaussianMF parameters must be finite");
            require(m.sigma > 0.0, "GaussianMF requires sigma > 0");
          },
          [](const Singleton& m) { require(finite({m.c}), "SingletonMF parameter must be finite"); },
          [](const GeneralizedBell& m) {
            require(finite({m.a, m.b, m.c}), "GeneralizedBellMF parameters must be finite");
            require(m.a != 0.0, "GeneralizedBellMF requires a != 0");
            require(m.b > 0.0, "GeneralizedBellMF requires b > 0");
          },
          [](const Sigmoid& m) {
            require(finite({m.a, m.c}), "SigmoidMF parameters must be finite");
          },
          [](const PiecewiseLinear& m) {
            require(!m.points.empty(), "PiecewiseLinearMF needs at least one point");
            for (std::size_t i = 0; i < m.points.size(); ++i) {
              const auto [x, mu] = m.points[i];
              require(finite({x, mu}), "PiecewiseLinearMF points must be finite");
              require(mu >= 0.0 && mu <= 1.0, "PiecewiseLinearMF degrees must lie in [0, 1]");
              if (i > 0) {
                require(x > m.points[i - 1].first,
                        "PiecewiseLinearMF x coordinates must be strictly increasing");
              }
            }
          },
          [](const Custom& m) { require(m.impl != nullptr, "custom membership function is null"); },
      },
      mf);
}

double eval_mf(const MembershipFunction& mf, double x) {
  return std::visit(
      Overloaded{
          [x](const Triangular& m) { return mf_formula::triangular(m.a, m.b, m.c, x); },
          [x](const Trapezoidal& m) { return mf_formula::trapezoidal(m.a, m.b, m.c, m.d, x); },
          [x](const Gaussian& m) {
            const double d = x - m.mu;
            return std::exp(-(d * d) / (2.0 * m.sigma * m.sigma));
          },
          [x](const Singleton& m) { return x == m.c ? 1.0 : 0.0; },
          [x](const GeneralizedBell& m) {
            return 1.0 / (1.0 + std::pow(std::abs((x - m.c) / m.a), 2.0 * m.b));
          },
          [x](const Sigmoid& m) { return 1.0 / (1.0 + std::exp(-m.a * (x - m.c))); },
          [x](const PiecewiseLinear& m) {
            const auto& p = m.points;
            if (!(x > p.front().first)) return p.front().second;
            if (!(x < p.back().first)) return p.back().second;
            // first breakpoint strictly greater than x
            const auto hi = std::upper_bound(
                p.begin(), p.end(), x, [](double v, const auto& pt) { return v < pt.first; });
            const auto lo = hi - 1;
            return lo->second + (hi->second - lo->second) * (x - lo->first) / (hi->first - lo->first);
          },
          [x](const Custom& m) {
            const double v = (*m.impl)(x);
            return v >= 0.0 ? std::min(v, 1.0) : 0.0;
          },
      },
      mf);
}

std::string mf_constructor_name(const MembershipFunction& mf) {
  return std::visit(Overloaded{
                        [](const Triangular&) -> std::string { return "TriangularMF"; },
                        [](const Trapezoidal&) -> std::string { return "TrapezoidalMF"; },
                        [](const Gaussian&) -> std::string { return "GaussianMF"; },
                        [](const Singleton&) -> std::string { return "SingletonMF"; },
                        [](const GeneralizedBell&) -> std::string { return "GeneralizedBellMF"; },
                        [](const Sigmoid&) -> std::string { return "SigmoidMF"; },
                        [](const PiecewiseLinear&) -> std::string { return "PiecewiseLinearMF"; },
                        [](const Custom& m) { return m.impl ? m.impl->name() : std::string("Custom"); },
                    },
                    mf);
}

std::vector<double> mf_parameters(const MembershipFunction& mf) {
  return std::visit(Overloaded{
                        [](const Triangular& m) { return std::vector{m.a, m.b, m.c}; },
                        [](const Trapezoidal& m) { return std::vector{m.a, m.b, m.c, m.d}; },
                        [](const Gaussian& m) { return std::vector{m.mu, m.sigma}; },
                        [](const Singleton& m) { return std::vector{m.c}; },
                        [](const GeneralizedBell& m) { return std::vector{m.a, m.b, m.c}; },
                        [](const Sigmoid& m) { return std::vector{m.a, m.c}; },
                        [](const PiecewiseLinear& m) {
                          std::vector<double> out;
                          out.reserve(m.points.size() * 2);
                          for (const auto& [x, mu] : m.points) {
                            out.push_back(x);
                            out.push_back(mu);
                          }
                          return out;
                        },
                        [](const Custom&) { return std::vector<double>{}; },
                    },
                    mf);
}

}  // namespace fuzzkit
