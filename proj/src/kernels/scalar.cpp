#include <algorithm>
#include <cassert>

#include "fuzzkit/kernels.hpp"

namespace fuzzkit::kernels::scalar {

namespace {

template <Implication I, SNorm S>
void accumulate(double* acc, const double* curve, std::size_t n, double r) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = snorm<S>(acc[i], implication<I>(r, curve[i]));
}

template <Implication I>
void accumulate_with(SNorm agg, double* acc, const double* curve, std::size_t n, double r) {
  switch (agg) {
    case SNorm::Max: return accumulate<I, SNorm::Max>(acc, curve, n, r);
    case SNorm::ProbSum: return accumulate<I, SNorm::ProbSum>(acc, curve, n, r);
    case SNorm::BoundedSum: return accumulate<I, SNorm::BoundedSum>(acc, curve, n, r);
    case SNorm::Drastic: return accumulate<I, SNorm::Drastic>(acc, curve, n, r);
    case SNorm::Nilpotent: return accumulate<I, SNorm::Nilpotent>(acc, curve, n, r);
    case SNorm::Einstein: return accumulate<I, SNorm::Einstein>(acc, curve, n, r);
  }
}

}  // namespace

void accumulate_implied(std::span<double> acc, std::span<const double> curve, double activation,
                        Implication imp, SNorm agg) {
  assert(acc.size() == curve.size());
  if (imp == Implication::Min) {
    accumulate_with<Implication::Min>(agg, acc.data(), curve.data(), acc.size(), activation);
  } else {
    accumulate_with<Implication::Prod>(agg, acc.data(), curve.data(), acc.size(), activation);
  }
}

Moments moments(std::span<const double> xs, std::span<const double> mus) {
  assert(xs.size() == mus.size());
  const std::size_t n = xs.size();
  double w[4] = {0.0, 0.0, 0.0, 0.0};
  double m[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t j = 0; j < 4; ++j) {
      w[j] += xs[i + j] * mus[i + j];
      m[j] += mus[i + j];
    }
  }
  Moments out{(w[0] + w[1]) + (w[2] + w[3]), (m[0] + m[1]) + (m[2] + m[3])};
  for (; i < n; ++i) {
    out.weighted += xs[i] * mus[i];
    out.mass += mus[i];
  }
  return out;
}

double max_value(std::span<const double> values) {
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

}  // namespace fuzzkit::kernels::scalar
