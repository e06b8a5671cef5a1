#include "fuzzkit/kernels.hpp"

#if defined(FUZZKIT_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>

#define FUZZKIT_AVX2 __attribute__((target("avx2")))

namespace fuzzkit::kernels::avx2 {

namespace {

template <Implication I>
FUZZKIT_AVX2 inline __m256d implied(__m256d r, __m256d mu) {
  if constexpr (I == Implication::Min) {
    return _mm256_min_pd(mu, r);
  } else {
    return _mm256_mul_pd(r, mu);
  }
}

template <SNorm S>
FUZZKIT_AVX2 inline __m256d combine(__m256d a, __m256d b) {
  if constexpr (S == SNorm::Max) {
    return _mm256_max_pd(b, a);
  } else if constexpr (S == SNorm::ProbSum) {
    return _mm256_sub_pd(_mm256_add_pd(a, b), _mm256_mul_pd(a, b));
  } else {
    static_assert(S == SNorm::BoundedSum);
    return _mm256_min_pd(_mm256_add_pd(a, b), _mm256_set1_pd(1.0));
  }
}

template <Implication I, SNorm S>
FUZZKIT_AVX2 void accumulate(double* acc, const double* curve, std::size_t n, double r) {
  const __m256d vr = _mm256_set1_pd(r);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(acc + i);
    const __m256d mu = _mm256_loadu_pd(curve + i);
    _mm256_storeu_pd(acc + i, combine<S>(a, implied<I>(vr, mu)));
  }
  for (; i < n; ++i) acc[i] = snorm<S>(acc[i], implication<I>(r, curve[i]));
}

template <Implication I>
FUZZKIT_AVX2 bool accumulate_with(SNorm agg, double* acc, const double* curve, std::size_t n,
                                  double r) {
  switch (agg) {
    case SNorm::Max: accumulate<I, SNorm::Max>(acc, curve, n, r); return true;
    case SNorm::ProbSum: accumulate<I, SNorm::ProbSum>(acc, curve, n, r); return true;
    case SNorm::BoundedSum: accumulate<I, SNorm::BoundedSum>(acc, curve, n, r); return true;
    default: return false;
  }
}

}  // namespace

FUZZKIT_AVX2 void accumulate_implied(std::span<double> acc, std::span<const double> curve,
                                     double activation, Implication imp, SNorm agg) {
  const bool done =
      imp == Implication::Min
          ? accumulate_with<Implication::Min>(agg, acc.data(), curve.data(), acc.size(), activation)
          : accumulate_with<Implication::Prod>(agg, acc.data(), curve.data(), acc.size(), activation);
  if (!done) scalar::accumulate_implied(acc, curve, activation, imp, agg);
}

FUZZKIT_AVX2 Moments moments(std::span<const double> xs, std::span<const double> mus) {
  const std::size_t n = xs.size();
  __m256d w = _mm256_setzero_pd();
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xs.data() + i);
    const __m256d mu = _mm256_loadu_pd(mus.data() + i);
    w = _mm256_add_pd(w, _mm256_mul_pd(x, mu));
    m = _mm256_add_pd(m, mu);
  }
  alignas(32) double wl[4];
  alignas(32) double ml[4];
  _mm256_store_pd(wl, w);
  _mm256_store_pd(ml, m);
  Moments out{(wl[0] + wl[1]) + (wl[2] + wl[3]), (ml[0] + ml[1]) + (ml[2] + ml[3])};
  for (; i < n; ++i) {
    out.weighted += xs[i] * mus[i];
    out.mass += mus[i];
  }
  return out;
}

FUZZKIT_AVX2 double max_value(std::span<const double> values) {
  const std::size_t n = values.size();
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, _mm256_loadu_pd(values.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) out = std::max(out, values[i]);
  return out;
}

}  // namespace fuzzkit::kernels::avx2

#endif
