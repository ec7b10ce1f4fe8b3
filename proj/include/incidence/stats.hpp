#pragma once

// Minimal goodness-of-fit machinery for the sampler's validation harness:
// the regularized incomplete gamma function and the chi-square tail
// probability built on it.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace incidence {

namespace detail {

// P(a,x) by series expansion, for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a,x) by modified Lentz continued fraction, for x >= a + 1.
inline double gamma_q_continued_fraction(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a).
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw std::domain_error("regularized_gamma_q: need a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - detail::gamma_p_series(a, x)
                     : detail::gamma_q_continued_fraction(a, x);
}

// Upper tail probability of a chi-square variable with `df` degrees of
// freedom at the observed statistic.
inline double chi_square_pvalue(double statistic, double df) {
  return regularized_gamma_q(df / 2.0, statistic / 2.0);
}

// Pearson statistic for observed counts against expected counts.
inline double chi_square_statistic(const std::vector<double>& observed,
                                   const std::vector<double>& expected) {
  if (observed.size() != expected.size()) {
    throw std::invalid_argument("chi_square_statistic: size mismatch");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

}  // namespace incidence
