#pragma once

// Log-space evaluation of the asymptotic formulas:
//
//   P(n) ~ (n!/2) (1/log 2)^{n+1}
//   F(n) ~ (n!/4) e^{-(log 2)^2/2} (log 2)^{-(2n+2)}
//   m_kl(n) ~ (n^{2n}/n!) e^{n w(sigma)} v(sigma) e^{n w(tau)} v(tau)
//             e^{-1/(2 sigma tau)}
//
// where sigma solves the saddle equation kappa = sigma (1 - e^{-1/sigma})
// at kappa = k/n (equivalently log(1 - kappa/sigma) + 1/sigma = 0), and
// likewise tau at lambda = l/n. Magnitudes are carried as natural logs;
// n^{2n}/n! alone overflows double precision near n = 80.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "exact.hpp"

namespace incidence {

// A positive quantity represented by its natural log, with the direct value
// attached whenever exp(log_value) is representable as a double.
struct log_estimate {
  double log_value = 0.0;
  std::optional<double> value;

  static log_estimate from_log(double lv) {
    log_estimate e;
    e.log_value = lv;
    if (lv < 709.0 && lv > -708.0) e.value = std::exp(lv);
    return e;
  }
};

// Natural log of a positive exact integer, from its top 64 bits plus the
// base-2 exponent; error below 1e-15 relative in the log.
inline double log_of(const Nat& x) {
  if (x <= 0) throw std::domain_error("log_of: nonpositive argument");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 64) {
    return std::log(static_cast<double>(x.convert_to<std::uint64_t>()));
  }
  const Nat top = x >> (bits - 64);
  return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) +
         static_cast<double>(bits - 64) * std::numbers::ln2;
}

inline double log_of_rat(const Rat& x) {
  return log_of(Nat(numerator(x))) - log_of(Nat(denominator(x)));
}

struct saddle_point {
  double kappa = 0.0;
  double sigma = 0.0;
  double residual = 0.0;  // |sigma (1 - e^{-1/sigma}) - kappa|
};

struct saddle_convergence_error : std::runtime_error {
  double bracket_lo, bracket_hi;
  saddle_convergence_error(double lo, double hi)
      : std::runtime_error("saddle_solve: no convergence in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        bracket_lo(lo),
        bracket_hi(hi) {}
};

namespace detail {

// sigma (1 - e^{-1/sigma}), strictly increasing from 0 to 1 on sigma > 0.
inline double saddle_lhs(double sigma) {
  return sigma * -std::expm1(-1.0 / sigma);
}

}  // namespace detail

// Unique sigma > 0 with sigma (1 - e^{-1/sigma}) = kappa, for kappa in (0,1).
// Bisection on [kappa/2, 1/(2(1-kappa)) + 2] — the lhs is below kappa at the
// left end and sigma ~ 1/(2(1-kappa)) as kappa -> 1 — then Newton polish.
inline saddle_point saddle_solve(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::domain_error("saddle_solve: kappa must lie in (0,1)");
  }
  double lo = std::max(kappa / 2, 1e-9);
  double hi = 1.0 / (2.0 * (1.0 - kappa)) + 2.0;
  if (detail::saddle_lhs(lo) >= kappa) lo = kappa / 2;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (detail::saddle_lhs(mid) < kappa ? lo : hi) = mid;
  }
  double sigma = 0.5 * (lo + hi);
  for (int i = 0; i < 20; ++i) {
    const double e = std::exp(-1.0 / sigma);
    const double g = sigma * -std::expm1(-1.0 / sigma) - kappa;
    const double dg = -std::expm1(-1.0 / sigma) - e / sigma;
    if (dg == 0.0) break;
    const double next = sigma - g / dg;
    if (next > 0.0 && std::isfinite(next)) sigma = next;
    if (std::abs(g) < 1e-15) break;
  }
  saddle_point sp;
  sp.kappa = kappa;
  sp.sigma = sigma;
  sp.residual = std::abs(detail::saddle_lhs(sigma) - kappa);
  if (!(sp.residual <= 1e-12)) throw saddle_convergence_error(lo, hi);
  return sp;
}

// log of (n!/2) (1/log 2)^{n+1}
inline log_estimate p_asym(std::size_t n) {
  if (n < 1) throw std::invalid_argument("p_asym: need n >= 1");
  const double lv = std::lgamma(static_cast<double>(n) + 1.0) -
                    std::numbers::ln2 -
                    (static_cast<double>(n) + 1.0) * std::log(std::numbers::ln2);
  return log_estimate::from_log(lv);
}

// log of (n!/4) e^{-(log 2)^2/2} (log 2)^{-(2n+2)}
inline log_estimate f_asym(std::size_t n) {
  if (n < 1) throw std::invalid_argument("f_asym: need n >= 1");
  const double ln2 = std::numbers::ln2;
  const double lv = std::lgamma(static_cast<double>(n) + 1.0) -
                    2.0 * ln2 - 0.5 * ln2 * ln2 -
                    (2.0 * static_cast<double>(n) + 2.0) * std::log(ln2);
  return log_estimate::from_log(lv);
}

namespace detail {

// w(x) = x (1 - e^{-1/x}) log(1 - e^{-1/x}) + log x - e^{-1/x}
inline double saddle_w(double x) {
  const double q = -std::expm1(-1.0 / x);  // 1 - e^{-1/x}
  return x * q * std::log(q) + std::log(x) - std::exp(-1.0 / x);
}

// v(x) = sqrt( x (1 - e^{-1/x}) / (x (1 - e^{-1/x}) - e^{-1/x}) )
inline double saddle_v(double x) {
  const double a = x * -std::expm1(-1.0 / x);
  return std::sqrt(a / (a - std::exp(-1.0 / x)));
}

}  // namespace detail

// log of the Theorem-scale approximation to m_kl(n); symmetric in (k,l).
inline log_estimate m_asym(std::size_t k, std::size_t l, std::size_t n) {
  if (k < 1 || l < 1 || k >= n || l >= n) {
    throw std::domain_error("m_asym: need 1 <= k,l < n");
  }
  const double nd = static_cast<double>(n);
  const saddle_point s = saddle_solve(static_cast<double>(k) / nd);
  const saddle_point t = saddle_solve(static_cast<double>(l) / nd);
  const double lv = 2.0 * nd * std::log(nd) - std::lgamma(nd + 1.0) +
                    nd * detail::saddle_w(s.sigma) +
                    std::log(detail::saddle_v(s.sigma)) +
                    nd * detail::saddle_w(t.sigma) +
                    std::log(detail::saddle_v(t.sigma)) -
                    1.0 / (2.0 * s.sigma * t.sigma);
  return log_estimate::from_log(lv);
}

// (z)_n / z^n as an exact rational in [0, 1]; requires z >= n.
inline Rat falling_ratio_exact(const Nat& z, std::size_t n) {
  if (z < n) throw std::domain_error("falling_ratio_exact: need z >= n");
  if (n == 0) return 1;
  Nat z_pow = 1;
  for (std::size_t i = 0; i < n; ++i) z_pow *= z;
  return Rat(falling_factorial(z, n), z_pow);
}

// Leading-order form e^{-n^2 / (2z)} of the same ratio, for z > n.
inline double falling_ratio_approx(double z, std::size_t n) {
  if (n == 0) return 1.0;
  if (!(z > static_cast<double>(n))) {
    throw std::domain_error("falling_ratio_approx: need z > n");
  }
  const double nd = static_cast<double>(n);
  return std::exp(-nd * nd / (2.0 * z));
}

}  // namespace incidence
