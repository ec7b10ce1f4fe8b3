#pragma once

// Exact arbitrary-precision combinatorial primitives: factorials, binomial
// coefficients, falling factorials, Stirling numbers of both kinds and the
// ordered Bell numbers. Everything here is integer-exact; no floating point.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace incidence {

// Arbitrary-precision signed integer.
using Int = boost::multiprecision::cpp_int;
// Arbitrary-precision integer that is nonnegative by contract of every
// operation producing one.
using Nat = Int;
// Exact rational, kept in lowest terms with positive denominator.
using Rat = boost::multiprecision::cpp_rational;

// Raised when an identity that must hold exactly (an exact division, a
// provably nonnegative sum) fails at runtime.
struct internal_consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

// num / den, throwing if the division leaves a remainder.
inline Int divide_exact(const Int& num, const Int& den) {
  Int q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) {
    throw internal_consistency_error("inexact division: " + num.str() + " / " +
                                     den.str());
  }
  return q;
}

inline Nat factorial(std::size_t n) {
  Nat result = 1;
  for (std::size_t i = 2; i <= n; ++i) result *= i;
  return result;
}

// C(a, b) by the multiplicative formula with running exact division; the
// intermediate product of j consecutive integers is always divisible by j.
// Returns 0 when b > a. Handles first arguments far beyond any sensible
// Pascal-triangle size (a = k*l grows like n^2 in the enumeration sums).
inline Nat binomial(const Nat& a, std::size_t b) {
  if (a < 0) throw std::invalid_argument("binomial: negative first argument");
  if (a < b) return 0;
  Nat result = 1;
  Nat factor = a - b;
  for (std::size_t j = 1; j <= b; ++j) {
    ++factor;  // a - b + j
    result *= factor;
    result /= j;  // exact at every step
  }
  return result;
}

inline Nat binomial(std::size_t a, std::size_t b) { return binomial(Nat(a), b); }

// (z)_n = z(z-1)...(z-n+1); zero as soon as a factor reaches zero (z < n).
inline Nat falling_factorial(const Nat& z, std::size_t n) {
  if (z < 0) {
    throw std::invalid_argument("falling_factorial: negative argument");
  }
  if (z < n) return 0;
  Nat result = 1;
  Nat factor = z;
  for (std::size_t i = 0; i < n; ++i) {
    result *= factor;
    --factor;
  }
  return result;
}

// Immutable triangular tables of Stirling numbers up to a fixed n_max,
// together with the ordered Bell numbers P(n) = sum_k S(n,k) k!.
//
// Built single-threaded; safe for concurrent reads afterwards.
class stirling_cache {
 public:
  explicit stirling_cache(std::size_t n_max) : n_max_(n_max) {
    first_.resize(n_max + 1);
    second_.resize(n_max + 1);
    bell_ordered_.resize(n_max + 1);
    first_[0] = {Int(1)};
    second_[0] = {Nat(1)};
    bell_ordered_[0] = 1;
    for (std::size_t n = 1; n <= n_max; ++n) {
      first_[n].assign(n + 1, Int(0));
      second_[n].assign(n + 1, Nat(0));
      // s(n,k) = s(n-1,k-1) - (n-1) s(n-1,k);  S(n,k) = k S(n-1,k) + S(n-1,k-1)
      for (std::size_t k = 1; k <= n; ++k) {
        first_[n][k] = first_[n - 1][k - 1];
        if (k < n) first_[n][k] -= Int(n - 1) * first_[n - 1][k];
        second_[n][k] = second_[n - 1][k - 1];
        if (k < n) second_[n][k] += Nat(k) * second_[n - 1][k];
      }
      Nat bell = 0;
      Nat kfact = 1;
      for (std::size_t k = 1; k <= n; ++k) {
        kfact *= k;
        bell += second_[n][k] * kfact;
      }
      bell_ordered_[n] = bell;
    }
  }

  std::size_t n_max() const { return n_max_; }

  // Signed Stirling number of the first kind s(n,k).
  const Int& first_kind(std::size_t n, std::size_t k) const {
    check_range(n, k);
    return first_[n][k];
  }

  // Stirling number of the second kind S(n,k).
  const Nat& second_kind(std::size_t n, std::size_t k) const {
    check_range(n, k);
    return second_[n][k];
  }

  // Ordered Bell number P(n), the number of total preorders of an n-set.
  const Nat& ordered_bell(std::size_t n) const {
    if (n > n_max_) throw std::out_of_range("stirling_cache: n > n_max");
    return bell_ordered_[n];
  }

  const std::vector<std::vector<Int>>& first_kind_table() const {
    return first_;
  }
  const std::vector<std::vector<Nat>>& second_kind_table() const {
    return second_;
  }

 private:
  void check_range(std::size_t n, std::size_t k) const {
    if (n > n_max_ || k > n) {
      throw std::out_of_range("stirling_cache: index (" + std::to_string(n) +
                              "," + std::to_string(k) + ") out of range");
    }
  }

  std::size_t n_max_;
  std::vector<std::vector<Int>> first_;
  std::vector<std::vector<Nat>> second_;
  std::vector<Nat> bell_ordered_;
};

// P(0..n_max) without materializing the full Stirling triangle: one row of
// S(n,k) is kept at a time.
inline std::vector<Nat> ordered_bell_sequence(std::size_t n_max) {
  std::vector<Nat> bell(n_max + 1);
  bell[0] = 1;
  std::vector<Nat> row = {Nat(1)};  // S(0, *)
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<Nat> next(n + 1, Nat(0));
    for (std::size_t k = 1; k <= n; ++k) {
      next[k] = (k < n ? Nat(k) * row[k] : Nat(0)) + row[k - 1];
    }
    row = std::move(next);
    Nat sum = 0;
    Nat kfact = 1;
    for (std::size_t k = 1; k <= n; ++k) {
      kfact *= k;
      sum += row[k] * kfact;
    }
    bell[n] = sum;
  }
  return bell;
}

inline Nat ordered_bell(std::size_t n) {
  return ordered_bell_sequence(n).back();
}

}  // namespace incidence
