#pragma once

// Exact counts of incidence matrices. m_kl(n) is the number of k x l zero-one
// matrices with n ones and no zero rows or columns; F(n) sums m_kl(n) over all
// shapes. Two independent routes are provided for both quantities:
//
//   m_mobius    inclusion-exclusion over the cumulative counts C(kl, n)
//   m_stirling  (k! l! / n!) sum_r s(n,r) S(r,k) S(r,l)
//
//   f_via_msum      double sum of m_mobius over the shape grid
//   f_via_stirling  (1/n!) sum_k s(n,k) P(k)^2
//
// plus a truncation of the positive-term series
// F(n) = sum_{k,l>=0} 2^-(k+l+2) C(kl, n) with a rigorous rational tail bound,
// identity validators, and a brute-force enumerator used as the oracle against
// all of the above.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "exact.hpp"
#include "incidence_matrix.hpp"

namespace incidence {

namespace detail {

// C(p, n) for every product p = 0..p_max, shared across the (i,j) grids.
inline std::vector<Nat> binomial_products(std::size_t p_max, std::size_t n) {
  std::vector<Nat> table(p_max + 1);
  for (std::size_t p = 0; p <= p_max; ++p) table[p] = binomial(p, n);
  return table;
}

inline Nat m_mobius_with(const std::vector<Nat>& choose_n, std::size_t k,
                         std::size_t l, std::size_t n) {
  Int acc = 0;
  for (std::size_t i = 0; i <= k; ++i) {
    const Nat ck = binomial(k, i);
    for (std::size_t j = 0; j <= l; ++j) {
      if (i * j < n) continue;  // C(ij, n) = 0
      Int term = ck * binomial(l, j) * choose_n[i * j];
      if ((k + l - i - j) % 2 != 0) term = -term;
      acc += term;
    }
  }
  if (acc < 0) {
    throw internal_consistency_error("m_mobius: negative total for (" +
                                     std::to_string(k) + "," +
                                     std::to_string(l) + "," +
                                     std::to_string(n) + ")");
  }
  return acc;
}

}  // namespace detail

// m_kl(n) by Mobius inversion:
//   sum_{i<=k} sum_{j<=l} (-1)^{k+l-i-j} C(k,i) C(l,j) C(ij,n).
// The alternating sum is accumulated exactly and checked nonnegative at the
// end; m_00(0) = 1 falls out of the i=j=0 term.
inline Nat m_mobius(std::size_t k, std::size_t l, std::size_t n) {
  if (k * l < n) return 0;
  return detail::m_mobius_with(detail::binomial_products(k * l, n), k, l, n);
}

// m_kl(n) = (k! l! / n!) sum_{r=1}^{n} s(n,r) S(r,k) S(r,l); the division by
// n! is exact and is verified.  Requires 1 <= k,l <= n <= cache.n_max().
inline Nat m_stirling(std::size_t k, std::size_t l, std::size_t n,
                      const stirling_cache& cache) {
  if (k < 1 || l < 1 || k > n || l > n) {
    throw std::invalid_argument("m_stirling: need 1 <= k,l <= n");
  }
  Int sum = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    if (r < k || r < l) continue;  // S(r,k) or S(r,l) vanishes
    sum += cache.first_kind(n, r) * cache.second_kind(r, k) *
           cache.second_kind(r, l);
  }
  Int value = divide_exact(factorial(k) * factorial(l) * sum, factorial(n));
  if (value < 0) {
    throw internal_consistency_error("m_stirling: negative count");
  }
  return value;
}

// m_kl(n) for arbitrary indices: zero outside the feasible region
// (k,l <= n <= kl), m_00(0) = 1, m_stirling inside.
inline Nat m_exact(std::size_t k, std::size_t l, std::size_t n,
                   const stirling_cache& cache) {
  if (n == 0) return (k == 0 && l == 0) ? 1 : 0;
  if (k == 0 || l == 0 || k > n || l > n || k * l < n) return 0;
  return m_stirling(k, l, n, cache);
}

// F(n) = sum_{i,j <= n} m_ij(n), with every entry from the Mobius route.
inline Nat f_via_msum(std::size_t n) {
  if (n == 0) return 1;
  const auto choose_n = detail::binomial_products(n * n, n);
  Nat total = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t l = 1; l <= n; ++l) {
      if (k * l < n) continue;
      total += detail::m_mobius_with(choose_n, k, l, n);
    }
  }
  return total;
}

// F(n) = (1/n!) sum_{k=1}^{n} s(n,k) P(k)^2.
inline Nat f_via_stirling(std::size_t n, const stirling_cache& cache) {
  if (n == 0) return 1;
  Int sum = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const Nat& p = cache.ordered_bell(k);
    sum += cache.first_kind(n, k) * p * p;
  }
  Int value = divide_exact(sum, factorial(n));
  if (value < 0) {
    throw internal_consistency_error("f_via_stirling: negative count");
  }
  return value;
}

inline Nat f_via_stirling(std::size_t n) {
  return f_via_stirling(n, stirling_cache(n));
}

// Shape-resolved counts for one weight n: every (k,l) with 1 <= k,l <= n and
// kl >= n (all such entries are positive), summing to F(n).
struct count_table {
  std::size_t n = 0;
  std::map<std::pair<std::size_t, std::size_t>, Nat> entries;

  Nat total() const {
    Nat sum = 0;
    for (const auto& [kl, m] : entries) sum += m;
    return sum;
  }
};

inline count_table make_count_table(std::size_t n, const stirling_cache& cache) {
  count_table table;
  table.n = n;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t l = 1; l <= n; ++l) {
      if (k * l < n) continue;
      table.entries.emplace(std::make_pair(k, l), m_stirling(k, l, n, cache));
    }
  }
  return table;
}

// An interval certain to contain the true value.
struct bounded_value {
  Rat lower;
  Rat upper;

  Rat width() const { return upper - lower; }

  // The unique integer in [lower, upper], when the interval pins one.
  std::optional<Int> pinned_integer() const {
    Int lo_ceil = numerator(lower) / denominator(lower);
    if (lo_ceil * denominator(lower) != numerator(lower)) ++lo_ceil;
    Int hi_floor = numerator(upper) / denominator(upper);
    return lo_ceil == hi_floor ? std::optional<Int>(lo_ceil) : std::nullopt;
  }
};

namespace detail {

// Rational upper bound on e^x for 0 <= x < 1: 31 Taylor terms plus twice the
// next term, which dominates the remainder since x/(i+1) < 1/2 beyond i = 1.
inline Rat exp_upper_bound(const Rat& x) {
  Rat sum = 0;
  Rat term = 1;
  for (int i = 0; i <= 30; ++i) {
    sum += term;
    term *= x / (i + 1);
  }
  return sum + 2 * term;
}

}  // namespace detail

// K recommended for f_positive_bounds at weight n.
inline std::size_t default_truncation(std::size_t n) {
  return std::max<std::size_t>(4 * n, 64);
}

// Truncation of the positive-term series at k,l <= K:
//   lower = sum_{k,l=0}^{K} 2^-(k+l+2) C(kl, n)            (exact)
//   upper = lower + (2 T P(n) + T^2) / n!
// where T bounds the one-sided tail sum_{k>K} k^n / 2^{k+1} (valid only for
// K > n/log 2) and each dropped term was majorized via C(kl,n) <= (kl)^n / n!.
inline bounded_value f_positive_bounds(std::size_t n, std::size_t K) {
  if (n < 1) throw std::invalid_argument("f_positive_bounds: need n >= 1");
  // e^{n/K} < 2 is exactly the K > n/log2 precondition; test it on the
  // rational upper bound so the check errs on the safe side.
  const Rat e_nk = detail::exp_upper_bound(Rat(n, K));
  if (e_nk >= 2) {
    throw std::invalid_argument("f_positive_bounds: need K > n/log 2");
  }

  // Accumulate the lower sum over a common denominator 2^(2K+2).
  const auto choose_n = detail::binomial_products(K * K, n);
  Nat numerator_sum = 0;
  for (std::size_t k = 0; k <= K; ++k) {
    for (std::size_t l = 0; l <= K; ++l) {
      if (k * l < n) continue;
      numerator_sum += choose_n[k * l] << (2 * K - k - l);
    }
  }
  Rat lower(numerator_sum, Nat(1) << (2 * K + 2));

  // T(K) = (K^n / 2^K) (e^{n/K}/2) / (2 - e^{n/K})
  Nat k_pow = 1;
  for (std::size_t i = 0; i < n; ++i) k_pow *= K;
  const Rat tail_one = Rat(k_pow, Nat(1) << K) * (e_nk / 2) / (2 - e_nk);
  const Rat p_n(ordered_bell(n));
  const Rat tail = (2 * tail_one * p_n + tail_one * tail_one) / Rat(factorial(n));

  return bounded_value{lower, lower + tail};
}

// Eq-level validators, both evaluated exactly on both sides.

// sum_{i<=k} sum_{j<=l} C(k,i) C(l,j) m_ij(n) == C(kl, n)
inline bool verify_column_identity(std::size_t k, std::size_t l, std::size_t n,
                                   const stirling_cache& cache) {
  Nat lhs = 0;
  for (std::size_t i = 0; i <= k; ++i) {
    const Nat ck = binomial(k, i);
    for (std::size_t j = 0; j <= l; ++j) {
      lhs += ck * binomial(l, j) * m_exact(i, j, n, cache);
    }
  }
  return lhs == binomial(k * l, n);
}

// k! S(n,k) l! S(n,l) == sum_{r=1}^{n} r! S(n,r) m_kl(r)
inline bool verify_inversion(std::size_t n, std::size_t k, std::size_t l,
                             const stirling_cache& cache) {
  if (k < 1 || l < 1 || k > n || l > n) {
    throw std::invalid_argument("verify_inversion: need 1 <= k,l <= n");
  }
  const Nat lhs = factorial(k) * cache.second_kind(n, k) * factorial(l) *
                  cache.second_kind(n, l);
  Nat rhs = 0;
  for (std::size_t r = 1; r <= n; ++r) {
    rhs += factorial(r) * cache.second_kind(n, r) * m_exact(k, l, r, cache);
  }
  return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Brute-force oracle: direct enumeration of zero-one matrices. Independent of
// every counting formula above — it just walks n-subsets of the k*l cells.

namespace detail {

template <typename Visit>
void for_each_placement(std::size_t k, std::size_t l, std::size_t n,
                        Visit&& visit) {
  const std::size_t cells = k * l;
  if (n > cells || n == 0) return;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    visit(idx);
    // next combination in lexicographic order
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == cells - n + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

// Number of k x l zero-one matrices with n ones and no zero rows/columns,
// counted by exhaustive enumeration. Intended for small inputs only.
inline Nat m_brute_force(std::size_t k, std::size_t l, std::size_t n) {
  if (n == 0) return (k == 0 && l == 0) ? 1 : 0;
  if (k == 0 || l == 0) return 0;
  unsigned long long count = 0;
  detail::for_each_placement(k, l, n, [&](const std::vector<std::size_t>& idx) {
    std::uint64_t row_mask = 0, col_mask = 0;
    for (std::size_t cell : idx) {
      row_mask |= std::uint64_t{1} << (cell / l);
      col_mask |= std::uint64_t{1} << (cell % l);
    }
    if (row_mask == (std::uint64_t{1} << k) - 1 &&
        col_mask == (std::uint64_t{1} << l) - 1) {
      ++count;
    }
  });
  return count;
}

// All incidence matrices with n ones (shapes k,l <= n), materialized.
inline std::vector<incidence_matrix> enumerate_incidence_matrices(
    std::size_t n) {
  std::vector<incidence_matrix> out;
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t l = 1; l <= n; ++l) {
      if (k * l < n) continue;
      detail::for_each_placement(
          k, l, n, [&](const std::vector<std::size_t>& idx) {
            incidence_matrix m;
            m.rows = k;
            m.cols = l;
            m.bits.assign(k * l, 0);
            for (std::size_t cell : idx) m.bits[cell] = 1;
            if (m.valid()) out.push_back(std::move(m));
          });
    }
  }
  return out;
}

}  // namespace incidence
