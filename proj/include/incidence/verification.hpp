#pragma once

// Embedded self-check: the reference values of F(1..10) (OEIS A101370),
// recomputed through both exact routes, plus the two identity grids at small
// sizes. Used by the CLI `verify` subcommand and by the fault-injection
// tests. A check that throws is recorded as a failure, so a corrupted table
// surfaces in the manifest instead of aborting the run.

#include <array>
#include <cstddef>
#include <exception>
#include <string>
#include <string_view>
#include <vector>

#include "enumeration.hpp"
#include "exact.hpp"

namespace incidence {

// F(1), ..., F(10)
inline constexpr std::array<std::string_view, 10> reference_f_values = {
    "1",      "4",       "24",        "196",       "2016",
    "24976",  "361792",  "5997872",   "111969552", "2324081728"};

struct check_result {
  std::string name;
  bool ok = false;
  std::string detail;
};

namespace detail {

template <typename Body>
check_result checked(std::string name, Body&& body) {
  check_result result{std::move(name)};
  try {
    body(result);
  } catch (const std::exception& e) {
    result.ok = false;
    result.detail = std::string("exception: ") + e.what();
  }
  return result;
}

}  // namespace detail

// Runs every embedded check against the given tables. A corrupted cache
// shows up as one or more failing entries.
inline std::vector<check_result> run_verification(const stirling_cache& cache) {
  if (cache.n_max() < reference_f_values.size()) {
    throw std::invalid_argument("run_verification: cache must cover n <= 10");
  }
  std::vector<check_result> results;

  for (std::size_t n = 1; n <= reference_f_values.size(); ++n) {
    const std::string expected(reference_f_values[n - 1]);
    results.push_back(detail::checked(
        "f_via_stirling(" + std::to_string(n) + ")", [&](check_result& r) {
          const std::string got = f_via_stirling(n, cache).str();
          r.ok = got == expected;
          r.detail = "got " + got + ", expected " + expected;
        }));
    results.push_back(detail::checked(
        "f_via_msum(" + std::to_string(n) + ")", [&](check_result& r) {
          const std::string got = f_via_msum(n).str();
          r.ok = got == expected;
          r.detail = "got " + got + ", expected " + expected;
        }));
  }

  results.push_back(detail::checked(
      "column_identity(k,l<=4, n<=8)", [&](check_result& r) {
        r.ok = true;
        r.detail = "all cells agree";
        for (std::size_t n = 0; n <= 8; ++n) {
          for (std::size_t k = 0; k <= 4; ++k) {
            for (std::size_t l = 0; l <= 4; ++l) {
              if (!verify_column_identity(k, l, n, cache)) {
                r.ok = false;
                r.detail = "failed at k=" + std::to_string(k) +
                           " l=" + std::to_string(l) + " n=" + std::to_string(n);
                return;
              }
            }
          }
        }
      }));

  results.push_back(detail::checked(
      "inversion_identity(k,l<=n<=6)", [&](check_result& r) {
        r.ok = true;
        r.detail = "all cells agree";
        for (std::size_t n = 1; n <= 6; ++n) {
          for (std::size_t k = 1; k <= n; ++k) {
            for (std::size_t l = 1; l <= n; ++l) {
              if (!verify_inversion(n, k, l, cache)) {
                r.ok = false;
                r.detail = "failed at n=" + std::to_string(n) +
                           " k=" + std::to_string(k) + " l=" + std::to_string(l);
                return;
              }
            }
          }
        }
      }));

  return results;
}

inline bool all_passed(const std::vector<check_result>& results) {
  for (const auto& r : results) {
    if (!r.ok) return false;
  }
  return true;
}

}  // namespace incidence
