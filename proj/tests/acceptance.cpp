// Acceptance suite: one self-contained check per shipping criterion, each
// printed as a single [PASS]/[FAIL] line with its elapsed time. Criteria are
// selectable by number on the command line (default: all). The CLI binary
// used by the determinism criterion is supplied with --cli <path>.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "incidence/incidence.hpp"

namespace {

using namespace incidence;

constexpr double ln2 = std::numbers::ln2;

struct criterion {
  int number;
  std::string title;
  double time_limit_s;  // 0 = no stated limit
  std::function<bool(std::string&)> run;
};

// ---- 1: exact sequence reproduction ---------------------------------------

bool run_sequence_reproduction(std::string& detail) {
  const stirling_cache cache(10);
  for (std::size_t n = 1; n <= 10; ++n) {
    const std::string expected(reference_f_values[n - 1]);
    const std::string via_stirling = f_via_stirling(n, cache).str();
    const std::string via_msum = f_via_msum(n).str();
    if (via_stirling != expected || via_msum != expected) {
      detail = "F(" + std::to_string(n) + "): stirling=" + via_stirling +
               " msum=" + via_msum + " expected=" + expected;
      return false;
    }
  }
  detail = "F(1..10) reproduced by both exact methods";
  return true;
}

// ---- 2: Theorem 1 calibration ----------------------------------------------

bool run_theorem1_calibration(std::string& detail) {
  const stirling_cache cache(30);
  const double ratio10 =
      std::exp(f_asym(10).log_value - log_of(f_via_stirling(10, cache)));
  const double ratio30 =
      std::exp(f_asym(30).log_value - log_of(f_via_stirling(30, cache)));
  std::ostringstream os;
  os << "f_asym/F: n=10 -> " << ratio10 << ", n=30 -> " << ratio30;
  detail = os.str();
  return ratio10 >= 0.970 && ratio10 <= 0.980 &&
         std::abs(1.0 - ratio30) < std::abs(1.0 - ratio10);
}

// ---- 3: oracle equivalence ---------------------------------------------------

bool run_oracle_equivalence(std::string& detail) {
  const stirling_cache cache(14);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t l = 1; l <= n; ++l) {
        if (m_brute_force(k, l, n) != m_exact(k, l, n, cache)) {
          detail = "brute force mismatch at (" + std::to_string(k) + "," +
                   std::to_string(l) + "," + std::to_string(n) + ")";
          return false;
        }
      }
    }
  }
  for (std::size_t n = 1; n <= 14; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t l = 1; l <= n; ++l) {
        if (m_mobius(k, l, n) != m_exact(k, l, n, cache)) {
          detail = "method mismatch at (" + std::to_string(k) + "," +
                   std::to_string(l) + "," + std::to_string(n) + ")";
          return false;
        }
      }
    }
  }
  detail = "brute force (n<=6) and both methods (n<=14) agree on every m_kl";
  return true;
}

// ---- 4: identity suite ------------------------------------------------------

bool run_identity_suite(std::string& detail) {
  const stirling_cache cache(12);
  for (std::size_t n = 0; n <= 12; ++n) {
    for (std::size_t k = 0; k <= 6; ++k) {
      for (std::size_t l = 0; l <= 6; ++l) {
        if (!verify_column_identity(k, l, n, cache)) {
          detail = "column identity failed at (" + std::to_string(k) + "," +
                   std::to_string(l) + "," + std::to_string(n) + ")";
          return false;
        }
      }
    }
  }
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t l = 1; l <= n; ++l) {
        if (!verify_inversion(n, k, l, cache)) {
          detail = "inversion identity failed at n=" + std::to_string(n) +
                   " (" + std::to_string(k) + "," + std::to_string(l) + ")";
          return false;
        }
      }
    }
  }
  const auto bell = ordered_bell_sequence(200);
  std::vector<Nat> row{Nat(1)};  // Pascal row
  for (std::size_t n = 1; n <= 200; ++n) {
    std::vector<Nat> next(n + 1, Nat(1));
    for (std::size_t j = 1; j < n; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
    Nat recurrence = 0;
    for (std::size_t j = 1; j <= n; ++j) recurrence += row[j] * bell[n - j];
    if (recurrence != bell[n]) {
      detail = "ordered Bell recurrence failed at n=" + std::to_string(n);
      return false;
    }
  }
  detail = "column identity, inversion identity and P(n) recurrence all hold";
  return true;
}

// ---- 5: positive-sum interval ------------------------------------------------

bool run_positive_interval(std::string& detail) {
  const stirling_cache cache(12);
  bool ok = true;
  std::ostringstream os;
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::size_t K = default_truncation(n);
    const bounded_value bounds = f_positive_bounds(n, K);
    const Rat f(f_via_stirling(n, cache));
    const bool brackets = bounds.lower <= f && f <= bounds.upper;
    const bool pins = bounds.width() < 1;
    if (!brackets || !pins) {
      ok = false;
      os << (brackets ? "" : " no-bracket") << " n=" << n << " K=" << K
         << " width=" << bounds.width().convert_to<double>() << ";";
    }
  }
  detail = ok ? "all intervals bracket F(n) with width < 1"
              : "bracketing holds everywhere but width >= 1 at:" + os.str();
  return ok;
}

// ---- 6: saddle solver --------------------------------------------------------

bool run_saddle_solver(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double kappa = 0.01 + (0.99 - 0.01) * i / 99.0;
    const saddle_point sp = saddle_solve(kappa);
    worst = std::max(worst, sp.residual);
    if (sp.residual > 1e-12) {
      detail = "residual " + std::to_string(sp.residual) +
               " at kappa=" + std::to_string(kappa);
      return false;
    }
  }
  const saddle_point peak = saddle_solve(1.0 / (2.0 * ln2));
  const double peak_err = std::abs(peak.sigma - 1.0 / ln2);
  std::ostringstream os;
  os << "max residual " << worst << " on grid; |sigma - 1/log2| = " << peak_err
     << " at the peak";
  detail = os.str();
  return peak_err <= 1e-10;
}

// ---- 7: Theorem 4 trend --------------------------------------------------------

bool run_theorem4_trend(std::string& detail) {
  const stirling_cache cache(48);
  auto gap_at = [&](std::size_t n) {
    const auto k = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) / (2.0 * ln2)));
    return std::abs(m_asym(k, k, n).log_value -
                    log_of(m_stirling(k, k, n, cache)));
  };
  const double gap12 = gap_at(12);
  const double gap48 = gap_at(48);
  std::ostringstream os;
  os << "|log m_asym - log m_exact|: n=12 -> " << gap12 << ", n=48 -> "
     << gap48;
  detail = os.str();
  return gap48 < gap12;
}

// ---- 8: sampler exactness -------------------------------------------------------

bool run_sampler_exactness(std::string& detail) {
  const std::uint64_t seed = 2024;
  const std::size_t target_accepted = 100000;
  std::ostringstream os;
  for (std::size_t n : {2, 3, 4}) {
    const auto all = enumerate_incidence_matrices(n);
    std::map<std::string, std::uint64_t> freq;
    for (const auto& m : all) freq[m.key()] = 0;

    const preorder_sampler sampler(n);
    std::uint64_t trials = 0;
    std::size_t accepted = 0;
    while (accepted < target_accepted) {
      counter_rng rng = counter_rng::substream(seed, trials++);
      const preorder p1 = sampler.sample(rng);
      const preorder p2 = sampler.sample(rng);
      if (const auto m = pair_to_matrix(p1, p2)) {
        auto it = freq.find(m->key());
        if (it == freq.end()) {
          detail = "sampled a matrix outside the enumerated F(" +
                   std::to_string(n) + ") set";
          return false;
        }
        ++it->second;
        ++accepted;
      }
    }

    for (const auto& [key, count] : freq) {
      if (count == 0) {
        detail = "matrix never sampled at n=" + std::to_string(n) + ": " + key;
        return false;
      }
    }

    std::vector<double> observed, expected;
    for (const auto& [key, count] : freq) {
      observed.push_back(static_cast<double>(count));
      expected.push_back(static_cast<double>(target_accepted) /
                         static_cast<double>(all.size()));
    }
    const double stat = chi_square_statistic(observed, expected);
    const double pvalue =
        chi_square_pvalue(stat, static_cast<double>(all.size() - 1));
    if (pvalue <= 1e-3) {
      detail = "chi-square rejected uniformity at n=" + std::to_string(n) +
               " (p=" + std::to_string(pvalue) + ")";
      return false;
    }

    const double exact = exact_acceptance(n).convert_to<double>();
    const double rate =
        static_cast<double>(accepted) / static_cast<double>(trials);
    const double se =
        std::sqrt(exact * (1 - exact) / static_cast<double>(trials));
    if (std::abs(rate - exact) > 4 * se) {
      detail = "acceptance rate " + std::to_string(rate) + " not within 4 se of " +
               std::to_string(exact) + " at n=" + std::to_string(n);
      return false;
    }
    os << "n=" << n << ": all " << all.size() << " matrices seen, p=" << pvalue
       << ", rate " << rate << " vs " << exact << "; ";
  }
  detail = os.str();
  return true;
}

// ---- 9: asymptotic sampler statistics ---------------------------------------------

bool run_sampler_asymptotics(std::string& detail) {
  const std::size_t n = 100;
  const std::uint64_t trials = 100000;
  const preorder_sampler sampler(n);
  std::uint64_t accepted = 0;
  unsigned long long w_sum = 0;
  std::map<std::size_t, std::uint64_t> row_hist;
  for (std::uint64_t t = 0; t < trials; ++t) {
    counter_rng rng = counter_rng::substream(2025, t);
    const preorder p1 = sampler.sample(rng);
    const preorder p2 = sampler.sample(rng);
    const auto w = w_statistic(p1, p2).convert_to<std::uint64_t>();
    w_sum += w;
    if (w == 0) {
      ++accepted;
      ++row_hist[p1.blocks.size()];
    }
  }
  const double rate = static_cast<double>(accepted) / trials;
  const double mean_w = static_cast<double>(w_sum) / trials;
  const double limit_rate = std::exp(-0.5 * ln2 * ln2);
  const double limit_mean = 0.5 * ln2 * ln2;

  std::size_t mode = 0;
  std::uint64_t best = 0;
  for (const auto& [rows, c] : row_hist) {
    if (c > best) {
      best = c;
      mode = rows;
    }
  }
  const double peak = static_cast<double>(n) / (2.0 * ln2);

  std::ostringstream os;
  os << "rate " << rate << " vs " << limit_rate << ", mean W " << mean_w
     << " vs " << limit_mean << ", modal row count " << mode << " vs peak "
     << peak;
  detail = os.str();
  return std::abs(rate - limit_rate) <= 0.02 &&
         std::abs(mean_w - limit_mean) <= 0.02 &&
         std::abs(static_cast<double>(mode) - peak) <= 10.0;
}

// ---- 10: CLI determinism across worker counts ----------------------------------------

std::string g_cli_path;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool run_cli_determinism(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "no CLI path given (use --cli)";
    return false;
  }
  namespace fs = std::filesystem;
  const fs::path out1 = fs::temp_directory_path() / "incidence_accept_j1.json";
  const fs::path out2 = fs::temp_directory_path() / "incidence_accept_j4.json";
  const std::string base = g_cli_path + " sample --n 50 --trials 10000 --seed 7";
  if (std::system((base + " --jobs 1 > " + out1.string()).c_str()) != 0 ||
      std::system((base + " --jobs 4 > " + out2.string()).c_str()) != 0) {
    detail = "CLI invocation failed";
    return false;
  }
  const std::string r1 = slurp(out1);
  const std::string r2 = slurp(out2);
  fs::remove(out1);
  fs::remove(out2);
  if (r1.empty() || r1 != r2) {
    detail = "reports differ between --jobs 1 and --jobs 4";
    return false;
  }
  detail = "byte-identical reports from --jobs 1 and --jobs 4 (" +
           std::to_string(r1.size()) + " bytes)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<criterion> criteria = {
      {1, "exact sequence reproduction F(1..10)", 5.0, run_sequence_reproduction},
      {2, "Theorem 1 calibration at n=10 and n=30", 10.0, run_theorem1_calibration},
      {3, "oracle equivalence for m_kl", 60.0, run_oracle_equivalence},
      {4, "identity suite", 30.0, run_identity_suite},
      {5, "positive-sum interval pins F(n)", 30.0, run_positive_interval},
      {6, "saddle solver residuals and peak", 0.0, run_saddle_solver},
      {7, "Theorem 4 convergence trend", 120.0, run_theorem4_trend},
      {8, "sampler exactness at n=2,3,4", 60.0, run_sampler_exactness},
      {9, "asymptotic sampler statistics at n=100", 60.0, run_sampler_asymptotics},
      {10, "CLI determinism across worker counts", 0.0, run_cli_determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      g_cli_path = argv[++i];
    } else {
      selected.insert(std::atoi(arg.c_str()));
    }
  }

  int failures = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    ++ran;
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.time_limit_s > 0 && elapsed >= c.time_limit_s) {
      ok = false;
      detail += " [exceeded " + std::to_string(c.time_limit_s) + " s limit]";
    }
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.number << ": "
         << c.title << " (" << elapsed << " s)";
    if (!detail.empty()) line << " -- " << detail;
    std::cout << line.str() << std::endl;
    failures += ok ? 0 : 1;
  }
  std::cout << (ran - failures) << "/" << ran << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
