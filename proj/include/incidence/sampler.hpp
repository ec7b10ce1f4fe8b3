#pragma once

// Uniform random generation of incidence matrices by rejection on pairs of
// uniform random preorders: draw two ordered set partitions of {1..n}, accept
// when no pair of elements shares a block in both (W = 0), and read the
// matrix off the block intersections. Every accepted matrix is uniform over
// all F(n) incidence matrices with n ones.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "enumeration.hpp"
#include "exact.hpp"
#include "incidence_matrix.hpp"
#include "rng.hpp"

namespace incidence {

// Ordered set partition of {1..n} into nonempty blocks.
struct preorder {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> blocks;

  bool valid() const {
    std::vector<bool> seen(n + 1, false);
    std::size_t covered = 0;
    for (const auto& block : blocks) {
      if (block.empty()) return false;
      for (std::size_t e : block) {
        if (e < 1 || e > n || seen[e]) return false;
        seen[e] = true;
        ++covered;
      }
    }
    return covered == n;
  }

  // Canonical key; blocks are kept internally sorted.
  std::string key() const {
    std::string s;
    for (const auto& block : blocks) {
      for (std::size_t e : block) s += std::to_string(e) + ",";
      s += "|";
    }
    return s;
  }
};

// Draws uniform preorders of a fixed n by exact inverse-transform sampling of
// the first-block size: size j has probability C(m,j) P(m-j) / P(m) on m
// remaining elements, decided by a uniform exact integer below P(m). The
// needed P and C tables are built once at construction.
class preorder_sampler {
 public:
  explicit preorder_sampler(std::size_t n)
      : n_(n), bell_(ordered_bell_sequence(n)) {
    if (n < 1) throw std::invalid_argument("preorder_sampler: need n >= 1");
    choose_.resize(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
      choose_[m].resize(m + 1);
      choose_[m][0] = 1;
      for (std::size_t j = 1; j <= m; ++j) {
        choose_[m][j] = choose_[m - 1][j - 1];
        if (j < m) choose_[m][j] += choose_[m - 1][j];
      }
    }
  }

  std::size_t n() const { return n_; }
  const Nat& ordered_bell(std::size_t m) const { return bell_[m]; }

  preorder sample(counter_rng& rng) const {
    preorder p;
    p.n = n_;
    std::vector<std::size_t> remaining(n_);
    for (std::size_t i = 0; i < n_; ++i) remaining[i] = i + 1;
    while (!remaining.empty()) {
      const std::size_t m = remaining.size();
      Nat r = rng.nat_below(bell_[m]);
      std::size_t j = 1;
      for (;; ++j) {
        if (j > m) {
          // sum_j C(m,j) P(m-j) = P(m), so the scan must land
          throw internal_consistency_error("preorder_sampler: weights < P(m)");
        }
        const Nat weight = choose_[m][j] * bell_[m - j];
        if (r < weight) break;
        r -= weight;
      }
      // uniform j-subset via partial Fisher-Yates
      for (std::size_t i = 0; i < j; ++i) {
        std::swap(remaining[i], remaining[i + rng.below(m - i)]);
      }
      std::vector<std::size_t> block(remaining.begin(), remaining.begin() + j);
      std::sort(block.begin(), block.end());
      p.blocks.push_back(std::move(block));
      remaining.erase(remaining.begin(), remaining.begin() + j);
    }
    return p;
  }

 private:
  std::size_t n_;
  std::vector<Nat> bell_;
  std::vector<std::vector<Nat>> choose_;
};

// One-off draw; for tight loops construct a preorder_sampler once instead.
inline preorder random_preorder(std::size_t n, counter_rng& rng) {
  return preorder_sampler(n).sample(rng);
}

namespace detail {

inline std::vector<std::size_t> block_index_of(const preorder& p) {
  std::vector<std::size_t> idx(p.n + 1);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    for (std::size_t e : p.blocks[b]) idx[e] = b;
  }
  return idx;
}

}  // namespace detail

// W = number of pairs i < j lying in the same block of both preorders,
// counted in O(n) from the joint block-pair class sizes.
inline Nat w_statistic(const preorder& p1, const preorder& p2) {
  if (p1.n != p2.n) throw std::invalid_argument("w_statistic: size mismatch");
  const auto b1 = detail::block_index_of(p1);
  const auto b2 = detail::block_index_of(p2);
  std::unordered_map<std::uint64_t, std::uint64_t> joint;
  joint.reserve(p1.n * 2);
  for (std::size_t e = 1; e <= p1.n; ++e) {
    ++joint[b1[e] * (p2.blocks.size() + 1) + b2[e]];
  }
  unsigned long long w = 0;
  for (const auto& [cls, c] : joint) w += c * (c - 1) / 2;
  return Nat(w);
}

// The K x L intersection matrix when W = 0; absent when any cell would
// receive two elements (which is exactly W > 0).
inline std::optional<incidence_matrix> pair_to_matrix(const preorder& p1,
                                                      const preorder& p2) {
  if (p1.n != p2.n) {
    throw std::invalid_argument("pair_to_matrix: size mismatch");
  }
  const auto b1 = detail::block_index_of(p1);
  const auto b2 = detail::block_index_of(p2);
  incidence_matrix m;
  m.rows = p1.blocks.size();
  m.cols = p2.blocks.size();
  m.bits.assign(m.rows * m.cols, 0);
  for (std::size_t e = 1; e <= p1.n; ++e) {
    std::uint8_t& cell = m.at(b1[e], b2[e]);
    if (cell) return std::nullopt;
    cell = 1;
  }
  return m;
}

// Rejection loop: preorder pairs until W = 0.
inline incidence_matrix sample_incidence(const preorder_sampler& sampler,
                                         counter_rng& rng) {
  for (;;) {
    const preorder p1 = sampler.sample(rng);
    const preorder p2 = sampler.sample(rng);
    if (auto m = pair_to_matrix(p1, p2)) return *std::move(m);
  }
}

inline incidence_matrix sample_incidence(std::size_t n, counter_rng& rng) {
  return sample_incidence(preorder_sampler(n), rng);
}

// Exact success probability of one trial: n! F(n) / P(n)^2.
inline Rat exact_acceptance(std::size_t n) {
  if (n < 1) throw std::invalid_argument("exact_acceptance: need n >= 1");
  const stirling_cache cache(n);
  const Nat p = cache.ordered_bell(n);
  return Rat(factorial(n) * f_via_stirling(n, cache), p * p);
}

struct sample_report {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  double acceptance_rate = 0.0;
  double mean_w = 0.0;
  std::map<std::uint64_t, std::uint64_t> w_histogram;
  std::uint64_t seed = 0;
};

// Runs `trials` independent preorder-pair trials. Trial t draws from
// counter_rng::substream(seed, t), so the report is a pure function of
// (n, trials, seed) no matter how many workers execute it. When `collect`
// is nonnull, accepted matrices are appended in trial order.
inline sample_report run_stats(std::size_t n, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers = 1,
                               std::vector<incidence_matrix>* collect = nullptr) {
  if (trials < 1) throw std::invalid_argument("run_stats: need trials >= 1");
  if (workers < 1) workers = 1;
  const preorder_sampler sampler(n);

  struct partial {
    std::uint64_t accepted = 0;
    unsigned long long w_sum = 0;
    std::map<std::uint64_t, std::uint64_t> hist;
    std::vector<incidence_matrix> matrices;
  };
  std::vector<partial> parts(workers);

  auto work = [&](unsigned wi) {
    partial& out = parts[wi];
    const std::uint64_t lo = trials * wi / workers;
    const std::uint64_t hi = trials * (wi + 1) / workers;
    for (std::uint64_t t = lo; t < hi; ++t) {
      counter_rng rng = counter_rng::substream(seed, t);
      const preorder p1 = sampler.sample(rng);
      const preorder p2 = sampler.sample(rng);
      const std::uint64_t w =
          w_statistic(p1, p2).convert_to<std::uint64_t>();
      ++out.hist[w];
      out.w_sum += w;
      if (w == 0) {
        ++out.accepted;
        if (collect) out.matrices.push_back(*pair_to_matrix(p1, p2));
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned wi = 0; wi < workers; ++wi) threads.emplace_back(work, wi);
    for (auto& th : threads) th.join();
  }

  sample_report report;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  unsigned long long w_sum = 0;
  for (auto& part : parts) {
    report.accepted += part.accepted;
    w_sum += part.w_sum;
    for (const auto& [w, c] : part.hist) report.w_histogram[w] += c;
    if (collect) {
      collect->insert(collect->end(),
                      std::make_move_iterator(part.matrices.begin()),
                      std::make_move_iterator(part.matrices.end()));
    }
  }
  report.acceptance_rate =
      static_cast<double>(report.accepted) / static_cast<double>(trials);
  report.mean_w = static_cast<double>(w_sum) / static_cast<double>(trials);
  return report;
}

}  // namespace incidence
