#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "vclab/concentration.hpp"
#include "vclab/domain.hpp"
#include "vclab/hamming.hpp"
#include "vclab/rng.hpp"

namespace vclab {

/// Runs body(t) for t in [0, trials) on `threads` workers. Each trial must be
/// a pure function of its index (seeds derived via mix_seed), writing only to
/// its own slot of any result buffer, so the outcome is identical for every
/// thread count.
template <class Fn>
inline void parallel_trials(long long trials, int threads, Fn&& body) {
  threads = std::max(1, threads);
  if (threads == 1 || trials < 2 * threads) {
    for (long long t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const long long step = (trials + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const long long lo = step * w;
    const long long hi = std::min(trials, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (long long t = lo; t < hi; ++t) body(t);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct ReportParameters {
  int m = 0;
  int n = 0;
  double b = 0.0;
  double growth = 0.0;  // the value used inside the bound (card H(X))
  double mu = 0.0;
  long long hypothesis_count = 0;
};

/// One theoretical curve confronted with Monte Carlo evidence on a lambda
/// grid. `violated` flags empirical frequencies more than 3 binomial standard
/// errors below the guarantee.
struct ConcentrationReport {
  std::string kind;  // thm2-lower | thm2-upper | thm3
  ReportParameters params;
  std::vector<double> lambda_grid;
  std::vector<double> empirical_freq;
  std::vector<double> bound_printed;
  std::vector<double> bound_derived;
  std::vector<double> log_tail_printed;
  std::vector<double> log_tail_derived;
  std::vector<bool> violated;
  std::uint64_t seed = 0;
  long long trials = 0;

  bool any_violation() const {
    for (bool v : violated)
      if (v) return true;
    return false;
  }
};

inline bool freq_violates(double freq, double bound, long long trials) {
  const double sigma = std::sqrt(std::max(0.0, freq * (1.0 - freq)) / static_cast<double>(trials));
  return freq < bound - 3.0 * sigma;
}

inline long long distinct_count(std::span<const Classifier> H) {
  long long distinct = 0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) dup = H[i] == H[j];
    if (!dup) ++distinct;
  }
  return distinct;
}

struct ApproxConcentrationResult {
  ConcentrationReport lower;  // event dist^2 >= mu - lambda
  ConcentrationReport upper;  // event dist^2 <= mu + lambda
  double mu = 0.0;
  std::size_t mu_index = 0;
  double mean_dist_sq = 0.0;
  int m = 0;
  std::vector<int> min_hamming;  // per trial, distance to the nearest member
  std::vector<int> max_hamming;  // per trial, distance to the farthest member

  double dist_sq(long long t) const {
    return 4.0 * min_hamming[static_cast<std::size_t>(t)] / m;
  }
  double max_abs_inner(long long t) const {
    const int dmin = min_hamming[static_cast<std::size_t>(t)];
    const int dmax = max_hamming[static_cast<std::size_t>(t)];
    return std::max(std::abs(m - 2.0 * dmin), std::abs(m - 2.0 * dmax)) / m;
  }
  double fraction_dist_sq_in(double lo, double hi) const {
    long long c = 0;
    for (std::size_t t = 0; t < min_hamming.size(); ++t) {
      const double v = 4.0 * min_hamming[t] / m;
      if (v >= lo && v <= hi) ++c;
    }
    return static_cast<double>(c) / static_cast<double>(min_hamming.size());
  }
  bool any_violation() const { return lower.any_violation() || upper.any_violation(); }
};

/// Draws `trials` random functions from P, measures the squared normalized
/// distance to H, and confronts the per-lambda event frequencies with the
/// theoretical guarantees (growth = card H). Deterministic in (inputs, seed)
/// for every thread count.
inline ApproxConcentrationResult approx_concentration_experiment(
    const Domain& dom, std::span<const Classifier> H, const ProductDistribution& P,
    std::span<const double> lambda_grid, long long trials, std::uint64_t seed, int threads = 1) {
  require(!H.empty(), "approx_concentration_experiment: empty hypothesis class");
  require(trials >= 1, "approx_concentration_experiment: trials must be positive");
  require(dom.size() == P.size(), "approx_concentration_experiment: dimension mismatch");
  for (double l : lambda_grid)
    require(l > 0.0, "approx_concentration_experiment: lambda must be positive");
  const int m = dom.size();

  ApproxConcentrationResult res;
  res.m = m;
  const auto [mu, mu_idx] = mu_class(H, P);
  res.mu = mu;
  res.mu_index = mu_idx;
  res.min_hamming.assign(static_cast<std::size_t>(trials), 0);
  res.max_hamming.assign(static_cast<std::size_t>(trials), 0);

  parallel_trials(trials, threads, [&](long long t) {
    const Classifier f =
        sample_classifier(dom, P, mix_seed(seed, static_cast<std::uint64_t>(t)));
    int dmin = hamming_distance(f, H[0]);
    int dmax = dmin;
    for (std::size_t j = 1; j < H.size(); ++j) {
      const int d = hamming_distance(f, H[j]);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    res.min_hamming[static_cast<std::size_t>(t)] = dmin;
    res.max_hamming[static_cast<std::size_t>(t)] = dmax;
  });

  const long long growth = distinct_count(H);
  double sum_dist = 0.0;
  for (long long t = 0; t < trials; ++t) sum_dist += res.dist_sq(t);
  res.mean_dist_sq = sum_dist / static_cast<double>(trials);

  auto make_report = [&](bool lower_event) {
    ConcentrationReport rep;
    rep.kind = lower_event ? "thm2-lower" : "thm2-upper";
    rep.params.m = m;
    rep.params.growth = static_cast<double>(growth);
    rep.params.hypothesis_count = static_cast<long long>(H.size());
    rep.params.mu = mu;
    rep.seed = seed;
    rep.trials = trials;
    rep.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    for (double lambda : lambda_grid) {
      long long hits = 0;
      for (long long t = 0; t < trials; ++t) {
        const double v = res.dist_sq(t);
        if (lower_event ? v >= mu - lambda : v <= mu + lambda) ++hits;
      }
      const double freq = static_cast<double>(hits) / static_cast<double>(trials);
      const auto b = thm2_bounds(m, lambda, static_cast<double>(growth));
      const double bound = lower_event ? b.lower : b.upper;
      const double log_tail = lower_event ? b.log_tail_lower : b.log_tail_upper;
      rep.empirical_freq.push_back(freq);
      rep.bound_printed.push_back(bound);
      rep.bound_derived.push_back(bound);
      rep.log_tail_printed.push_back(log_tail);
      rep.log_tail_derived.push_back(log_tail);
      rep.violated.push_back(freq_violates(freq, bound, trials));
    }
    return rep;
  };
  res.lower = make_report(true);
  res.upper = make_report(false);
  return res;
}

struct UniformConvergenceResult {
  std::vector<int> n_grid;
  std::vector<ConcentrationReport> reports;  // one per n, kind thm3
  std::vector<double> median_sup;            // median sup-deviation per n
  std::vector<std::vector<double>> sup_deviation;  // per n, per trial

  bool any_violation() const {
    for (const auto& r : reports)
      if (r.any_violation()) return true;
    return false;
  }
};

/// For each n draws `trials` samples of size n, records the sup over H of
/// |empirical - true| error, and confronts P[sup <= lambda] with both
/// exponent variants of the uniform-convergence bound (growth = card H).
/// The corollary value lambda = n^{-1/4} is appended to the grid per n.
inline UniformConvergenceResult uniform_convergence_experiment(
    std::span<const Classifier> H, const SamplingDistribution& D, const LossFunction& loss,
    std::span<const int> n_grid, std::span<const double> lambda_grid, long long trials,
    std::uint64_t seed, int threads = 1) {
  require(!H.empty(), "uniform_convergence_experiment: empty hypothesis class");
  require(!n_grid.empty(), "uniform_convergence_experiment: empty n grid");
  require(trials >= 1, "uniform_convergence_experiment: trials must be positive");
  for (int n : n_grid) require(n >= 1, "uniform_convergence_experiment: n must be positive");
  for (double l : lambda_grid)
    require(l > 0.0, "uniform_convergence_experiment: lambda must be positive");
  const int m = D.size();
  for (const auto& h : H)
    require(h.size() == m, "uniform_convergence_experiment: dimension mismatch");

  std::vector<double> true_err(H.size());
  for (std::size_t j = 0; j < H.size(); ++j) true_err[j] = true_error(H[j], D, loss);
  const long long growth = distinct_count(H);

  UniformConvergenceResult out;
  out.n_grid.assign(n_grid.begin(), n_grid.end());

  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const int n = n_grid[k];
    const std::uint64_t n_seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    std::vector<double> sup(static_cast<std::size_t>(trials), 0.0);

    parallel_trials(trials, threads, [&](long long t) {
      const SampleSet S = sample_dataset(D, n, mix_seed(n_seed, static_cast<std::uint64_t>(t)));
      // per-point label counts make the sup over H O(|H| m) instead of O(|H| n)
      std::vector<int> cnt_plus(static_cast<std::size_t>(m), 0);
      std::vector<int> cnt_minus(static_cast<std::size_t>(m), 0);
      for (const auto& [idx, y] : S.pairs)
        (y == 1 ? cnt_plus : cnt_minus)[static_cast<std::size_t>(idx)] += 1;
      double worst = 0.0;
      for (std::size_t j = 0; j < H.size(); ++j) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
          const int yhat = H[j].label(i);
          if (cnt_plus[static_cast<std::size_t>(i)] != 0)
            acc += cnt_plus[static_cast<std::size_t>(i)] * loss.value(1, yhat);
          if (cnt_minus[static_cast<std::size_t>(i)] != 0)
            acc += cnt_minus[static_cast<std::size_t>(i)] * loss.value(-1, yhat);
        }
        worst = std::max(worst, std::abs(acc / n - true_err[j]));
      }
      sup[static_cast<std::size_t>(t)] = worst;
    });

    ConcentrationReport rep;
    rep.kind = "thm3";
    rep.params.m = m;
    rep.params.n = n;
    rep.params.b = loss.bound();
    rep.params.growth = static_cast<double>(growth);
    rep.params.hypothesis_count = static_cast<long long>(H.size());
    rep.seed = seed;
    rep.trials = trials;
    rep.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
    rep.lambda_grid.push_back(std::pow(static_cast<double>(n), -0.25));
    for (double lambda : rep.lambda_grid) {
      long long hits = 0;
      for (long long t = 0; t < trials; ++t)
        if (sup[static_cast<std::size_t>(t)] <= lambda) ++hits;
      const double freq = static_cast<double>(hits) / static_cast<double>(trials);
      const auto b3 = thm3_bound(n, lambda, loss.bound(), static_cast<double>(growth));
      rep.empirical_freq.push_back(freq);
      rep.bound_printed.push_back(b3.printed);
      rep.bound_derived.push_back(b3.derived);
      rep.log_tail_printed.push_back(b3.log_tail_printed);
      rep.log_tail_derived.push_back(b3.log_tail_derived);
      rep.violated.push_back(freq_violates(freq, b3.printed, trials) ||
                             freq_violates(freq, b3.derived, trials));
    }
    out.reports.push_back(std::move(rep));

    std::vector<double> sorted = sup;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t T = sorted.size();
    out.median_sup.push_back(T % 2 == 1 ? sorted[T / 2]
                                        : 0.5 * (sorted[T / 2 - 1] + sorted[T / 2]));
    out.sup_deviation.push_back(std::move(sup));
  }
  return out;
}

}  // namespace vclab
