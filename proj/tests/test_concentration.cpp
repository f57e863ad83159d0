#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "vclab/concentration.hpp"
#include "vclab/experiments.hpp"
#include "vclab/growth.hpp"

using namespace vclab;

namespace {

std::vector<Classifier> random_class(const Domain& dom, int count, std::uint64_t seed) {
  return random_classifiers(dom, count, seed);
}

// Exact probability of the Theorem-2 events by full enumeration over 2^m
// weighted functions. Mirrors the experiment's comparisons bit for bit.
struct EnumeratedEvents {
  double p_lower = 0.0;
  double p_upper = 0.0;
};
EnumeratedEvents enumerate_events(const Domain& dom, const std::vector<Classifier>& H,
                                  const ProductDistribution& P, double mu, double lambda) {
  const int m = dom.size();
  REQUIRE(m <= 10);
  EnumeratedEvents ev;
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    const Classifier f = Classifier::from_mask(dom, mask);
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      const double p = P.prob_plus(i);
      w *= (mask >> i) & 1 ? p : 1.0 - p;
    }
    const auto [dist, idx] = distance_sq_to_class(f, H);
    if (dist >= mu - lambda) ev.p_lower += w;
    if (dist <= mu + lambda) ev.p_upper += w;
  }
  ev.p_lower = std::min(1.0, ev.p_lower);  // weights sum to 1 only up to rounding
  ev.p_upper = std::min(1.0, ev.p_upper);
  return ev;
}

}  // namespace

TEST_CASE("mcdiarmid bound closed form") {
  REQUIRE(mcdiarmid_bound(1e-9, bd_parameters_eta(8)) == Catch::Approx(1.0));
  // eta case: ||c||^2 = 16/m, so the tail is e^{-m lambda^2 / 8}
  REQUIRE(mcdiarmid_bound(1.0, bd_parameters_eta(8)) == Catch::Approx(std::exp(-1.0)));
  // empirical case: ||c||^2 = 4b^2/n gives e^{-n lambda^2 / (2 b^2)}
  REQUIRE(mcdiarmid_bound(1.0, bd_parameters_empirical(2, 1.0)) ==
          Catch::Approx(std::exp(-1.0)));
  REQUIRE_THROWS_AS(mcdiarmid_bound(0.0, bd_parameters_eta(4)), std::invalid_argument);
}

TEST_CASE("bounded-difference parameter vectors") {
  SECTION("eta parameters") {
    const auto c4 = bd_parameters_eta(4);
    REQUIRE(c4.c[0] == 1.0);
    REQUIRE(c4.norm_sq == 4.0);
    REQUIRE(bd_parameters_eta(16).norm_sq == 1.0);
    for (int m : {1, 2, 7, 100}) REQUIRE(bd_parameters_eta(m).norm_sq * m == Catch::Approx(16.0));
  }
  SECTION("empirical-error parameters") {
    const auto c = bd_parameters_empirical(2, 1.0);
    REQUIRE(c.c[0] == 1.0);
    REQUIRE(c.norm_sq == 2.0);
    REQUIRE(bd_parameters_empirical(4, 1.0).norm_sq == 1.0);  // n = 4 b^2
    REQUIRE(bd_parameters_empirical(8, 2.0).c[0] == 2.0 * bd_parameters_empirical(8, 1.0).c[0]);
  }
}

TEST_CASE("eta coordinate flips move by exactly 4/m") {
  SECTION("sampled audit") {
    const Domain dom = Domain::line(12);
    const Classifier h = random_class(dom, 1, 3)[0];
    const auto rep = bd_flip_check_eta(h, 50, 17);
    REQUIRE(rep.exact_equality);
    for (int i = 0; i < 12; ++i) {
      REQUIRE(rep.observed_max[static_cast<std::size_t>(i)] == rep.claimed[static_cast<std::size_t>(i)]);
      REQUIRE(rep.slack[static_cast<std::size_t>(i)] == 0.0);
    }
  }
  SECTION("exhaustive audit for m <= 10") {
    for (int m : {1, 2, 5, 10}) {
      const Domain dom = Domain::line(m);
      const Classifier h = random_class(dom, 1, static_cast<std::uint64_t>(m))[0];
      const auto rep = bd_flip_check_eta_exhaustive(h);
      REQUIRE(rep.exact_equality);
      REQUIRE(rep.max_observed() == 4.0 / m);
    }
  }
  SECTION("m = 1 flips by 4") {
    const Domain dom = Domain::line(1);
    const auto rep = bd_flip_check_eta_exhaustive(Classifier::constant(dom, 1));
    REQUIRE(rep.max_observed() == 4.0);
  }
}

TEST_CASE("empirical error pair replacement stays within 2b/n") {
  const LossFunction loss = LossFunction::zero_one();
  SECTION("sampled audit at n = 1") {
    const Domain dom = Domain::line(4);
    const Classifier h = random_class(dom, 1, 5)[0];
    const auto rep =
        bd_flip_check_empirical(h, SamplingDistribution::uniform_x(4, 0.5), loss, 1, 200, 11);
    REQUIRE(rep.exact_equality);  // all slacks nonnegative
    REQUIRE(rep.max_observed() <= 2.0);
  }
  SECTION("replacing a pair by itself changes nothing") {
    const Domain dom = Domain::line(3);
    const Classifier h = Classifier::from_string(dom, "+-+");
    SampleSet S;
    S.pairs = {{0, 1}, {2, -1}, {1, 1}};
    const double base = empirical_error(S, h, loss);
    SampleSet S2 = S;
    S2.pairs[1] = S.pairs[1];
    REQUIRE(empirical_error(S2, h, loss) == base);
  }
  SECTION("exhaustive audit at n = 3, m = 2") {
    const Domain dom = Domain::line(2);
    const Classifier h = Classifier::from_string(dom, "+-");
    const auto chk = bd_flip_check_empirical_exhaustive(h, loss, 3);
    REQUIRE(chk.max_difference == 1.0 / 3.0);
    REQUIRE(chk.claimed == 2.0 / 3.0);
    REQUIRE(chk.max_difference <= chk.claimed);
  }
}

TEST_CASE("theorem-2 bound evaluator") {
  SECTION("growth 1 collapses the two bounds") {
    const auto b = thm2_bounds(100, 0.3, 1.0);
    REQUIRE(b.lower == b.upper);
  }
  SECTION("direct substitution at m=800, lambda=0.4, growth=100") {
    const auto b = thm2_bounds(800, 0.4, 100.0);
    REQUIRE(b.upper == Catch::Approx(1.0 - std::exp(-16.0)));
    REQUIRE(b.lower == Catch::Approx(1.0 - 100.0 * std::exp(-16.0)));
  }
  SECTION("lambda = m^{-1/4} reproduces the corollary tail exp(-sqrt(m)/8)") {
    const int m = 4096;
    const double lambda = std::pow(m, -0.25);
    const auto b = thm2_bounds(m, lambda, 50.0);
    REQUIRE(b.log_tail_lower ==
            Catch::Approx(std::log(50.0) - std::sqrt(static_cast<double>(m)) / 8.0));
  }
  SECTION("bound clipped to [0,1]") {
    REQUIRE(thm2_bounds(4, 0.1, 1000.0).lower == 0.0);
  }
}

TEST_CASE("theorem-3 bound evaluator, printed and derived variants") {
  SECTION("b = 1 makes the variants coincide") {
    const auto b = thm3_bound(64, 0.25, 1.0, 8.0);
    REQUIRE(b.printed == b.derived);
  }
  SECTION("direct substitution n=32, lambda=1, b=1, growth=2") {
    const auto b = thm3_bound(32, 1.0, 1.0, 2.0);
    REQUIRE(b.printed == Catch::Approx(1.0 - 2.0 * std::exp(-16.0)));
  }
  SECTION("variants differ for b != 1, exponent b^4 vs b^2") {
    const auto b = thm3_bound(100, 0.5, 2.0, 4.0);
    REQUIRE(b.log_tail_printed == Catch::Approx(std::log(4.0) - 100.0 * 0.25 / 32.0));
    REQUIRE(b.log_tail_derived == Catch::Approx(std::log(4.0) - 100.0 * 0.25 / 8.0));
    REQUIRE(b.printed < b.derived);
  }
  SECTION("lambda = n^{-1/4} reproduces the corollary tail") {
    const int n = 256;
    const auto spec = corollary_rates(n, RateMode::uniform_conv, 10.0, 1.0);
    REQUIRE(spec.log_tail ==
            Catch::Approx(std::log(10.0) - std::sqrt(static_cast<double>(n)) / 2.0));
  }
}

TEST_CASE("corollary rate instantiations") {
  SECTION("approx-upper at m=16: 1 - e^{-1/2}") {
    const auto spec = corollary_rates(16, RateMode::approx_upper);
    REQUIRE(spec.lambda == 0.5);
    REQUIRE(spec.bound_value == Catch::Approx(1.0 - std::exp(-0.5)));
  }
  SECTION("approx-lower carries the growth factor") {
    const auto spec = corollary_rates(10000, RateMode::approx_lower, 123.0);
    REQUIRE(spec.log_tail == Catch::Approx(std::log(123.0) - 100.0 / 8.0));
  }
  SECTION("decay of the Sauer-Shelah-envelope tail along m = 10^3..10^6") {
    // growth (em/dv)^dv at dv = 10 against the exp(-sqrt(m/8)) tail, in logs
    const double dv = 10.0;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (double m : {1e3, 1e4, 1e5, 1e6}) {
      const double log_tail = sauer_shelah_log_envelope(m, dv) - std::sqrt(m / 8.0);
      REQUIRE(log_tail < prev);
      prev = log_tail;
      last = log_tail;
    }
    REQUIRE(last < std::log(1e-6));
  }
}

TEST_CASE("approximation concentration experiment") {
  SECTION("distribution concentrated on a member") {
    const Domain dom = Domain::line(16);
    const auto H = random_class(dom, 4, 2);
    const auto P = ProductDistribution::concentrated_near(H[2], 0.0);
    const std::vector<double> grid{0.05, 0.4};
    const auto res = approx_concentration_experiment(dom, H, P, grid, 500, 99);
    REQUIRE(res.mu == 0.0);
    REQUIRE(res.mu_index == 2);
    REQUIRE(res.mean_dist_sq == 0.0);
    for (double f : res.lower.empirical_freq) REQUIRE(f == 1.0);
    for (double f : res.upper.empirical_freq) REQUIRE(f == 1.0);
  }
  SECTION("uniform law, singleton class: mean dist^2 near 2") {
    const int m = 1000;
    const Domain dom = Domain::line(m);
    const auto H = random_class(dom, 1, 31);
    const std::vector<double> grid{0.1};
    const auto res = approx_concentration_experiment(dom, H, ProductDistribution::uniform(m),
                                                     grid, 20000, 12345);
    REQUIRE(res.mu == 2.0);
    REQUIRE(std::abs(res.mean_dist_sq - 2.0) < 0.01);
    REQUIRE_FALSE(res.any_violation());
  }
  SECTION("empirical frequencies track the exact enumeration at m <= 10") {
    const int m = 8;
    const Domain dom = Domain::line(m);
    const auto H = random_class(dom, 5, 7);
    Rng rng(40);
    std::vector<double> probs(static_cast<std::size_t>(m));
    for (auto& p : probs) p = rng.next_double();
    const ProductDistribution P(probs);
    const std::vector<double> grid{0.05, 0.1, 0.2, 0.4, 0.8};
    const long long trials = 100000;
    const auto res = approx_concentration_experiment(dom, H, P, grid, trials, 2025);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto exact = enumerate_events(dom, H, P, res.mu, grid[k]);
      const double se_l = std::sqrt(std::max(0.0, exact.p_lower * (1 - exact.p_lower)) / trials);
      const double se_u = std::sqrt(std::max(0.0, exact.p_upper * (1 - exact.p_upper)) / trials);
      REQUIRE(std::abs(res.lower.empirical_freq[k] - exact.p_lower) <= 3.0 * se_l + 1e-12);
      REQUIRE(std::abs(res.upper.empirical_freq[k] - exact.p_upper) <= 3.0 * se_u + 1e-12);
    }
    REQUIRE_FALSE(res.any_violation());
  }
  SECTION("recorded distances satisfy the inner-product identity exactly") {
    const int m = 40;
    const Domain dom = Domain::line(m);
    const auto H = random_class(dom, 6, 8);
    const std::vector<double> grid{0.2};
    const auto res = approx_concentration_experiment(dom, H, ProductDistribution::uniform(m),
                                                     grid, 64, 555);
    for (long long t = 0; t < 64; ++t) {
      const Classifier f =
          sample_classifier(dom, ProductDistribution::uniform(m), mix_seed(555, static_cast<std::uint64_t>(t)));
      Rational best_inner = normalized_inner_exact(f, H[0]);
      for (const auto& h : H) {
        const Rational v = normalized_inner_exact(f, h);
        if (best_inner < v) best_inner = v;
      }
      const Rational dist{4LL * res.min_hamming[static_cast<std::size_t>(t)], m};
      REQUIRE(dist == Rational(2, 1) - Rational(2, 1) * best_inner);
    }
  }
  SECTION("thread count changes nothing") {
    const Domain dom = Domain::line(64);
    const auto H = random_class(dom, 3, 5);
    const std::vector<double> grid{0.1, 0.3};
    const auto a = approx_concentration_experiment(dom, H, ProductDistribution::uniform(64), grid,
                                                   4000, 77, 1);
    const auto b = approx_concentration_experiment(dom, H, ProductDistribution::uniform(64), grid,
                                                   4000, 77, 4);
    REQUIRE(a.min_hamming == b.min_hamming);
    REQUIRE(a.lower.empirical_freq == b.lower.empirical_freq);
    REQUIRE(a.upper.empirical_freq == b.upper.empirical_freq);
    REQUIRE(a.mean_dist_sq == b.mean_dist_sq);
  }
}

TEST_CASE("uniform random functions are nearly orthogonal to any fixed class") {
  const int m = 10000;
  const Domain dom = Domain::line(m);
  const auto H = random_class(dom, 100, 2024);
  const std::vector<double> grid{0.2};
  const long long trials = 1000;
  const auto res =
      approx_concentration_experiment(dom, H, ProductDistribution::uniform(m), grid, trials, 515);
  std::vector<double> max_inner(static_cast<std::size_t>(trials));
  for (long long t = 0; t < trials; ++t)
    max_inner[static_cast<std::size_t>(t)] = res.max_abs_inner(t);
  std::sort(max_inner.begin(), max_inner.end());
  const double p99 = max_inner[static_cast<std::size_t>(trials * 99 / 100)];
  REQUIRE(p99 < 0.06);
}

TEST_CASE("uniform convergence experiment") {
  const LossFunction loss = LossFunction::zero_one();
  SECTION("deterministic labels, constant classifier: zero deviation") {
    const Domain dom = Domain::line(6);
    const std::vector<Classifier> H{Classifier::constant(dom, 1)};
    const auto D = SamplingDistribution::uniform_x(6, 1.0);
    const std::vector<int> ns{4, 16};
    const auto res = uniform_convergence_experiment(H, D, loss, ns, std::vector<double>{}, 200, 42);
    for (const auto& per_n : res.sup_deviation)
      for (double v : per_n) REQUIRE(v == 0.0);
    REQUIRE(res.median_sup == std::vector<double>{0.0, 0.0});
  }
  SECTION("median sup-deviation decreases along the n grid") {
    const Domain dom = Domain::line(20);
    const auto H = random_class(dom, 16, 3);
    const auto D = SamplingDistribution::uniform_x(20, 0.8);
    const std::vector<int> ns{16, 64, 256, 1024};
    const std::vector<double> grid{0.1};
    const auto res = uniform_convergence_experiment(H, D, loss, ns, grid, 2000, 9);
    for (std::size_t k = 1; k < res.median_sup.size(); ++k)
      REQUIRE(res.median_sup[k] < res.median_sup[k - 1]);
    REQUIRE_FALSE(res.any_violation());
  }
  SECTION("frequencies match the exact enumeration at m=4, |H|=2, n=3") {
    const Domain dom = Domain::line(4);
    const auto H = random_class(dom, 2, 21);
    const auto D = SamplingDistribution::uniform_x(4, 0.7);
    const std::vector<int> ns{3};
    const std::vector<double> grid{0.1, 0.3, 0.5};
    const long long trials = 100000;
    const auto res = uniform_convergence_experiment(H, D, loss, ns, grid, trials, 2024);

    std::vector<double> true_err;
    for (const auto& h : H) true_err.push_back(true_error(h, D, loss));
    // exhaustive over all ((x,y))^3: 8^3 weighted samples
    const auto& rep = res.reports[0];
    for (std::size_t k = 0; k < rep.lambda_grid.size(); ++k) {
      double p_exact = 0.0;
      for (int c0 = 0; c0 < 8; ++c0)
        for (int c1 = 0; c1 < 8; ++c1)
          for (int c2 = 0; c2 < 8; ++c2) {
            const int codes[3] = {c0, c1, c2};
            double w = 1.0;
            SampleSet S;
            for (int j = 0; j < 3; ++j) {
              const int idx = codes[j] / 2;
              const int y = codes[j] % 2 == 0 ? -1 : 1;
              w *= D.x_weight(idx) *
                   (y == 1 ? D.label_prob_plus(idx) : 1.0 - D.label_prob_plus(idx));
              S.pairs.emplace_back(idx, y);
            }
            double sup = 0.0;
            for (std::size_t j = 0; j < H.size(); ++j)
              sup = std::max(sup, std::abs(empirical_error(S, H[j], loss) - true_err[j]));
            if (sup <= rep.lambda_grid[k]) p_exact += w;
          }
      const double se = std::sqrt(p_exact * (1 - p_exact) / trials);
      REQUIRE(std::abs(rep.empirical_freq[k] - p_exact) <= 3.0 * se + 1e-12);
    }
  }
  SECTION("corollary lambda appended per n") {
    const Domain dom = Domain::line(5);
    const auto H = random_class(dom, 2, 4);
    const std::vector<int> ns{16};
    const std::vector<double> grid{0.5};
    const auto res = uniform_convergence_experiment(H, SamplingDistribution::uniform_x(5, 0.5),
                                                    loss, ns, grid, 50, 8);
    REQUIRE(res.reports[0].lambda_grid.size() == 2);
    REQUIRE(res.reports[0].lambda_grid[1] == Catch::Approx(std::pow(16.0, -0.25)));
  }
  SECTION("thread count changes nothing") {
    const Domain dom = Domain::line(10);
    const auto H = random_class(dom, 4, 6);
    const auto D = SamplingDistribution::uniform_x(10, 0.6);
    const std::vector<int> ns{8, 32};
    const std::vector<double> grid{0.2};
    const auto a = uniform_convergence_experiment(H, D, loss, ns, grid, 3000, 5, 1);
    const auto b = uniform_convergence_experiment(H, D, loss, ns, grid, 3000, 5, 8);
    REQUIRE(a.sup_deviation == b.sup_deviation);
    REQUIRE(a.median_sup == b.median_sup);
    for (std::size_t k = 0; k < a.reports.size(); ++k)
      REQUIRE(a.reports[k].empirical_freq == b.reports[k].empirical_freq);
  }
}
