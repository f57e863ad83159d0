#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vclab/domain.hpp"
#include "vclab/exact.hpp"
#include "vclab/rng.hpp"

namespace vclab {

inline void check_same_domain(const Classifier& f, const Classifier& h) {
  require(f.size() == h.size() && f.domain_id() == h.domain_id(),
          "classifiers are bound to different domains");
}

inline int hamming_distance(const Classifier& f, const Classifier& h) {
  check_same_domain(f, h);
  int d = 0;
  const auto& a = f.words();
  const auto& b = h.words();
  for (std::size_t w = 0; w < a.size(); ++w) d += std::popcount(a[w] ^ b[w]);
  return d;
}

/// eta_h(f) = (1/m)‖f − h‖² = (4/m)·#disagreements, exact as a rational.
inline Rational eta_exact(const Classifier& f, const Classifier& h) {
  return Rational(4LL * hamming_distance(f, h), f.size());
}

/// Squared normalized l2 distance between two cube vertices; value in [0, 4].
inline double eta(const Classifier& f, const Classifier& h) {
  return 4.0 * hamming_distance(f, h) / f.size();
}

/// <f, h>/m, exact. Satisfies eta = 2 - 2·inner with no rounding.
inline Rational normalized_inner_exact(const Classifier& f, const Classifier& h) {
  const int d = hamming_distance(f, h);
  return Rational(f.size() - 2LL * d, f.size());
}

inline double normalized_inner(const Classifier& f, const Classifier& h) {
  const int d = hamming_distance(f, h);
  return (f.size() - 2.0 * d) / f.size();
}

/// E(eta_h) under a product law: (4/m)·sum_i q_i with q_i the per-coordinate
/// disagreement probability.
inline double mean_eta(const Classifier& h, const ProductDistribution& P) {
  require(h.size() == P.size(), "mean_eta: dimension mismatch");
  double sum_q = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    const double p = P.prob_plus(i);
    sum_q += h.label(i) == 1 ? 1.0 - p : p;
  }
  return (4.0 * sum_q) / h.size();
}

/// min_h E(eta_h) over a finite class, with the first attaining index.
inline std::pair<double, std::size_t> mu_class(std::span<const Classifier> H,
                                               const ProductDistribution& P) {
  require(!H.empty(), "mu_class: empty hypothesis class");
  double best = mean_eta(H[0], P);
  std::size_t best_idx = 0;
  for (std::size_t j = 1; j < H.size(); ++j) {
    const double v = mean_eta(H[j], P);
    if (v < best) {
      best = v;
      best_idx = j;
    }
  }
  return {best, best_idx};
}

/// Nearest member by Hamming count, ties to the lowest index.
inline std::pair<int, std::size_t> min_hamming_to_class(const Classifier& f,
                                                        std::span<const Classifier> H) {
  require(!H.empty(), "distance to empty hypothesis class");
  int best = hamming_distance(f, H[0]);
  std::size_t best_idx = 0;
  for (std::size_t j = 1; j < H.size(); ++j) {
    const int d = hamming_distance(f, H[j]);
    if (d < best) {
      best = d;
      best_idx = j;
    }
  }
  return {best, best_idx};
}

/// ‖f° − H°‖²: squared normalized distance to the nearest member.
inline std::pair<double, std::size_t> distance_sq_to_class(const Classifier& f,
                                                           std::span<const Classifier> H) {
  const auto [d, idx] = min_hamming_to_class(f, H);
  return {4.0 * d / f.size(), idx};
}

inline Classifier sample_classifier(const Domain& dom, const ProductDistribution& P,
                                    std::uint64_t seed) {
  require(dom.size() == P.size(), "sample_classifier: dimension mismatch");
  return Classifier::sample(dom, P.probs(), seed);
}

/// Average table loss of h over the sample; value in [0, bound].
inline double empirical_error(const SampleSet& S, const Classifier& h, const LossFunction& loss) {
  require(S.size() >= 1, "empirical_error: empty sample");
  double sum = 0.0;
  for (const auto& [idx, y] : S.pairs) {
    require(idx >= 0 && idx < h.size(), "empirical_error: sample index out of range");
    sum += loss.value(y, h.label(idx));
  }
  return sum / S.size();
}

/// E(loss(y, h(x))) under P_X(x)·P_0(y|x), evaluated as a finite sum.
inline double true_error(const Classifier& h, const SamplingDistribution& D,
                         const LossFunction& loss) {
  require(h.size() == D.size(), "true_error: dimension mismatch");
  double total = 0.0;
  for (int i = 0; i < h.size(); ++i) {
    const double p = D.label_prob_plus(i);
    total += D.x_weight(i) * (p * loss.value(1, h.label(i)) + (1.0 - p) * loss.value(-1, h.label(i)));
  }
  return total;
}

/// n i.i.d. pairs: point by P_X, then label by P_0(.|x). Deterministic in the
/// seed regardless of caller threading.
inline SampleSet sample_dataset(const SamplingDistribution& D, int n, std::uint64_t seed) {
  require(n >= 1, "sample_dataset: n must be positive");
  Rng rng(seed);
  SampleSet S;
  S.pairs.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int idx = D.sample_index(rng);
    const int y = rng.bernoulli(D.label_prob_plus(idx)) ? 1 : -1;
    S.pairs.emplace_back(idx, y);
  }
  return S;
}

/// Draws `count` independent uniform classifiers (seed-mixed per member).
inline std::vector<Classifier> random_classifiers(const Domain& dom, int count,
                                                  std::uint64_t seed) {
  require(count >= 1, "random_classifiers: count must be positive");
  const auto P = ProductDistribution::uniform(dom.size());
  std::vector<Classifier> H;
  H.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    H.push_back(sample_classifier(dom, P, mix_seed(seed, static_cast<std::uint64_t>(j))));
  return H;
}

}  // namespace vclab
