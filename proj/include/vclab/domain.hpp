#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vclab/exact.hpp"
#include "vclab/rng.hpp"

namespace vclab {

/// An ordered finite point set X = {x_1, ..., x_m} in R^d. Immutable after
/// construction; the ordering is the identity of each point. Every Domain
/// instance gets a fresh id so classifiers can be checked for binding.
class Domain {
 public:
  explicit Domain(std::vector<std::vector<double>> points)
      : points_(std::move(points)), id_(next_id()) {
    require(!points_.empty(), "Domain: needs at least one point");
    dim_ = static_cast<int>(points_.front().size());
    require(dim_ >= 1, "Domain: dimension must be positive");
    for (const auto& p : points_) {
      require(static_cast<int>(p.size()) == dim_, "Domain: inconsistent point dimension");
      for (double c : p) require(std::isfinite(c), "Domain: non-finite coordinate");
    }
    check_distinct();
  }

  /// m points 0, 1, ..., m-1 on the real line. Handy when only the size of
  /// the domain matters (pure Hamming-cube work).
  static Domain line(int m) {
    require(m >= 1, "Domain: m must be positive");
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pts[i] = {static_cast<double>(i)};
    return Domain(std::move(pts));
  }

  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return dim_; }
  const std::vector<double>& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  std::uint64_t id() const { return id_; }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1, std::memory_order_relaxed);
  }

  void check_distinct() {
    std::vector<int> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return points_[static_cast<std::size_t>(a)] < points_[static_cast<std::size_t>(b)];
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
      require(points_[static_cast<std::size_t>(order[k - 1])] !=
                  points_[static_cast<std::size_t>(order[k])],
              "Domain: points must be distinct");
    }
  }

  std::vector<std::vector<double>> points_;
  int dim_ = 0;
  std::uint64_t id_ = 0;
};

/// A +/-1 labeling of a Domain: one vertex of the Hamming cube {-1,1}^m.
/// Labels are stored as packed bits (set bit = +1) so Hamming distances run
/// on xor/popcount. As a vector in R^m it always has norm sqrt(m).
class Classifier {
 public:
  Classifier(const Domain& dom, std::span<const int> labels)
      : m_(dom.size()), domain_id_(dom.id()), bits_(word_count(dom.size()), 0) {
    require(static_cast<int>(labels.size()) == m_, "Classifier: label count != domain size");
    for (int i = 0; i < m_; ++i) {
      require(labels[i] == 1 || labels[i] == -1, "Classifier: labels must be +1 or -1");
      if (labels[i] == 1) set_bit(i);
    }
  }

  static Classifier from_string(const Domain& dom, std::string_view s) {
    require(static_cast<int>(s.size()) == dom.size(), "Classifier: string length != domain size");
    std::vector<int> labels(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      require(s[i] == '+' || s[i] == '-', "Classifier: expected '+'/'-' characters");
      labels[i] = s[i] == '+' ? 1 : -1;
    }
    return Classifier(dom, labels);
  }

  static Classifier from_mask(const Domain& dom, std::uint64_t mask) {
    require(dom.size() <= 64, "Classifier: mask form limited to m <= 64");
    std::vector<int> labels(static_cast<std::size_t>(dom.size()));
    for (int i = 0; i < dom.size(); ++i) labels[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
    return Classifier(dom, labels);
  }

  static Classifier constant(const Domain& dom, int sign) {
    require(sign == 1 || sign == -1, "Classifier: sign must be +1 or -1");
    std::vector<int> labels(static_cast<std::size_t>(dom.size()), sign);
    return Classifier(dom, labels);
  }

  /// Independent per-point draw: label i is +1 with probability probs[i].
  static Classifier sample(const Domain& dom, std::span<const double> probs, std::uint64_t seed) {
    require(static_cast<int>(probs.size()) == dom.size(), "Classifier: probs size != domain size");
    Rng rng(seed);
    std::vector<int> labels(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) labels[i] = rng.bernoulli(probs[i]) ? 1 : -1;
    return Classifier(dom, labels);
  }

  int size() const { return m_; }
  std::uint64_t domain_id() const { return domain_id_; }
  int label(int i) const {
    return (bits_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1 ? 1 : -1;
  }
  const std::vector<std::uint64_t>& words() const { return bits_; }

  Classifier negated() const {
    Classifier f(*this);
    for (auto& w : f.bits_) w = ~w;
    f.trim();
    return f;
  }

  void flip(int i) { bits_[static_cast<std::size_t>(i) >> 6] ^= (1ULL << (i & 63)); }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(m_), '-');
    for (int i = 0; i < m_; ++i)
      if (label(i) == 1) s[static_cast<std::size_t>(i)] = '+';
    return s;
  }

  std::uint64_t mask() const {
    require(m_ <= 64, "Classifier: mask form limited to m <= 64");
    return bits_.empty() ? 0 : bits_[0];
  }

  friend bool operator==(const Classifier& a, const Classifier& b) {
    return a.m_ == b.m_ && a.bits_ == b.bits_;
  }

 private:
  static std::size_t word_count(int m) { return (static_cast<std::size_t>(m) + 63) / 64; }
  void set_bit(int i) { bits_[static_cast<std::size_t>(i) >> 6] |= (1ULL << (i & 63)); }
  void trim() {
    const int rem = m_ & 63;
    if (rem != 0) bits_.back() &= (1ULL << rem) - 1;
  }

  int m_;
  std::uint64_t domain_id_;
  std::vector<std::uint64_t> bits_;
};

/// Product law on the Hamming cube: probs[i] = P_i(f(x_i) = +1), coordinates
/// independent. Endpoint probabilities 0 and 1 are allowed.
class ProductDistribution {
 public:
  explicit ProductDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    require(!probs_.empty(), "ProductDistribution: empty");
    for (double p : probs_) require(p >= 0.0 && p <= 1.0, "ProductDistribution: p outside [0,1]");
  }

  static ProductDistribution uniform(int m) {
    require(m >= 1, "ProductDistribution: m must be positive");
    return ProductDistribution(std::vector<double>(static_cast<std::size_t>(m), 0.5));
  }

  /// Mass concentrated near h: each coordinate disagrees with h independently
  /// with probability epsilon.
  static ProductDistribution concentrated_near(const Classifier& h, double epsilon) {
    require(epsilon >= 0.0 && epsilon <= 1.0, "ProductDistribution: epsilon outside [0,1]");
    std::vector<double> p(static_cast<std::size_t>(h.size()));
    for (int i = 0; i < h.size(); ++i)
      p[static_cast<std::size_t>(i)] = h.label(i) == 1 ? 1.0 - epsilon : epsilon;
    return ProductDistribution(std::move(p));
  }

  int size() const { return static_cast<int>(probs_.size()); }
  double prob_plus(int i) const { return probs_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Loss table on {-1,1} x {-1,1} with values in [0, b]. value(y, yhat) is the
/// penalty for predicting yhat when the observed label is y.
class LossFunction {
 public:
  LossFunction(double l_mm, double l_mp, double l_pm, double l_pp)
      : table_{l_mm, l_mp, l_pm, l_pp} {
    double b = 0.0;
    for (double v : table_) {
      require(v >= 0.0 && std::isfinite(v), "LossFunction: values must be finite and >= 0");
      b = std::max(b, v);
    }
    require(b > 0.0, "LossFunction: bound must be positive");
    bound_ = b;
  }

  static LossFunction zero_one() { return LossFunction(0.0, 1.0, 1.0, 0.0); }

  double value(int y, int yhat) const {
    return table_[static_cast<std::size_t>((y == 1 ? 2 : 0) + (yhat == 1 ? 1 : 0))];
  }
  double bound() const { return bound_; }

 private:
  double table_[4];
  double bound_ = 0.0;
};

/// Marginal P_X over the domain points plus the conditional label law
/// P_0(y = +1 | x). label_prob is either one shared value (the i.i.d. case)
/// or one value per point.
class SamplingDistribution {
 public:
  SamplingDistribution(std::vector<double> x_weights, std::vector<double> label_prob)
      : weights_(std::move(x_weights)), p_plus_(std::move(label_prob)) {
    require(!weights_.empty(), "SamplingDistribution: empty weights");
    double sum = 0.0;
    for (double w : weights_) {
      require(w >= 0.0, "SamplingDistribution: negative weight");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-12, "SamplingDistribution: weights must sum to 1");
    require(p_plus_.size() == 1 || p_plus_.size() == weights_.size(),
            "SamplingDistribution: label_prob must be scalar or per-point");
    for (double p : p_plus_) require(p >= 0.0 && p <= 1.0, "SamplingDistribution: p0 outside [0,1]");
    cumulative_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      acc += weights_[i];
      cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
  }

  static SamplingDistribution uniform_x(int m, double p0) {
    require(m >= 1, "SamplingDistribution: m must be positive");
    return SamplingDistribution(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m), {p0});
  }

  int size() const { return static_cast<int>(weights_.size()); }
  double x_weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  double label_prob_plus(int i) const {
    return p_plus_.size() == 1 ? p_plus_[0] : p_plus_[static_cast<std::size_t>(i)];
  }

  int sample_index(Rng& rng) const {
    const double u = rng.next_double();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1));
  }

 private:
  std::vector<double> weights_;
  std::vector<double> p_plus_;
  std::vector<double> cumulative_;
};

/// n (point-index, label) pairs drawn with replacement.
struct SampleSet {
  std::vector<std::pair<int, int>> pairs;  // (index into domain, label in {-1,+1})

  int size() const { return static_cast<int>(pairs.size()); }
};

}  // namespace vclab
