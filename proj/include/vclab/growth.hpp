#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vclab/exact.hpp"

namespace vclab {

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

/// Number of homogeneous-halfspace dichotomies of m points in general
/// position in R^d: C(m, d) = 2 * sum_{i<d} binom(m-1, i). Affine halfspaces
/// in R^d correspond to cover_count(m, d+1).
inline BigInt cover_count(int m, int d) {
  require(m >= 1 && d >= 1, "cover_count: m, d must be positive");
  BigInt sum = 0;
  for (int i = 0; i < d; ++i) sum += binomial(m - 1, i);
  return 2 * sum;
}

/// m^{d_V + 1}; only stated for m > d_V.
inline BigInt vc_polynomial_bound(int m, int dv) {
  require(dv >= 0, "vc_polynomial_bound: d_V must be nonnegative");
  require(m > dv, "vc_polynomial_bound: requires m > d_V");
  BigInt r = 1;
  for (int i = 0; i <= dv; ++i) r *= m;
  return r;
}

struct SauerShelahBound {
  BigInt sum;           // sum_{i<=d_V} binom(m, i), exact
  double envelope;      // (e m / d_V)^{d_V}; +inf when not representable
  double log_envelope;  // d_V (1 + ln(m / d_V))
};

inline double sauer_shelah_log_envelope(double m, double dv) {
  return dv * (1.0 + std::log(m / dv));
}

inline SauerShelahBound sauer_shelah_bound(int m, int dv) {
  require(dv >= 1, "sauer_shelah_bound: requires d_V >= 1");
  require(m > dv, "sauer_shelah_bound: requires m > d_V");
  SauerShelahBound b;
  b.sum = 0;
  for (int i = 0; i <= dv; ++i) b.sum += binomial(m, i);
  b.log_envelope = sauer_shelah_log_envelope(m, dv);
  b.envelope = std::exp(b.log_envelope);
  return b;
}

struct BartlettBound {
  double log_value;  // L W ln(4 e L m)
  double value;      // exp of the above; +inf when it overflows
};

/// Growth ceiling for depth-L ReLU networks with W parameters.
inline BartlettBound bartlett_bound(long long m, long long L, long long W) {
  require(m >= 1 && L >= 1 && W >= 1, "bartlett_bound: m, L, W must be positive");
  const double log_value = static_cast<double>(L) * static_cast<double>(W) *
                           std::log(4.0 * std::exp(1.0) * static_cast<double>(L) *
                                    static_cast<double>(m));
  return {log_value, std::exp(log_value)};
}

/// Size of a hypothesis class restricted to one m-point configuration,
/// together with every analytic ceiling that applies to it. `count` is exact;
/// `lower_bound` is a certified lower bound from sampling. Either way the
/// value on a single configuration only bounds the configuration-max growth
/// function from below.
struct GrowthRecord {
  int m = 0;
  std::optional<BigInt> count;
  std::optional<BigInt> lower_bound;
  std::string method;  // "exact-enumeration" | "cover-formula" | "parameter-sampling"

  struct Bounds {
    std::optional<BigInt> vc_poly;
    std::optional<BigInt> sauer_sum;
    std::optional<double> sauer_env;
    std::optional<double> bartlett_log;
  } bounds;

  std::vector<std::string> warnings;

  BigInt value() const { return count ? *count : *lower_bound; }

  void check() const {
    require(count.has_value() != lower_bound.has_value(),
            "GrowthRecord: exactly one of count/lower_bound must be set");
    BigInt v = value();
    require(v >= 0, "GrowthRecord: negative cardinality");
    if (m <= 62) require(v <= (BigInt(1) << m), "GrowthRecord: cardinality exceeds 2^m");
    if (count) {
      if (bounds.vc_poly) require(*count <= *bounds.vc_poly, "GrowthRecord: count above VC bound");
      if (bounds.sauer_sum)
        require(*count <= *bounds.sauer_sum, "GrowthRecord: count above Sauer-Shelah sum");
    }
  }
};

}  // namespace vclab
