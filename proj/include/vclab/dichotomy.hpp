#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <unordered_set>
#include <vector>

#include "vclab/domain.hpp"
#include "vclab/growth.hpp"
#include "vclab/lp.hpp"
#include "vclab/pointset.hpp"
#include "vclab/relu.hpp"

namespace vclab {

/// One realizable labeling with its exact separation witness
/// (margin-normalized: y_i (v·x_i + b) >= 1 everywhere).
struct Dichotomy {
  std::uint64_t mask = 0;  // bit i set = label +1 on point i
  std::vector<BigRat> weight;
  BigRat bias = 0;

  std::vector<int> labels(int m) const {
    std::vector<int> l(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) l[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
    return l;
  }
};

struct HalfspaceEnumeration {
  int m = 0;
  int d = 0;
  bool general_position = false;
  bool certified = false;
  std::vector<Dichotomy> dichotomies;  // sorted by mask
  std::vector<std::string> warnings;

  std::vector<Classifier> classifiers(const Domain& dom) const {
    std::vector<Classifier> out;
    out.reserve(dichotomies.size());
    for (const auto& dic : dichotomies) out.push_back(Classifier::from_mask(dom, dic.mask));
    return out;
  }
};

namespace detail {

inline std::vector<int> labels_of_mask(std::uint64_t mask, int m) {
  std::vector<int> l(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) l[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
  return l;
}

// Tests odd masks in [lo, hi) and returns the feasible ones with witnesses.
inline std::vector<Dichotomy> sweep_masks(const std::vector<std::vector<double>>& pts,
                                          std::uint64_t lo, std::uint64_t hi) {
  const int m = static_cast<int>(pts.size());
  std::vector<Dichotomy> found;
  for (std::uint64_t mask = lo | 1; mask < hi; mask += 2) {
    auto labels = labels_of_mask(mask, m);
    auto res = separate_affine(pts, labels);
    if (res.feasible) found.push_back({mask, std::move(res.weight), std::move(res.bias)});
  }
  return found;
}

// Normal of the affine hyperplane through d affinely independent points:
// nonzero (v, b) with v·x_i + b = 0 for each. Floating point; callers verify
// candidates with the exact LP afterwards.
inline bool hyperplane_through(const std::vector<std::vector<double>>& pts,
                               const std::vector<int>& subset, std::vector<double>& normal) {
  const int d = static_cast<int>(pts.front().size());
  const int k = static_cast<int>(subset.size());
  std::vector<std::vector<double>> a(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(d) + 1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j)
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          pts[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])]
             [static_cast<std::size_t>(j)];
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = 1.0;
  }
  // Gaussian elimination; the null space of the k x (d+1) system
  const int cols = d + 1;
  std::vector<int> pivot_col(static_cast<std::size_t>(k), -1);
  int row = 0;
  for (int col = 0; col < cols && row < k; ++col) {
    int piv = row;
    for (int r = row + 1; r < k; ++r)
      if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
        piv = r;
    if (std::abs(a[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]) <= 1e-12) continue;
    std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(row)]);
    for (int r = 0; r < k; ++r) {
      if (r == row) continue;
      const double f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      for (int c = col; c < cols; ++c)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * a[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
    }
    pivot_col[static_cast<std::size_t>(row)] = col;
    ++row;
  }
  if (row != k) return false;  // subset not affinely independent
  int free_col = -1;
  for (int c = 0; c < cols; ++c) {
    bool is_pivot = false;
    for (int r = 0; r < k; ++r)
      if (pivot_col[static_cast<std::size_t>(r)] == c) is_pivot = true;
    if (!is_pivot) {
      free_col = c;
      break;
    }
  }
  normal.assign(static_cast<std::size_t>(cols), 0.0);
  normal[static_cast<std::size_t>(free_col)] = 1.0;
  for (int r = k - 1; r >= 0; --r) {
    const int pc = pivot_col[static_cast<std::size_t>(r)];
    double acc = 0.0;
    for (int c = pc + 1; c < cols; ++c)
      acc += a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
             normal[static_cast<std::size_t>(c)];
    normal[static_cast<std::size_t>(pc)] =
        -acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(pc)];
  }
  return true;
}

}  // namespace detail

struct EnumerationOptions {
  int cap = 20;
  int threads = 1;
  enum class Method { automatic, full_sweep, pivot } method = Method::automatic;
};

/// All labelings of the point set realizable as sign(v·x + b) with strict
/// separation, each exactly once (sorted by mask), with exact LP witnesses.
///
/// m <= 16 sweeps all 2^m labelings through the exact LP (using the +/-
/// symmetry to halve the work). Above that, candidates come from hyperplanes
/// through d-subsets perturbed to both sides, which is complete for point
/// sets in general position; every candidate is still verified by the exact
/// LP before it is counted.
inline HalfspaceEnumeration enumerate_halfspace_dichotomies(const PointSet& ps,
                                                            const EnumerationOptions& opt = {}) {
  const int m = ps.size();
  const int d = ps.dim();
  require(m <= opt.cap, "enumerate_halfspace_dichotomies: m exceeds cap");
  require(m <= 62, "enumerate_halfspace_dichotomies: m too large for mask representation");
  const auto& pts = ps.domain.points();

  HalfspaceEnumeration out;
  out.m = m;
  out.d = d;
  out.general_position = ps.general_position;
  out.certified = ps.certified;
  if (ps.certified && !ps.general_position)
    out.warnings.push_back("point set is not in general position; Cover-formula cross-checks do not apply");

  const bool use_full_sweep = opt.method == EnumerationOptions::Method::full_sweep ||
                              (opt.method == EnumerationOptions::Method::automatic && m <= 16);
  std::vector<Dichotomy> positives;  // representatives with label(x_0) = +1
  if (use_full_sweep) {
    const std::uint64_t total = 1ULL << m;
    const int threads = std::max(1, opt.threads);
    if (threads == 1 || total < 64) {
      positives = detail::sweep_masks(pts, 0, total);
    } else {
      std::vector<std::vector<Dichotomy>> chunks(static_cast<std::size_t>(threads));
      std::vector<std::thread> pool;
      const std::uint64_t step = (total + static_cast<std::uint64_t>(threads) - 1) /
                                 static_cast<std::uint64_t>(threads);
      for (int tix = 0; tix < threads; ++tix) {
        const std::uint64_t lo = step * static_cast<std::uint64_t>(tix);
        const std::uint64_t hi = std::min(total, lo + step);
        pool.emplace_back([&, lo, hi, tix] {
          chunks[static_cast<std::size_t>(tix)] = detail::sweep_masks(pts, lo, hi);
        });
      }
      for (auto& th : pool) th.join();
      for (auto& c : chunks)
        for (auto& dic : c) positives.push_back(std::move(dic));
    }
  } else {
    require(d < m, "enumerate_halfspace_dichotomies: pivot path needs d < m");
    if (!ps.general_position)
      out.warnings.push_back(
          "pivot enumeration above m=16 is only complete for general-position sets; "
          "counts are verified lower bounds");
    // candidate masks from hyperplanes through d-subsets, both sides for the
    // touched points, both orientations
    std::unordered_set<std::uint64_t> candidates;
    detail::for_each_subset(m, d, [&](const std::vector<int>& subset) {
      std::vector<double> normal;
      if (!detail::hyperplane_through(pts, subset, normal)) return true;
      std::uint64_t base = 0;
      bool degenerate = false;
      for (int i = 0; i < m; ++i) {
        if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
        double val = normal[static_cast<std::size_t>(d)];
        for (int j = 0; j < d; ++j)
          val += normal[static_cast<std::size_t>(j)] *
                 pts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (std::abs(val) <= 1e-12) {
          degenerate = true;
          break;
        }
        if (val > 0.0) base |= 1ULL << i;
      }
      if (degenerate) return true;
      const std::uint64_t full = (1ULL << m) - 1;
      for (std::uint64_t sides = 0; sides < (1ULL << d); ++sides) {
        std::uint64_t mask = base;
        for (int i = 0; i < d; ++i)
          if ((sides >> i) & 1) mask |= 1ULL << subset[static_cast<std::size_t>(i)];
        candidates.insert(mask & 1 ? mask : (~mask) & full);
      }
      return true;
    });
    std::vector<std::uint64_t> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end());
    for (std::uint64_t mask : ordered) {
      auto labels = detail::labels_of_mask(mask, m);
      auto res = separate_affine(pts, labels);
      if (res.feasible) positives.push_back({mask, std::move(res.weight), std::move(res.bias)});
    }
  }

  // complete with the complements and order canonically
  const std::uint64_t full = (1ULL << m) - 1;
  out.dichotomies.reserve(positives.size() * 2);
  for (auto& dic : positives) {
    Dichotomy neg;
    neg.mask = (~dic.mask) & full;
    neg.weight.reserve(dic.weight.size());
    for (const auto& w : dic.weight) neg.weight.push_back(-w);
    neg.bias = -dic.bias;
    out.dichotomies.push_back(std::move(dic));
    out.dichotomies.push_back(std::move(neg));
  }
  std::sort(out.dichotomies.begin(), out.dichotomies.end(),
            [](const Dichotomy& a, const Dichotomy& b) { return a.mask < b.mask; });
  return out;
}

/// Samples `num_samples` ReLU parameter settings (entries uniform on
/// [-range, range], one derived seed per sample) and counts the distinct
/// labelings they induce on the point set: a certified lower bound on
/// card H(X). Monotone in num_samples for a fixed seed.
inline GrowthRecord sample_relu_dichotomy_count(const ReluArch& arch, const PointSet& ps,
                                                long long num_samples, std::uint64_t seed,
                                                double range = 1.0, int threads = 1) {
  arch.check();
  require(num_samples >= 1, "sample_relu_dichotomy_count: num_samples must be positive");
  require(ps.dim() == arch.input_dim, "sample_relu_dichotomy_count: dimension mismatch");
  require(ps.size() <= 62, "sample_relu_dichotomy_count: m too large for mask representation");
  const int m = ps.size();
  const auto& pts = ps.domain.points();

  const int nthreads = std::max(1, threads);
  std::vector<std::unordered_set<std::uint64_t>> seen(static_cast<std::size_t>(nthreads));
  auto worker = [&](int tix, long long lo, long long hi) {
    auto& local = seen[static_cast<std::size_t>(tix)];
    for (long long s = lo; s < hi; ++s) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
      const ReluParams params = sample_relu_params(arch, rng, range);
      std::uint64_t mask = 0;
      for (int i = 0; i < m; ++i)
        if (relu_forward(params, pts[static_cast<std::size_t>(i)]) == 1) mask |= 1ULL << i;
      local.insert(mask);
    }
  };
  if (nthreads == 1) {
    worker(0, 0, num_samples);
  } else {
    std::vector<std::thread> pool;
    const long long step = (num_samples + nthreads - 1) / nthreads;
    for (int tix = 0; tix < nthreads; ++tix) {
      const long long lo = step * tix;
      const long long hi = std::min(num_samples, lo + step);
      if (lo >= hi) break;
      pool.emplace_back(worker, tix, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  std::unordered_set<std::uint64_t> all;
  for (auto& local : seen) all.insert(local.begin(), local.end());

  GrowthRecord rec;
  rec.m = m;
  rec.lower_bound = BigInt(all.size());
  rec.method = "parameter-sampling";
  rec.bounds.bartlett_log = bartlett_bound(m, arch.depth(), arch.param_count()).log_value;
  rec.check();
  return rec;
}

}  // namespace vclab
