#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <unordered_set>
#include <vector>

#include "vclab/dichotomy.hpp"
#include "vclab/domain.hpp"
#include "vclab/lp.hpp"
#include "vclab/pointset.hpp"
#include "vclab/relu.hpp"

namespace vclab {

/// Realizability test for a labeling of a pool subset. subset holds indices
/// into the pool; bit i of label_mask is the label of subset[i].
struct RealizabilityOracle {
  std::function<bool(std::span<const int> subset, std::uint32_t label_mask)> realizable;
  bool sign_symmetric = false;  // realizable(mask) <=> realizable(~mask)
};

/// Affine halfspaces over an explicit point pool; exact LP per labeling.
inline RealizabilityOracle halfspace_oracle(std::vector<std::vector<double>> pool) {
  auto pts = std::make_shared<std::vector<std::vector<double>>>(std::move(pool));
  RealizabilityOracle o;
  o.sign_symmetric = true;
  o.realizable = [pts](std::span<const int> subset, std::uint32_t mask) {
    std::vector<std::vector<double>> sub;
    std::vector<int> labels;
    sub.reserve(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) {
      sub.push_back((*pts)[static_cast<std::size_t>(subset[i])]);
      labels.push_back((mask >> i) & 1 ? 1 : -1);
    }
    return separate_affine(sub, labels).feasible;
  };
  return o;
}

/// Membership oracle for a finite list: a labeling is realizable iff some
/// member restricts to it.
inline RealizabilityOracle explicit_list_oracle(std::vector<Classifier> members) {
  require(!members.empty(), "explicit_list_oracle: empty list");
  auto H = std::make_shared<std::vector<Classifier>>(std::move(members));
  RealizabilityOracle o;
  o.sign_symmetric = false;
  o.realizable = [H](std::span<const int> subset, std::uint32_t mask) {
    for (const auto& h : *H) {
      bool match = true;
      for (std::size_t i = 0; i < subset.size() && match; ++i) {
        const int want = (mask >> i) & 1 ? 1 : -1;
        match = h.label(subset[i]) == want;
      }
      if (match) return true;
    }
    return false;
  };
  return o;
}

/// Sampling oracle for ReLU networks on a point pool: presamples
/// `num_samples` parameter settings (plus any explicitly constructed
/// networks) and tests labelings against the induced pool labelings. Can only
/// under-approximate realizability, so VC search results are lower bounds.
inline RealizabilityOracle relu_sampling_oracle(const std::vector<std::vector<double>>& pool,
                                                const ReluArch& arch, long long num_samples,
                                                std::uint64_t seed,
                                                const std::vector<ReluParams>& constructions = {},
                                                double range = 1.0) {
  arch.check();
  require(pool.size() <= 62, "relu_sampling_oracle: pool too large");
  const int m = static_cast<int>(pool.size());
  auto masks = std::make_shared<std::vector<std::uint64_t>>();
  std::unordered_set<std::uint64_t> seen;
  auto add_params = [&](const ReluParams& params) {
    std::uint64_t mask = 0;
    for (int i = 0; i < m; ++i)
      if (relu_forward(params, pool[static_cast<std::size_t>(i)]) == 1) mask |= 1ULL << i;
    if (seen.insert(mask).second) masks->push_back(mask);
  };
  for (const auto& c : constructions) add_params(c);
  for (long long s = 0; s < num_samples; ++s) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    add_params(sample_relu_params(arch, rng, range));
  }
  RealizabilityOracle o;
  o.sign_symmetric = false;
  o.realizable = [masks](std::span<const int> subset, std::uint32_t want) {
    for (std::uint64_t full : *masks) {
      bool match = true;
      for (std::size_t i = 0; i < subset.size() && match; ++i)
        match = (((full >> subset[i]) & 1) == ((want >> i) & 1));
      if (match) return true;
    }
    return false;
  };
  return o;
}

inline bool is_shattered(const RealizabilityOracle& oracle, std::span<const int> subset) {
  const int k = static_cast<int>(subset.size());
  const std::uint32_t total = 1u << k;
  if (oracle.sign_symmetric) {
    for (std::uint32_t mask = 0; mask < total / 2; ++mask)
      if (!oracle.realizable(subset, mask)) return false;
    return true;
  }
  for (std::uint32_t mask = 0; mask < total; ++mask)
    if (!oracle.realizable(subset, mask)) return false;
  return true;
}

/// Largest k <= k_max such that some k-subset of the pool is shattered.
/// Shattering is downward closed, so the search walks k upward and stops at
/// the first size with no shattered subset. With an exact oracle this is the
/// VC dimension restricted to the pool; with a sampling oracle it is a lower
/// bound.
inline int vc_dimension_search(const RealizabilityOracle& oracle, int pool_size, int k_max) {
  require(k_max >= 0 && k_max <= 25, "vc_dimension_search: k_max must be in [0, 25]");
  require(pool_size >= 1, "vc_dimension_search: empty pool");
  const int limit = std::min(k_max, pool_size);
  int best = 0;
  for (int k = 1; k <= limit; ++k) {
    bool found = !detail::for_each_subset(pool_size, k, [&](const std::vector<int>& subset) {
      return !is_shattered(oracle, subset);  // stop (return false) when shattered
    });
    if (!found) return best;
    best = k;
  }
  return best;
}

}  // namespace vclab
