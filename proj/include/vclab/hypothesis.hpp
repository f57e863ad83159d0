#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "vclab/dichotomy.hpp"
#include "vclab/domain.hpp"
#include "vclab/growth.hpp"
#include "vclab/pointset.hpp"
#include "vclab/relu.hpp"

namespace vclab {

/// An enumerable family of classifiers: a literal list, the affine halfspaces
/// of a fixed input dimension, or a thresholded ReLU network architecture.
struct ExplicitList {
  std::vector<Classifier> members;
};

struct AffineHalfspace {
  int dim = 0;
};

struct ReluNetwork {
  ReluArch arch;
};

using HypothesisClass = std::variant<ExplicitList, AffineHalfspace, ReluNetwork>;

struct GrowthOptions {
  int cap = 20;
  long long num_samples = 10000;
  std::uint64_t seed = 0;
  double sample_range = 1.0;
  int threads = 1;
  bool use_cover_formula = false;  // skip the LP sweep when GP is certified
  std::optional<int> dv;           // attach VC-based bounds when known
};

namespace detail {

inline void attach_vc_bounds(GrowthRecord& rec, int dv) {
  if (rec.m > dv) {
    rec.bounds.vc_poly = vc_polynomial_bound(rec.m, dv);
    if (dv >= 1) {
      const auto ss = sauer_shelah_bound(rec.m, dv);
      rec.bounds.sauer_sum = ss.sum;
      rec.bounds.sauer_env = ss.envelope;
    }
  }
}

}  // namespace detail

/// Cardinality of the class restricted to the given configuration, with the
/// applicable analytic bounds attached. Exact for explicit lists and
/// halfspaces, a sampled lower bound for ReLU networks. A single
/// configuration only witnesses the growth function from below.
inline GrowthRecord growth_record(const HypothesisClass& H, const PointSet& pts,
                                  const GrowthOptions& opt = {}) {
  GrowthRecord rec;
  if (const auto* list = std::get_if<ExplicitList>(&H)) {
    require(!list->members.empty(), "growth_record: empty explicit list");
    rec.m = list->members.front().size();
    std::vector<std::uint64_t> hashes;
    for (const auto& h : list->members) {
      std::uint64_t acc = 1469598103934665603ULL;
      for (std::uint64_t w : h.words()) acc = (acc ^ w) * 1099511628211ULL;
      hashes.push_back(acc);
    }
    // distinct members; hash collisions resolved by direct comparison
    long long distinct = 0;
    for (std::size_t i = 0; i < list->members.size(); ++i) {
      bool dup = false;
      for (std::size_t j = 0; j < i && !dup; ++j)
        dup = hashes[i] == hashes[j] && list->members[i] == list->members[j];
      if (!dup) ++distinct;
    }
    rec.count = BigInt(distinct);
    rec.method = "exact-enumeration";
  } else if (const auto* hs = std::get_if<AffineHalfspace>(&H)) {
    require(pts.dim() == hs->dim, "growth_record: point set dimension mismatch");
    rec.m = pts.size();
    if (opt.use_cover_formula) {
      require(pts.certified && pts.general_position,
              "growth_record: cover formula needs certified general position");
      rec.count = cover_count(rec.m, hs->dim + 1);
      rec.method = "cover-formula";
    } else {
      EnumerationOptions eopt;
      eopt.cap = opt.cap;
      eopt.threads = opt.threads;
      auto en = enumerate_halfspace_dichotomies(pts, eopt);
      rec.count = BigInt(en.dichotomies.size());
      rec.method = "exact-enumeration";
      rec.warnings = en.warnings;
    }
    detail::attach_vc_bounds(rec, opt.dv.value_or(hs->dim + 1));
    rec.check();
    return rec;
  } else {
    const auto& net = std::get<ReluNetwork>(H);
    rec = sample_relu_dichotomy_count(net.arch, pts, opt.num_samples, opt.seed, opt.sample_range,
                                      opt.threads);
  }
  if (opt.dv) detail::attach_vc_bounds(rec, *opt.dv);
  rec.check();
  return rec;
}

}  // namespace vclab
