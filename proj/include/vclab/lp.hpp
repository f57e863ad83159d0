#pragma once

#include <span>
#include <vector>

#include "vclab/exact.hpp"

namespace vclab {

/// Outcome of the strict-separation feasibility problem
///   find (v, b) with y_i (v·x_i + b) >= 1 for all i.
/// Everything is exact: inputs are converted from double to rationals without
/// rounding, so feasibility never depends on a tolerance. When infeasible,
/// `farkas` holds nonnegative multipliers with sum > 0 that annihilate the
/// constraint matrix - a checkable refutation.
struct SeparationResult {
  bool feasible = false;
  std::vector<BigRat> weight;  // v, size d
  BigRat bias = 0;             // b
  std::vector<BigRat> farkas;  // size m when infeasible, else empty
};

/// Exact margin re-check of a separation witness.
inline bool verify_separation_witness(const std::vector<std::vector<double>>& pts,
                                      std::span<const int> labels,
                                      std::span<const BigRat> weight, const BigRat& bias) {
  const std::size_t d = pts.front().size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    BigRat acc = bias;
    for (std::size_t j = 0; j < d; ++j) acc += weight[j] * BigRat(pts[i][j]);
    acc *= labels[i];
    if (acc < 1) return false;
  }
  return true;
}

namespace detail {

// Phase-1 simplex over exact rationals with Bland's rule. Constraints
//   M u - M t - s + a = 1,   u, t, s, a >= 0,  minimize sum(a).
// Feasible iff the optimum is 0. The simplex multipliers of an infeasible
// optimum are exactly a Farkas certificate for {M w >= 1}.
class PhaseOneSimplex {
 public:
  explicit PhaseOneSimplex(const std::vector<std::vector<BigRat>>& M)
      : rows_(M.size()), vars_(M.front().size()) {
    cols_ = 2 * vars_ + 2 * rows_;
    art0_ = 2 * vars_ + rows_;
    tab_.assign(rows_, std::vector<BigRat>(cols_ + 1, 0));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < vars_; ++j) {
        tab_[i][j] = M[i][j];
        tab_[i][vars_ + j] = -M[i][j];
      }
      tab_[i][2 * vars_ + i] = -1;  // slack
      tab_[i][art0_ + i] = 1;       // artificial
      tab_[i][cols_] = 1;           // rhs
    }
    basis_.resize(rows_);
    obj_.assign(cols_ + 1, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      basis_[i] = art0_ + i;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] += tab_[i][j];
    }
    for (std::size_t i = 0; i < rows_; ++i) obj_[art0_ + i] -= 1;  // z_j - c_j
  }

  void solve() {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (obj_[j] > 0) {  // Bland: lowest improving index
          enter = j;
          break;
        }
      }
      if (enter == cols_) return;
      std::size_t leave = rows_;
      BigRat best_ratio = 0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (tab_[i][enter] > 0) {
          BigRat ratio = tab_[i][cols_] / tab_[i][enter];
          if (leave == rows_ || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      require(leave != rows_, "simplex: phase-1 objective unbounded");
      pivot(leave, enter);
    }
  }

  bool feasible() const { return obj_[cols_] == 0; }

  // Values of the original free variables w = u - t at an optimal basis.
  std::vector<BigRat> witness() const {
    std::vector<BigRat> x(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) x[basis_[i]] = tab_[i][cols_];
    std::vector<BigRat> w(vars_);
    for (std::size_t j = 0; j < vars_; ++j) w[j] = x[j] - x[vars_ + j];
    return w;
  }

  // pi_i = (z - c) over the artificial columns + 1; at an infeasible optimum
  // this is nonnegative, annihilates M, and has positive total mass.
  std::vector<BigRat> farkas_certificate(const std::vector<std::vector<BigRat>>& M) const {
    std::vector<BigRat> pi(rows_);
    BigRat total = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      pi[i] = obj_[art0_ + i] + 1;
      require(pi[i] >= 0, "simplex: invalid certificate sign");
      total += pi[i];
    }
    require(total > 0, "simplex: certificate has zero mass");
    for (std::size_t j = 0; j < vars_; ++j) {
      BigRat acc = 0;
      for (std::size_t i = 0; i < rows_; ++i) acc += pi[i] * M[i][j];
      require(acc == 0, "simplex: certificate does not annihilate constraints");
    }
    return pi;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    const BigRat p = tab_[r][c];
    for (auto& v : tab_[r]) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || tab_[i][c] == 0) continue;
      const BigRat f = tab_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[r][j];
    }
    if (obj_[c] != 0) {
      const BigRat f = obj_[c];
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  std::size_t rows_, vars_, cols_, art0_;
  std::vector<std::vector<BigRat>> tab_;
  std::vector<BigRat> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Decides whether the labeling is realizable by an affine halfspace with
/// unit margin, i.e. strictly separable. Exact; no tolerance anywhere.
inline SeparationResult separate_affine(const std::vector<std::vector<double>>& pts,
                                        std::span<const int> labels) {
  require(!pts.empty(), "separate_affine: no points");
  require(pts.size() == labels.size(), "separate_affine: labels/points size mismatch");
  const std::size_t m = pts.size();
  const std::size_t d = pts.front().size();

  std::vector<std::vector<BigRat>> M(m, std::vector<BigRat>(d + 1));
  for (std::size_t i = 0; i < m; ++i) {
    require(labels[i] == 1 || labels[i] == -1, "separate_affine: labels must be +/-1");
    for (std::size_t j = 0; j < d; ++j) M[i][j] = BigRat(pts[i][j]) * labels[i];
    M[i][d] = labels[i];
  }

  detail::PhaseOneSimplex simplex(M);
  simplex.solve();

  SeparationResult res;
  if (simplex.feasible()) {
    auto w = simplex.witness();
    res.feasible = true;
    res.weight.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
    res.bias = w[d];
    require(verify_separation_witness(pts, labels, res.weight, res.bias),
            "separate_affine: witness failed exact re-verification");
  } else {
    res.feasible = false;
    res.farkas = simplex.farkas_certificate(M);
  }
  return res;
}

}  // namespace vclab
