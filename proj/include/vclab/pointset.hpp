#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vclab/domain.hpp"
#include "vclab/rng.hpp"

namespace vclab {

namespace detail {

// Rank of a k x d matrix by Gaussian elimination with partial pivoting.
inline int matrix_rank(std::vector<std::vector<double>> a, double tol) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a.front().size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    for (std::size_t r = row + 1; r < rows; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= tol) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row) continue;
      const double f = a[r][col] / a[row][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    ++rank;
    ++row;
  }
  return rank;
}

inline bool affinely_independent(const std::vector<std::vector<double>>& pts,
                                 const std::vector<int>& subset, double tol) {
  const std::size_t k = subset.size();
  if (k <= 1) return true;
  std::vector<std::vector<double>> diff(k - 1);
  const auto& base = pts[static_cast<std::size_t>(subset[0])];
  for (std::size_t i = 1; i < k; ++i) {
    const auto& p = pts[static_cast<std::size_t>(subset[i])];
    diff[i - 1].resize(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) diff[i - 1][j] = p[j] - base[j];
  }
  return matrix_rank(std::move(diff), tol) == static_cast<int>(k - 1);
}

template <class Fn>
inline bool for_each_subset(int m, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    if (!fn(idx)) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// A Domain plus a general-position certificate: no d+1 points lie on a
/// common hyperplane (every subset of at most d+1 points is affinely
/// independent). Certification enumerates subsets, so it is only run for
/// m <= 20; larger sets carry the flag unchecked.
struct PointSet {
  Domain domain;
  bool general_position = false;
  bool certified = false;

  int size() const { return domain.size(); }
  int dim() const { return domain.dim(); }
};

inline bool check_general_position(const Domain& dom, double tol = 1e-9) {
  const int s = std::min(dom.size(), dom.dim() + 1);
  return detail::for_each_subset(dom.size(), s, [&](const std::vector<int>& subset) {
    return detail::affinely_independent(dom.points(), subset, tol);
  });
}

inline PointSet make_point_set(Domain dom, bool certify = true) {
  PointSet ps{std::move(dom)};
  if (certify && ps.domain.size() <= 20) {
    ps.general_position = check_general_position(ps.domain);
    ps.certified = true;
  }
  return ps;
}

/// Standard-normal point cloud, re-drawn until the general-position check
/// passes (at most max_retries times).
inline PointSet random_point_set(int m, int d, std::uint64_t seed, int max_retries = 100) {
  require(m >= 1 && d >= 1, "random_point_set: m, d must be positive");
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(m),
                                         std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& p : pts)
      for (auto& c : p) c = rng.next_normal();
    Domain dom(std::move(pts));
    if (m > 20 || check_general_position(dom)) {
      PointSet ps{std::move(dom)};
      ps.general_position = true;
      ps.certified = m <= 20;
      return ps;
    }
  }
  throw std::runtime_error("random_point_set: no general-position draw within retry budget");
}

/// One point per row, d comma-separated columns.
inline Domain domain_from_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "domain_from_csv: cannot open file");
  std::vector<std::vector<double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      row.push_back(std::stod(cell, &used));
    }
    pts.push_back(std::move(row));
  }
  return Domain(std::move(pts));
}

}  // namespace vclab
