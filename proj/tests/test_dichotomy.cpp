#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "vclab/dichotomy.hpp"
#include "vclab/growth.hpp"
#include "vclab/lp.hpp"
#include "vclab/pointset.hpp"

using namespace vclab;

namespace {

PointSet square_points() {
  // 4 points in convex position
  return make_point_set(Domain({{0.0, 0.0}, {1.0, 0.1}, {1.1, 1.0}, {-0.1, 0.9}}));
}

}  // namespace

TEST_CASE("strict separation feasibility, witness, and Farkas certificate") {
  const std::vector<std::vector<double>> pts{{0.0, 0.0}, {1.0, 0.1}, {1.1, 1.0}, {-0.1, 0.9}};
  SECTION("separable labeling carries an exact unit-margin witness") {
    const std::vector<int> labels{1, 1, -1, -1};
    const auto res = separate_affine(pts, labels);
    REQUIRE(res.feasible);
    REQUIRE(verify_separation_witness(pts, labels, res.weight, res.bias));
  }
  SECTION("diagonal labeling of a convex quadrilateral is infeasible") {
    const std::vector<int> labels{1, -1, 1, -1};
    const auto res = separate_affine(pts, labels);
    REQUIRE_FALSE(res.feasible);
    REQUIRE(res.farkas.size() == 4);
    // the certificate is nonnegative, annihilates the constraints, and has mass
    BigRat mass = 0;
    std::vector<BigRat> combo(3, 0);
    for (std::size_t i = 0; i < 4; ++i) {
      REQUIRE(res.farkas[i] >= 0);
      mass += res.farkas[i];
      for (std::size_t j = 0; j < 2; ++j)
        combo[j] += res.farkas[i] * BigRat(pts[i][j]) * labels[i];
      combo[2] += res.farkas[i] * labels[i];
    }
    REQUIRE(mass > 0);
    for (const auto& c : combo) REQUIRE(c == 0);
  }
  SECTION("single point always separable both ways") {
    const std::vector<std::vector<double>> one{{0.3, -0.7}};
    REQUIRE(separate_affine(one, std::vector<int>{1}).feasible);
    REQUIRE(separate_affine(one, std::vector<int>{-1}).feasible);
  }
}

TEST_CASE("halfspace dichotomy enumeration on small configurations") {
  SECTION("3 points in general position in the plane: all 8 labelings") {
    const auto ps = make_point_set(Domain({{0.0, 0.0}, {1.0, 0.0}, {0.3, 1.0}}));
    REQUIRE(ps.general_position);
    const auto en = enumerate_halfspace_dichotomies(ps);
    REQUIRE(en.dichotomies.size() == 8);
  }
  SECTION("4 convex-position points: 14 of 16") {
    const auto ps = square_points();
    const auto en = enumerate_halfspace_dichotomies(ps);
    REQUIRE(en.dichotomies.size() == 14);
    // the two diagonal (XOR) labelings are the missing ones
    for (const auto& dic : en.dichotomies) {
      REQUIRE(dic.mask != 0b0101);
      REQUIRE(dic.mask != 0b1010);
    }
  }
  SECTION("m = 1") {
    const auto ps = make_point_set(Domain(std::vector<std::vector<double>>{{2.0}}));
    REQUIRE(enumerate_halfspace_dichotomies(ps).dichotomies.size() == 2);
  }
  SECTION("each labeling listed once, in canonical order, with verified witness") {
    const auto ps = square_points();
    const auto en = enumerate_halfspace_dichotomies(ps);
    for (std::size_t k = 0; k < en.dichotomies.size(); ++k) {
      if (k > 0) REQUIRE(en.dichotomies[k - 1].mask < en.dichotomies[k].mask);
      const auto& dic = en.dichotomies[k];
      REQUIRE(verify_separation_witness(ps.domain.points(), dic.labels(ps.size()), dic.weight,
                                        dic.bias));
    }
  }
  SECTION("cap is enforced") {
    EnumerationOptions opt;
    opt.cap = 3;
    REQUIRE_THROWS_AS(enumerate_halfspace_dichotomies(square_points(), opt),
                      std::invalid_argument);
  }
}

TEST_CASE("cover count closed form") {
  SECTION("m <= d collapses to 2^m") {
    REQUIRE(cover_count(1, 1) == 2);
    REQUIRE(cover_count(3, 3) == 8);
    REQUIRE(cover_count(5, 9) == 32);
  }
  REQUIRE(cover_count(3, 2) == 6);
  REQUIRE(cover_count(4, 3) == 14);
  SECTION("recurrence against the closed form on [2,30]^2") {
    for (int m = 2; m <= 30; ++m)
      for (int d = 2; d <= 30; ++d)
        REQUIRE(cover_count(m, d) == cover_count(m - 1, d) + cover_count(m - 1, d - 1));
    for (int d = 1; d <= 30; ++d) REQUIRE(cover_count(1, d) == 2);
  }
}

TEST_CASE("enumeration count equals the Cover formula on general position sets") {
  int checked = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int m : {2, 4, 6, 8}) {
      const PointSet ps =
          random_point_set(m, d, 1000 + static_cast<std::uint64_t>(100 * d + m));
      REQUIRE(ps.general_position);
      const auto en = enumerate_halfspace_dichotomies(ps);
      REQUIRE(BigInt(en.dichotomies.size()) == cover_count(m, d + 1));
      ++checked;
    }
  }
  REQUIRE(checked == 12);
}

TEST_CASE("pivot enumeration agrees with the full sweep on general position sets") {
  for (int d = 2; d <= 3; ++d) {
    const PointSet ps = random_point_set(9, d, 77 + static_cast<std::uint64_t>(d));
    EnumerationOptions full;
    full.method = EnumerationOptions::Method::full_sweep;
    EnumerationOptions pivot;
    pivot.method = EnumerationOptions::Method::pivot;
    const auto a = enumerate_halfspace_dichotomies(ps, full);
    const auto b = enumerate_halfspace_dichotomies(ps, pivot);
    REQUIRE(a.dichotomies.size() == b.dichotomies.size());
    for (std::size_t k = 0; k < a.dichotomies.size(); ++k)
      REQUIRE(a.dichotomies[k].mask == b.dichotomies[k].mask);
  }
}

TEST_CASE("degenerate point sets are flagged and enumerated conservatively") {
  // three collinear points in the plane
  const auto ps = make_point_set(Domain({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}));
  REQUIRE(ps.certified);
  REQUIRE_FALSE(ps.general_position);
  const auto en = enumerate_halfspace_dichotomies(ps);
  REQUIRE_FALSE(en.warnings.empty());
  // the middle point cannot disagree with both ends
  REQUIRE(en.dichotomies.size() == 6);
  REQUIRE(BigInt(en.dichotomies.size()) < cover_count(3, 3));
}

TEST_CASE("line separability matches the sign-change characterization") {
  // independent oracle in d = 1: a labeling is strictly separable iff the
  // labels, read in sorted-x order, change sign at most once
  for (std::uint64_t s = 0; s < 6; ++s) {
    const int m = 3 + static_cast<int>(s % 5);
    Rng rng(mix_seed(808, s));
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < m; ++i) pts.push_back({rng.next_normal()});
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pts[static_cast<std::size_t>(a)] < pts[static_cast<std::size_t>(b)]; });
    for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
      std::vector<int> labels(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) labels[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
      int changes = 0;
      for (int k = 1; k < m; ++k)
        changes += labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] !=
                   labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k - 1)])];
      REQUIRE(separate_affine(pts, labels).feasible == (changes <= 1));
    }
  }
}

TEST_CASE("integer grid with many collinear triples enumerates cleanly") {
  std::vector<std::vector<double>> grid;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) grid.push_back({static_cast<double>(x), static_cast<double>(y)});
  const auto ps = make_point_set(Domain(grid));
  REQUIRE_FALSE(ps.general_position);
  const auto en = enumerate_halfspace_dichotomies(ps);
  REQUIRE(en.dichotomies.size() % 2 == 0);  // closed under negation
  REQUIRE(en.dichotomies.size() > 2);
  REQUIRE(BigInt(en.dichotomies.size()) < cover_count(9, 3));  // degeneracy loses dichotomies
  for (const auto& dic : en.dichotomies)
    REQUIRE(verify_separation_witness(ps.domain.points(), dic.labels(9), dic.weight, dic.bias));
}

TEST_CASE("general position certification") {
  REQUIRE(check_general_position(Domain({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}})));
  REQUIRE_FALSE(check_general_position(Domain({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}})));
  // four coplanar-in-the-affine-sense points in R^3: last = sum of others
  REQUIRE_FALSE(check_general_position(
      Domain({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {2.0, -1.0, 0.0}})));
  const PointSet rnd = random_point_set(12, 3, 5);
  REQUIRE(rnd.general_position);
  REQUIRE(rnd.certified);
}

TEST_CASE("enumeration is independent of the thread count") {
  const PointSet ps = random_point_set(8, 2, 31);
  EnumerationOptions one;
  one.threads = 1;
  EnumerationOptions many;
  many.threads = 4;
  const auto a = enumerate_halfspace_dichotomies(ps, one);
  const auto b = enumerate_halfspace_dichotomies(ps, many);
  REQUIRE(a.dichotomies.size() == b.dichotomies.size());
  for (std::size_t k = 0; k < a.dichotomies.size(); ++k) {
    REQUIRE(a.dichotomies[k].mask == b.dichotomies[k].mask);
    REQUIRE(a.dichotomies[k].weight == b.dichotomies[k].weight);
    REQUIRE(a.dichotomies[k].bias == b.dichotomies[k].bias);
  }
}
