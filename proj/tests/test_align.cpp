#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "topicnet/align.hpp"
#include "topicnet/error.hpp"
#include "topicnet/oblimin.hpp"
#include "topicnet/procrustes.hpp"

using namespace topicnet;
using doctest::Approx;

namespace {

Eigen::MatrixXd rows3x2(double a, double b, double c, double d, double e, double f) {
  Eigen::MatrixXd m(3, 2);
  m << a, b, c, d, e, f;
  return m;
}

}  // namespace

TEST_SUITE("align") {
  TEST_CASE("procrustes recovers rotations and reflections") {
    Rng rng(1);
    const Eigen::MatrixXd s = testing::gaussian_matrix(20, 2, rng);
    const Eigen::Matrix2d r135 = testing::rotation2(3 * std::numbers::pi / 4);
    CHECK((orthogonal_procrustes(s, s) - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    CHECK((procrustes_align(Eigen::MatrixXd(s * r135), s) - s).norm() < 1e-10);
    Eigen::Matrix2d flip;
    flip << -1, 0, 0, 1;
    const Eigen::MatrixXd q = orthogonal_procrustes(s, Eigen::MatrixXd(s * flip));
    CHECK(q.determinant() == Approx(-1.0));
    CHECK((q - flip).norm() < 1e-10);
  }

  TEST_CASE("procrustes works on fixed-size types and higher dimensions") {
    Rng rng(2);
    const Eigen::Matrix<double, 8, 3> s = testing::gaussian_matrix(8, 3, rng);
    const Eigen::Matrix3d q = testing::random_orthogonal(3, rng);
    const Eigen::Matrix3d est = orthogonal_procrustes(s, s * q);
    CHECK((est - q).norm() < 1e-10);
    CHECK((est.transpose() * est - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  }

  TEST_CASE("zero cross product falls back to the identity") {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 2);
    Rng rng(3);
    CHECK(orthogonal_procrustes(testing::gaussian_matrix(4, 2, rng), zero) == Eigen::MatrixXd::Identity(2, 2));
  }

  TEST_CASE("procrustes preserves pairwise distances") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXd a = testing::gaussian_matrix(20, 2, rng), b = testing::gaussian_matrix(20, 2, rng);
      const Eigen::MatrixXd moved = procrustes_align(a, b);
      CHECK((pairwise_distances(moved, moved) - pairwise_distances(a, a)).cwiseAbs().maxCoeff() < 1e-10);
      // No other orthogonal map lands closer.
      const Eigen::MatrixXd other = a * testing::random_orthogonal(2, rng);
      CHECK((moved - b).norm() <= (other - b).norm() + 1e-12);
    }
  }

  TEST_CASE("mean origin distance") {
    CHECK(mean_origin_distance(Eigen::MatrixXd(rows3x2(3, 4, 0, 0, 0, 0).topRows(2))) == 2.5);
    CHECK(mean_origin_distance(Eigen::MatrixXd::Zero(3, 2)) == 0.0);
    Rng rng(5);
    const Eigen::MatrixXd a = testing::gaussian_matrix(7, 2, rng);
    CHECK(mean_origin_distance(Eigen::MatrixXd(2.5 * a)) == Approx(2.5 * mean_origin_distance(a)).epsilon(1e-14));
  }

  TEST_CASE("baseline selection") {
    const auto one = PositionFamily::from({{47, rows3x2(1, 0, 0, 1, 1, 1)}});
    CHECK(select_baseline(one) == 47);

    // Mean norms: (1+1+0)/3, (2+2+2)/3, (0+3+1)/3.
    const auto family = PositionFamily::from({{40, rows3x2(1, 0, 0, 1, 0, 0)},
                                              {50, rows3x2(2, 0, 0, 2, 0, -2)},
                                              {60, rows3x2(0, 0, 3, 0, 0, 1)}});
    CHECK(select_baseline(family) == 50);

    Rng rng(6);
    const Eigen::MatrixXd a = testing::gaussian_matrix(4, 2, rng);
    const auto scaled = PositionFamily::from({{40, a}, {45, 2.0 * a}, {50, a}});
    CHECK(select_baseline(scaled) == 45);

    const auto tied = PositionFamily::from({{40, a}, {41, a}});
    CHECK(select_baseline(tied) == 41);
  }

  TEST_CASE("matching to the baseline") {
    Rng rng(7);
    const Eigen::MatrixXd base = 3.0 * testing::gaussian_matrix(6, 2, rng);
    const Eigen::MatrixXd turned = base * testing::rotation2(3 * std::numbers::pi / 4);
    auto family = PositionFamily::from({{40, turned}, {50, base}});
    family.baseline_k = 50;
    match_to_baseline(family);
    CHECK(family.A_star.at(50) == base);
    CHECK((family.A_star.at(40) - base).norm() < 1e-10);
  }

  TEST_CASE("applying a rotation") {
    auto family = PositionFamily::from({{40, rows3x2(1, 2, 3, 4, 5, 6)}});
    family.baseline_k = 40;
    match_to_baseline(family);
    apply_rotation(family, Eigen::MatrixXd::Identity(2, 2));
    CHECK(family.B.at(40) == family.A_star.at(40));

    Eigen::MatrixXd r(2, 2);
    r << 0.5, -1, 2, 0.25;
    apply_rotation(family, r);
    // Rows times R by hand: (1,2) -> (4.5, -0.5), (3,4) -> (9.5, -2), (5,6) -> (14.5, -3.5).
    CHECK(family.B.at(40) == rows3x2(4.5, -0.5, 9.5, -2, 14.5, -3.5));
    const Eigen::MatrixXd again = family.A_star.at(40) * r;
    CHECK((again - family.B.at(40)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK_THROWS_AS(apply_rotation(family, Eigen::MatrixXd::Identity(3, 3)), NumericError);
  }

  TEST_CASE("oblimin leaves perfect simple structure at criterion 0") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 2);
    a.col(0).head(3) << 0.8, 0.7, 0.6;
    a.col(1).tail(3) << 0.5, 0.9, 0.4;
    const auto r = oblimin_rotate(a);
    CHECK(r.initial_criterion == 0.0);
    CHECK(r.criterion < 1e-12);
    // Equal to the input up to column order and sign.
    const Eigen::MatrixXd abs_l = r.loadings.cwiseAbs();
    const bool same = (abs_l - a).norm() < 1e-8;
    const bool swapped = (abs_l.rowwise().reverse() - a).norm() < 1e-8;
    CHECK((same || swapped));
  }

  TEST_CASE("oblimin criterion by hand") {
    // One row (a, b): L^2 (11' - I) = (b^2, a^2), so f = (a^2 b^2 + b^2 a^2) / 4.
    Eigen::MatrixXd l(1, 2);
    l << 2.0, 3.0;
    CHECK(oblimin_criterion(l) == Approx(2 * 4.0 * 9.0 / 4));
  }

  TEST_CASE("oblimin descent and rotation bookkeeping") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
      const Eigen::MatrixXd a = testing::gaussian_matrix(20, 2, rng);
      const auto r = oblimin_rotate(a);
      for (std::size_t t = 1; t < r.trace.size(); ++t) CHECK(r.trace[t] <= r.trace[t - 1]);
      CHECK(r.criterion <= r.initial_criterion);
      CHECK((a * r.rotation - r.loadings).norm() < 1e-10);
      CHECK((r.transform.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK(oblimin_criterion(r.loadings) == Approx(r.criterion).epsilon(1e-10));
    }
  }

  TEST_CASE("oblimin undoes an oblique mix of simple structure") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + trial % 2;
      Eigen::MatrixXd simple = Eigen::MatrixXd::Zero(12, d);
      for (int i = 0; i < 12; ++i) simple(i, i % d) = testing::uniform(rng, 0.4, 0.9);
      const Eigen::MatrixXd t = testing::oblique_transform(d, 0.5, rng);
      const auto r = oblimin_rotate(Eigen::MatrixXd(simple * t.transpose()));
      CHECK(r.criterion <= 1e-6);
    }
  }

  TEST_CASE("restarts only ever improve on the identity start") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd a = testing::gaussian_matrix(15, 3, rng);
      ObliminOptions single;
      single.random_starts = 0;
      const auto base = oblimin_rotate(a, single);
      const auto multi = oblimin_rotate(a);
      CHECK(multi.criterion <= base.criterion);
      CHECK(multi.initial_criterion == base.initial_criterion);
      const auto repeat = oblimin_rotate(a);
      CHECK(repeat.loadings == multi.loadings);
    }
  }

  TEST_CASE("align_family end to end") {
    Rng rng(11);
    const Eigen::MatrixXd base = 2.0 * testing::gaussian_matrix(5, 2, rng);
    std::map<int, Eigen::MatrixXd> positions;
    for (int k = 40; k <= 44; ++k)
      positions[k] = (k == 42 ? 1.0 : 0.8) * base * testing::random_orthogonal(2, rng) +
                     testing::gaussian_matrix(5, 2, rng, 0.01);
    auto family = PositionFamily::from(positions);
    align_family(family);
    CHECK(family.baseline_k == 42);
    CHECK(family.B.size() == 5);
    CHECK(family.criterion <= family.initial_criterion);
    for (int k = 40; k <= 44; ++k) CHECK((family.B.at(k) - family.A_star.at(k) * family.R).norm() < 1e-12);

    AlignOptions forced;
    forced.baseline_k = 44;
    auto other = PositionFamily::from(positions);
    align_family(other, forced);
    CHECK(other.baseline_k == 44);
    forced.baseline_k = 99;
    CHECK_THROWS_AS(align_family(other, forced), ConfigError);

    auto zero = PositionFamily::from({{40, Eigen::MatrixXd::Zero(3, 2)}});
    CHECK_THROWS_AS(align_family(zero), NumericError);
    auto flat = PositionFamily::from({{40, Eigen::MatrixXd::Ones(3, 1)}});
    CHECK_THROWS_AS(align_family(flat), ConfigError);
    CHECK_THROWS_AS(PositionFamily::from({}), ConfigError);
    CHECK_THROWS_AS(PositionFamily::from({{40, Eigen::MatrixXd::Ones(3, 2)}, {41, Eigen::MatrixXd::Ones(4, 2)}}),
                    ConfigError);
  }
}
