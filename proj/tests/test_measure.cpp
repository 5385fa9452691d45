#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "drops/errors.hpp"
#include "drops/measure.hpp"

using namespace drops;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("uniform sphere measure basics") {
  const DiscreteMeasure mu = uniform_sphere_measure(3, 1.0, 500);
  CHECK(mu.size() == 500);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mu.weights.minCoeff() == doctest::Approx(1.0 / 500).epsilon(1e-14));
  CHECK(mu.patch_areas.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  for (int i = 0; i < mu.size(); ++i) {
    CHECK(mu.nodes.row(i).norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(mu.kind_of(i) == PatchKind::Surface);
  }
  CHECK_NOTHROW(mu.validate());
}

TEST_CASE("uniform circle measure basics") {
  const DiscreteMeasure mu = uniform_sphere_measure(2, 2.0, 128);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mu.patch_areas.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  for (int i = 0; i < mu.size(); ++i) {
    CHECK(mu.nodes(i, 2) == 0.0);
    CHECK(mu.nodes.row(i).norm() == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("bad arguments are rejected") {
  CHECK_THROWS_AS(uniform_sphere_measure(4, 1.0, 100), ContractError);
  CHECK_THROWS_AS(uniform_sphere_measure(3, 0.0, 100), ContractError);
  CHECK_THROWS_AS(uniform_sphere_measure(3, 1.0, 2), ContractError);
  CHECK_THROWS_AS(fibonacci_sphere_directions(0), ContractError);
  CHECK_THROWS_AS(unit_ball_lattice(5, 100), ContractError);
}

TEST_CASE("duplicate nodes fail validation") {
  DiscreteMeasure mu = uniform_sphere_measure(3, 1.0, 64);
  mu.nodes.row(5) = mu.nodes.row(11);
  CHECK_THROWS_AS(mu.validate(), ContractError);
}

TEST_CASE("fibonacci directions are distinct unit vectors") {
  const auto dirs = fibonacci_sphere_directions(400);
  double min_gap = 1e9;
  for (int i = 0; i < 400; ++i) {
    CHECK(dirs.row(i).norm() == doctest::Approx(1.0).epsilon(1e-13));
    for (int j = i + 1; j < 400; ++j) {
      min_gap = std::min(min_gap, (dirs.row(i) - dirs.row(j)).norm());
    }
  }
  // mesh scale is ~ sqrt(4*pi/n); nodes must not cluster below it
  CHECK(min_gap > 0.5 * std::sqrt(4.0 * kPi / 400));
}

TEST_CASE("ball lattice stays inside and avoids clustering") {
  for (int d : {2, 3}) {
    const auto pts = unit_ball_lattice(d, 600);
    double min_gap = 1e9;
    for (int i = 0; i < 600; ++i) {
      CHECK(pts.row(i).norm() <= 1.0 + 1e-12);
      if (d == 2) CHECK(pts(i, 2) == 0.0);
      for (int j = i + 1; j < 600; ++j) {
        min_gap = std::min(min_gap, (pts.row(i) - pts.row(j)).norm());
      }
    }
    // typical cell scale is (1/n)^(1/d); require a sane fraction of it
    CHECK(min_gap > 0.1 * std::pow(1.0 / 600, 1.0 / d));
  }
}

TEST_CASE("ball interior measure is a probability measure inside the ball") {
  const DiscreteMeasure mu = ball_interior_measure(3, 1.5, 800);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.weights.minCoeff() >= 0.0);
  for (int i = 0; i < mu.size(); ++i) {
    CHECK(mu.nodes.row(i).norm() < 1.0);
    CHECK(mu.kind_of(i) == PatchKind::Cell);
  }
  // density grows toward the boundary for alpha > d-2: the outer half of
  // the radius carries most of the mass
  double outer = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.nodes.row(i).norm() > 0.8) outer += mu.weights[i];
  }
  CHECK(outer > 0.5);
}

TEST_CASE("rescale scales nodes, areas, and keeps mass") {
  const DiscreteMeasure mu = uniform_sphere_measure(3, 1.0, 100);
  const DiscreteMeasure nu = rescale_measure(mu, 2.0);
  CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nu.nodes.row(7).norm() == doctest::Approx(2.0).epsilon(1e-13));
  // surface patches scale with lambda^(d-1)
  CHECK(nu.patch_areas[0] == doctest::Approx(4.0 * mu.patch_areas[0]).epsilon(1e-13));
  CHECK_THROWS_AS(rescale_measure(mu, 0.0), ContractError);
}

TEST_CASE("rescale is multiplicative") {
  const DiscreteMeasure mu = uniform_sphere_measure(3, 1.0, 60);
  const DiscreteMeasure a = rescale_measure(rescale_measure(mu, 2.0), 3.0);
  const DiscreteMeasure b = rescale_measure(mu, 6.0);
  CHECK((a.nodes - b.nodes).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.patch_areas - b.patch_areas).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize divides by the total mass and is idempotent") {
  DiscreteMeasure mu = uniform_sphere_measure(3, 1.0, 80);
  mu.weights *= 5.0;
  const DiscreteMeasure n1 = normalize(mu);
  CHECK(n1.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  const DiscreteMeasure n2 = normalize(n1);
  CHECK((n1.weights - n2.weights).cwiseAbs().maxCoeff() < 1e-15);
  mu.weights.setZero();
  CHECK_THROWS_AS(normalize(mu), ContractError);
}

TEST_CASE("concat keeps both parts and rejects mixed dimensions") {
  const DiscreteMeasure a = uniform_sphere_measure(3, 1.0, 40);
  const DiscreteMeasure b = rescale_measure(uniform_sphere_measure(3, 1.0, 30), 3.0);
  const DiscreteMeasure c = concat_measures(a, b);
  CHECK(c.size() == 70);
  CHECK(c.total_mass() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(c.kind_of(0) == PatchKind::Surface);
  const DiscreteMeasure planar = uniform_sphere_measure(2, 1.0, 40);
  CHECK_THROWS_AS(concat_measures(a, planar), ContractError);
}

TEST_CASE("csv roundtrip preserves every double bit-exactly") {
  const DiscreteMeasure mu = uniform_sphere_measure(3, 1.37, 50);
  std::stringstream ss;
  write_measure_csv(ss, mu);
  const DiscreteMeasure back = read_measure_csv(ss, 3);
  REQUIRE(back.size() == mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    CHECK(back.nodes(i, 0) == mu.nodes(i, 0));
    CHECK(back.nodes(i, 1) == mu.nodes(i, 1));
    CHECK(back.nodes(i, 2) == mu.nodes(i, 2));
    CHECK(back.weights[i] == mu.weights[i]);
    CHECK(back.patch_areas[i] == mu.patch_areas[i]);
  }
}
