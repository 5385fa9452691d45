#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "drops/equilibrium.hpp"
#include "drops/errors.hpp"

using namespace drops;
namespace {
constexpr double kPi = std::numbers::pi;

DiscreteMeasure sphere_nodes(int n) {
  const Ball b{Eigen::Vector3d::Zero(), 1.0, 3};
  return measure_from_surface(surface_quadrature(Shape{b}, n));
}
}  // namespace

TEST_CASE("kernel matrix shape and diagonal") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const DiscreteMeasure quad = sphere_nodes(60);
  const Eigen::MatrixXd K = assemble_kernel_matrix(spec, quad);
  CHECK(K.rows() == 60);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 60; ++i) CHECK(K(i, i) > 0.0);
  DiscreteMeasure no_areas = quad;
  no_areas.patch_areas.resize(0);
  CHECK_THROWS_AS(assemble_kernel_matrix(spec, no_areas), ContractError);
}

TEST_CASE("sphere equilibrium reproduces the newtonian capacity") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const EquilibriumSolution sol = solve_equilibrium(spec, sphere_nodes(800));
  CHECK(sol.converged);
  CHECK(sol.energy == doctest::Approx(1.0).epsilon(0.01));
  CHECK(capacity(sol) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(sol.el_spread / sol.energy < 1e-3);
  CHECK(sol.el_violation <= sol.el_spread + 1e-12);
  CHECK(sol.measure.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.measure.weights.minCoeff() >= 0.0);
}

TEST_CASE("equilibrium weights on the sphere are nearly uniform") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const EquilibriumSolution sol = solve_equilibrium(spec, sphere_nodes(600));
  const double mean = 1.0 / 600;
  double rms = 0.0;
  for (int i = 0; i < 600; ++i) {
    rms += std::pow(sol.measure.weights[i] - mean, 2);
  }
  rms = std::sqrt(rms / 600) / mean;
  CHECK(rms < 0.02);
}

TEST_CASE("solution is independent of the starting point") {
  // uniqueness surrogate: the quadratic form is strictly convex on the
  // simplex, so random restarts land on the same minimizer
  const KernelSpec spec = KernelSpec::riesz(3, 1.2);
  const DiscreteMeasure quad = sphere_nodes(200);
  const EquilibriumSolution base = solve_equilibrium(spec, quad);
  for (unsigned seed : {1u, 99u}) {
    SolveOptions opts;
    opts.random_init_seed = seed;
    const EquilibriumSolution other = solve_equilibrium(spec, quad, opts);
    CHECK(other.energy == doctest::Approx(base.energy).epsilon(1e-9));
    CHECK((other.measure.weights - base.measure.weights).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("capacity is monotone under dilation") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const Ball small{Eigen::Vector3d::Zero(), 1.0, 3};
  const Ball big{Eigen::Vector3d::Zero(), 2.0, 3};
  const double c1 = solve_equilibrium(
      spec, measure_from_surface(surface_quadrature(Shape{small}, 400))).capacity;
  const double c2 = solve_equilibrium(
      spec, measure_from_surface(surface_quadrature(Shape{big}, 400))).capacity;
  CHECK(c2 > c1);
  CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-6));  // cap scales like r^alpha
}

TEST_CASE("capacity accessor rejects non-riesz energies") {
  const KernelSpec spec = KernelSpec::logarithmic();
  const Ball disk{Eigen::Vector3d::Zero(), 1.0, 2};
  const EquilibriumSolution sol = solve_equilibrium(
      spec, measure_from_surface(surface_quadrature(Shape{disk}, 200)));
  CHECK(sol.capacity == 0.0);
  CHECK_THROWS_AS(capacity(sol), ContractError);
}

TEST_CASE("el residual recomputation matches the stored values") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const DiscreteMeasure quad = sphere_nodes(150);
  const EquilibriumSolution sol = solve_equilibrium(spec, quad);
  const auto [spread, violation] = el_residual(spec, sol, quad);
  CHECK(spread == doctest::Approx(sol.el_spread).epsilon(1e-9));
  CHECK(violation == doctest::Approx(sol.el_violation).epsilon(1e-9));
}

TEST_CASE("unconverged solves throw unless asked not to") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  // mixed boundary+interior nodes: the polish cannot certify the full
  // active set after one iteration, so a tiny budget must fail
  const Ball b{Eigen::Vector3d::Zero(), 1.0, 3};
  DiscreteMeasure boundary = measure_from_surface(surface_quadrature(Shape{b}, 60));
  const InteriorQuadrature inter = interior_quadrature(Shape{b}, 120);
  DiscreteMeasure cells;
  cells.dimension = 3;
  cells.nodes = inter.points;
  cells.patch_areas = inter.volumes;
  cells.weights = inter.volumes / inter.volumes.sum();
  cells.patch_kinds.assign(120, PatchKind::Cell);
  DiscreteMeasure mixed = concat_measures(boundary, cells);
  mixed.weights /= mixed.weights.sum();

  SolveOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-14;
  CHECK_THROWS_AS(solve_equilibrium(spec, mixed, opts), ConvergenceError);
  opts.throw_on_failure = false;
  const EquilibriumSolution sol = solve_equilibrium(spec, mixed, opts);
  CHECK_FALSE(sol.converged);
}

TEST_CASE("boundary concentration on the ball") {
  const auto res = boundary_concentration_check(
      KernelSpec::riesz(3, 1.0), Shape{Ball{Eigen::Vector3d::Zero(), 1.0, 3}}, 300, 600);
  CHECK(res.boundary_fraction >= 0.99);
  CHECK(res.solution.converged);
}

TEST_CASE("density bound contract checks") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const Shape ball = Shape{Ball{Eigen::Vector3d::Zero(), 1.0, 3}};
  const EquilibriumSolution sol = solve_equilibrium(
      spec, measure_from_surface(surface_quadrature(ball, 400)));
  const DensityBound db = bounded_density_check(spec, sol, ball, 0.5);
  CHECK(db.holds);
  CHECK(db.max_density == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(0.05));
  CHECK(db.bound == doctest::Approx(2.0).epsilon(0.01));
  // alpha != d-2 is outside the hypothesis
  CHECK_THROWS_AS(bounded_density_check(KernelSpec::riesz(3, 1.5), sol, ball, 0.5),
                  ContractError);
  // delta beyond the radius breaks the delta-ball hypothesis
  CHECK_THROWS_AS(bounded_density_check(spec, sol, ball, 1.5), ContractError);
}

TEST_CASE("csv and json outputs carry the solution") {
  const KernelSpec spec = KernelSpec::riesz(3, 1.0);
  const EquilibriumSolution sol = solve_equilibrium(spec, sphere_nodes(50));
  std::ostringstream csv;
  write_solution_csv(csv, sol);
  std::string line;
  std::istringstream in(csv.str());
  std::getline(in, line);
  CHECK(line == "x,y,z,weight,patch_area,potential");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 50);
  const std::string js = solution_summary_json(sol);
  CHECK(js.find("\"energy\"") != std::string::npos);
  CHECK(js.find("\"converged\": true") != std::string::npos);
}
