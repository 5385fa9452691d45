#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>

#include "drops/geometry.hpp"
#include "drops/kernel.hpp"
#include "drops/measure.hpp"

namespace drops {

struct EquilibriumSolution {
  DiscreteMeasure measure;   // probability weights on the input nodes
  double energy = 0.0;       // w^T K w
  double capacity = 0.0;     // 1/energy (Riesz), 0 for logarithmic
  double el_spread = 0.0;    // max-min potential over active nodes
  double el_violation = 0.0; // max(active constant - potential) over inactive
  int iterations = 0;
  bool converged = false;
  Eigen::VectorXd node_potentials;  // (K w)_i including diagonal correction
};

struct SolveOptions {
  double tol = 1e-6;       // relative EL residual
  int max_iter = 50'000;
  // When set, start from a random simplex point instead of uniform weights
  // (used by the uniqueness surrogate tests).
  std::optional<unsigned> random_init_seed;
  // Throw ConvergenceError instead of returning an unconverged solution.
  bool throw_on_failure = true;
};

// K[i][j] = k(x_i, x_j) off-diagonal, diagonal_term(...) on the diagonal.
// Throws ContractError on duplicate nodes or missing patch areas.
Eigen::MatrixXd assemble_kernel_matrix(const KernelSpec& spec,
                                       const DiscreteMeasure& quad);

// Minimize w^T K w over the probability simplex: accelerated projected
// gradient with exact simplex projection and monotone restarts, followed by
// an active-set polish (direct KKT solve) when it certifies optimality.
EquilibriumSolution solve_equilibrium(const KernelSpec& spec,
                                      const DiscreteMeasure& quad,
                                      const SolveOptions& opts = {});

// 1/energy; Riesz family only.
double capacity(const EquilibriumSolution& sol);

// (spread, violation) of the Euler-Lagrange conditions at the solution,
// recomputed from the given quadrature.
std::pair<double, double> el_residual(const KernelSpec& spec,
                                      const EquilibriumSolution& sol,
                                      const DiscreteMeasure& quad);

// Solve on a mixed boundary+interior node set and return the equilibrium
// mass within eps = 2 mesh widths of the boundary.
struct BoundaryConcentration {
  double boundary_fraction = 0.0;
  EquilibriumSolution solution;
};
BoundaryConcentration boundary_concentration_check(const KernelSpec& spec,
                                                   const Shape& shape,
                                                   int n_surface,
                                                   int n_interior);

// max(w_i / A_i) against the L^inf bound energy * (d-2) / delta
// (alpha = d-2, shape in K_delta).
struct DensityBound {
  double max_density = 0.0;
  double bound = 0.0;
  bool holds = false;
};
DensityBound bounded_density_check(const KernelSpec& spec,
                                   const EquilibriumSolution& sol,
                                   const Shape& shape, double delta,
                                   double tol = 0.05);

// CSV (coordinates, weight, patch area, potential) and JSON summary.
void write_solution_csv(std::ostream& os, const EquilibriumSolution& sol);
std::string solution_summary_json(const EquilibriumSolution& sol);

DiscreteMeasure measure_from_surface(const SurfaceQuadrature& quad);

}  // namespace drops
