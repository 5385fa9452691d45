#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

namespace drops {

// What a node's quadrature patch discretizes: a codimension-1 surface
// element (area) or a full-dimensional cell (volume).
enum class PatchKind { Surface, Cell };

// A finite atomic measure sum_i w_i delta_{x_i}, optionally carrying the
// patch areas/volumes of the quadrature cells the nodes represent.
// Nodes live in R^3; planar problems use z = 0.
struct DiscreteMeasure {
  Eigen::Matrix<double, Eigen::Dynamic, 3> nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd patch_areas;        // size 0 when absent
  std::vector<PatchKind> patch_kinds; // empty means all Surface
  int dimension = 3;

  int size() const { return static_cast<int>(nodes.rows()); }
  bool has_patch_areas() const { return patch_areas.size() == size() && size() > 0; }
  PatchKind kind_of(int i) const {
    return patch_kinds.empty() ? PatchKind::Surface : patch_kinds[static_cast<std::size_t>(i)];
  }
  double total_mass() const;

  // Throws ContractError on duplicate nodes, size mismatches, or a cached
  // mass drifting from the weight sum.
  void validate() const;
};

// Probability measure with equal weights on a sphere of the given radius:
// Fibonacci lattice for d = 3, equispaced angles for d = 2. Patch areas
// are surface area / N.
DiscreteMeasure uniform_sphere_measure(int d, double radius, int n_nodes);

// Volumetric quadrature of the ball equilibrium density on the unit ball,
// normalized to unit mass. Valid for d - 2 < alpha < d. The density is
// proportional to (1 - |x|^2)^{-(d-alpha)/2}, the exponent that makes the
// potential constant on the ball.
DiscreteMeasure ball_interior_measure(int d, double alpha, int n_nodes);

// Pushforward x -> lambda x; weights unchanged, patch areas scaled by
// lambda^{d-1} (surface patches) or lambda^d (cells).
DiscreteMeasure rescale_measure(const DiscreteMeasure& mu, double lambda);

// Divide weights by the total mass. Requires positive mass and w >= 0.
DiscreteMeasure normalize(const DiscreteMeasure& mu);

// Concatenate two measures over the same ambient dimension.
DiscreteMeasure concat_measures(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Fibonacci lattice directions on the unit sphere (midpoint offset).
Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_sphere_directions(int n);

// Equal-volume-fraction lattice in the unit ball. d = 3 pairs Fibonacci
// sphere directions with van der Corput radii so radius and direction stay
// uncorrelated; d = 2 is the golden-angle spiral.
Eigen::Matrix<double, Eigen::Dynamic, 3> unit_ball_lattice(int d, int n);

// Flat CSV: one row per node (x, y, z, weight, patch_area).
void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu);
DiscreteMeasure read_measure_csv(std::istream& is, int dimension);

}  // namespace drops
