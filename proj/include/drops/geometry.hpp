#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

#include "drops/spherical_harmonics.hpp"

namespace drops {

struct Ball {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
  int dimension = 3;
};

// Pairwise disjoint balls; touching or overlapping pairs are rejected.
struct BallUnion {
  std::vector<Ball> balls;
};

// Radial graph over the sphere: R(n) = base_radius + phi(n) with
// sup|phi| < base_radius.
struct NearlySpherical {
  double base_radius = 1.0;
  SphereFunction phi;  // carries the ambient dimension
  int dimension() const { return phi.dimension(); }
};

// Axis-aligned cube (d = 3) or square (d = 2), centered at the origin.
struct Cube {
  double side = 1.0;
  int dimension = 3;
};

using Shape = std::variant<Ball, BallUnion, NearlySpherical, Cube>;

int shape_dimension(const Shape& shape);

// Validates invariants (disjointness, graph condition); throws ContractError.
void validate_shape(const Shape& shape);

struct SurfaceQuadrature {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::VectorXd areas;
  Eigen::Matrix<double, Eigen::Dynamic, 3> normals;
  int dimension = 3;
  int size() const { return static_cast<int>(points.rows()); }
  double area_sum() const { return areas.sum(); }
};

// Quadrature nodes on the boundary with areas from the exact area element
// (graph Jacobian for NearlySpherical).
SurfaceQuadrature surface_quadrature(const Shape& shape, int n_nodes);

// Equal-volume interior cells, radially graded for graph shapes. Supports
// Ball and NearlySpherical.
struct InteriorQuadrature {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::VectorXd volumes;
};
InteriorQuadrature interior_quadrature(const Shape& shape, int n_nodes);

double unit_ball_volume(int d);     // omega_d
double unit_ball_perimeter(int d);  // d * omega_d

double perimeter(const Shape& shape);
double volume(const Shape& shape);

// Uniform dilation to the target volume (exact, degree-d homogeneity).
Shape enforce_volume(const Shape& shape, double target_volume);

// Translate so the volumetric barycenter is at the origin and re-express
// as a graph over the sphere. Throws ContractError if re-graphing fails.
NearlySpherical recenter_barycenter(const NearlySpherical& shape);

Eigen::Vector3d barycenter(const NearlySpherical& shape);

// P(E) - P(B) for a shape of ball volume; throws ContractError if the
// volume is not omega_d (1e-6 relative).
double isoperimetric_deficit(const Shape& shape);

// Principal curvatures bounded by 1/delta at all samples (graph shapes,
// sampled 4x denser than the default quadrature), or radius >= delta and
// surface gaps >= 2*delta (balls). Cubes fail for every delta.
bool delta_ball_check(const Shape& shape, double delta);

double diameter(const Shape& shape);

// sqrt(d) * 2^{d+2} * (m / omega_d) * delta^{1-d}  (diameter bound for
// connected sets in K_delta of volume m).
double diameter_bound(double delta, double m, int d);

// Principal curvatures at a surface sample of a graph shape.
Eigen::Vector2d principal_curvatures(const NearlySpherical& shape,
                                     const Eigen::Vector3d& direction);

// Plain-text key-value shape description (variant, parameters, coefficient
// list). Throws ConfigError on unknown keys.
Shape parse_shape_config(const std::string& text);

}  // namespace drops
