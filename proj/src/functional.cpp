#include "drops/functional.hpp"

#include <cmath>

#include "drops/errors.hpp"

namespace drops {

namespace {

FunctionalReport evaluate_common(const Shape& shape, const KernelSpec& spec,
                                 double charge, int n_nodes,
                                 bool boundary_only) {
  if (charge < 0.0) throw ContractError("functional: charge must be nonnegative");
  if (n_nodes < 8) throw ContractError("functional: need at least 8 nodes");
  validate_shape(shape);
  const int d = shape_dimension(shape);
  if (spec.dimension != d)
    throw ContractError("functional: kernel and shape dimensions differ");

  FunctionalReport report;
  report.perimeter = perimeter(shape);
  report.charge = charge;
  const double vol = volume(shape);
  report.deficit = report.perimeter -
                   unit_ball_perimeter(d) *
                       std::pow(vol / unit_ball_volume(d),
                                (d - 1.0) / d);
  report.normalized_charge = normalized_charge(charge, vol, d, spec.alpha);

  DiscreteMeasure quad;
  if (boundary_only) {
    quad = measure_from_surface(surface_quadrature(shape, n_nodes));
  } else {
    // interior-supported equilibrium: 1:3 boundary-to-interior node split
    const int n_surf = std::max(4, n_nodes / 4);
    const int n_int = std::max(8, n_nodes - n_surf);
    DiscreteMeasure boundary =
        measure_from_surface(surface_quadrature(shape, n_surf));
    const InteriorQuadrature inter = interior_quadrature(shape, n_int);
    DiscreteMeasure cells;
    cells.dimension = d;
    cells.nodes = inter.points;
    cells.patch_areas = inter.volumes;
    cells.weights = inter.volumes / inter.volumes.sum();
    cells.patch_kinds.assign(static_cast<std::size_t>(inter.points.rows()),
                             PatchKind::Cell);
    quad = concat_measures(boundary, cells);
    quad.weights /= quad.weights.sum();
  }

  const EquilibriumSolution sol = solve_equilibrium(spec, quad);
  report.riesz_energy = sol.energy;
  report.total = report.perimeter + charge * charge * sol.energy;
  report.el_spread = sol.el_spread;
  report.el_violation = sol.el_violation;
  report.solver_iterations = sol.iterations;
  return report;
}

}  // namespace

FunctionalReport evaluate_F(const Shape& shape, const KernelSpec& spec,
                            double charge, int n_nodes) {
  if (spec.family != KernelFamily::Riesz)
    throw ContractError("F: Riesz kernels only");
  const int d = shape_dimension(shape);
  const bool boundary_only = spec.alpha <= d - 2 + 1e-12;
  return evaluate_common(shape, spec, charge, n_nodes, boundary_only);
}

FunctionalReport evaluate_G(const Shape& shape, const KernelSpec& spec,
                            double charge, int n_nodes) {
  const int d = shape_dimension(shape);
  if (spec.family == KernelFamily::Riesz && spec.alpha >= d - 1)
    throw ContractError("G: boundary energy needs alpha < d - 1");
  return evaluate_common(shape, spec, charge, n_nodes, true);
}

double normalized_charge(double charge, double mass, int d, double alpha) {
  if (mass <= 0.0) throw ContractError("normalized charge: mass must be positive");
  if (charge < 0.0) throw ContractError("normalized charge: charge must be nonnegative");
  return charge / std::pow(mass, (d - 1.0 + alpha) / (2.0 * d));
}

double connected_lower_bound(double delta, double m, double charge, int d,
                             double alpha) {
  if (delta <= 0.0 || m <= 0.0)
    throw ContractError("connected lower bound: positive delta and mass");
  const double ratio = m / unit_ball_volume(d);
  const double diam_const = std::sqrt(static_cast<double>(d)) * std::pow(2.0, d + 2);
  return std::pow(ratio, (d - 1.0) / d) * unit_ball_perimeter(d) +
         std::pow(diam_const, -alpha) * std::pow(ratio, -alpha) * charge *
             charge * std::pow(delta, (d - 1.0) * alpha);
}

}  // namespace drops
