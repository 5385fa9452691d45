#include "drops/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include <json.hpp>

#include "drops/errors.hpp"

namespace drops {

namespace {

// Euclidean projection onto the probability simplex (sort-based, exact).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += u[static_cast<std::size_t>(i)];
    const double t = (cum - 1.0) / (i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

double lipschitz_estimate(const Eigen::MatrixXd& K) {
  // power iteration for lambda_max; gradient of w^T K w is 2 K w
  const int n = static_cast<int>(K.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd kv = K * v;
    const double next = kv.norm();
    if (next == 0.0) break;
    v = kv / next;
    if (std::abs(next - lambda) < 1e-9 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 2.0 * lambda;
}

struct Residual {
  double spread;
  double violation;
};

Residual kkt_residual(const Eigen::VectorXd& w, const Eigen::VectorXd& pot) {
  const double wmax = w.maxCoeff();
  const double act = 1e-12 * wmax;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] > act) {
      lo = std::min(lo, pot[i]);
      hi = std::max(hi, pot[i]);
    }
  }
  double viol = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] <= act) viol = std::max(viol, hi - pot[i]);
  }
  return {hi - lo, std::max(0.0, viol)};
}

// Direct KKT solve on the current active set; returns false when the
// solve is not an optimality certificate (negative weight or inactive
// potential below the multiplier).
bool active_set_polish(const Eigen::MatrixXd& K, Eigen::VectorXd& w) {
  const double wmax = w.maxCoeff();
  std::vector<int> active;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] > 1e-12 * wmax) active.push_back(i);
  }
  const int m = static_cast<int>(active.size());
  if (m == 0) return false;
  Eigen::MatrixXd A(m + 1, m + 1);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) A(a, b) = 2.0 * K(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]);
    A(a, m) = 1.0;
    A(m, a) = 1.0;
  }
  A(m, m) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs[m] = 1.0;
  const Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
  Eigen::VectorXd w_new = Eigen::VectorXd::Zero(w.size());
  for (int a = 0; a < m; ++a) {
    if (sol[a] < -1e-14) return false;
    w_new[active[static_cast<std::size_t>(a)]] = std::max(0.0, sol[a]);
  }
  const double lambda = sol[m];
  const Eigen::VectorXd pot = K * w_new;
  for (int i = 0; i < w.size(); ++i) {
    if (w_new[i] == 0.0 && 2.0 * pot[i] < lambda * (1.0 - 1e-9) - 1e-12 * std::abs(lambda))
      return false;
  }
  w = w_new / w_new.sum();
  return true;
}

}  // namespace

Eigen::MatrixXd assemble_kernel_matrix(const KernelSpec& spec,
                                       const DiscreteMeasure& quad) {
  quad.validate();
  if (!quad.has_patch_areas())
    throw ContractError("kernel matrix: patch areas are required for the diagonal");
  if (quad.dimension != spec.dimension)
    throw ContractError("kernel matrix: measure and kernel dimensions differ");
  const int n = quad.size();
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i) {
    K(i, i) = diagonal_term(spec, quad.kind_of(i), quad.patch_areas[i]);
    const Eigen::Vector3d xi = quad.nodes.row(i);
    for (int j = i + 1; j < n; ++j) {
      const double v = eval_kernel(spec, xi, quad.nodes.row(j));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

EquilibriumSolution solve_equilibrium(const KernelSpec& spec,
                                      const DiscreteMeasure& quad,
                                      const SolveOptions& opts) {
  if (opts.tol <= 0.0) throw ContractError("solve: tol must be positive");
  const Eigen::MatrixXd K = assemble_kernel_matrix(spec, quad);
  const int n = quad.size();

  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  if (opts.random_init_seed) {
    std::mt19937 rng(*opts.random_init_seed);
    std::exponential_distribution<double> exp_dist(1.0);
    for (int i = 0; i < n; ++i) w[i] = exp_dist(rng);
    w /= w.sum();
  }

  const double L = std::max(lipschitz_estimate(K), 1e-300);
  const double step = 1.0 / L;
  Eigen::VectorXd y = w;
  double t = 1.0;
  double f_prev = w.dot(K * w);
  int iterations = 0;
  bool converged = false;
  int last_polish = -1'000'000;

  for (int it = 1; it <= opts.max_iter; ++it) {
    iterations = it;
    const Eigen::VectorXd grad = 2.0 * (K * y);
    Eigen::VectorXd w_next = project_simplex(y - step * grad);
    double f_next = w_next.dot(K * w_next);
    if (f_next > f_prev) {
      // monotone restart: drop momentum, take a plain projected step
      w_next = project_simplex(w - step * 2.0 * (K * w));
      f_next = w_next.dot(K * w_next);
      t = 1.0;
      y = w_next;
    } else {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = w_next + ((t - 1.0) / t_next) * (w_next - w);
      t = t_next;
    }
    w = w_next;
    f_prev = std::min(f_prev, f_next);

    if (it % 25 == 0 || it == opts.max_iter) {
      Eigen::VectorXd pot = K * w;
      Residual res = kkt_residual(w, pot);
      // logarithmic energies can legitimately sit at zero
      const double scale = std::max(std::abs(f_prev), 1.0);
      double err = std::max(res.spread, res.violation);
      // cubic-cost polish: only once the active set looks settled, or as a
      // periodic fallback for stubborn instances
      const bool try_polish =
          err > opts.tol * scale &&
          (err <= 1e4 * opts.tol * scale || it - last_polish >= 500);
      if (try_polish) {
        last_polish = it;
        Eigen::VectorXd trial = w;
        if (active_set_polish(K, trial)) {
          const double f_trial = trial.dot(K * trial);
          if (f_trial <= f_prev + 1e-12 * std::max(std::abs(f_prev), 1.0)) {
            w = trial;
            f_prev = f_trial;
            y = w;
            t = 1.0;
            pot = K * w;
            res = kkt_residual(w, pot);
            err = std::max(res.spread, res.violation);
          }
        }
      }
      if (err <= opts.tol * scale) {
        converged = true;
        break;
      }
    }
  }

  if (!converged && opts.throw_on_failure) {
    const Residual res = kkt_residual(w, K * w);
    throw ConvergenceError("equilibrium solve did not reach tolerance",
                           std::max(res.spread, res.violation));
  }

  EquilibriumSolution sol;
  sol.measure = quad;
  sol.measure.weights = w;
  sol.node_potentials = K * w;
  sol.energy = w.dot(sol.node_potentials);
  sol.capacity = (spec.family == KernelFamily::Riesz && sol.energy > 0.0)
                     ? 1.0 / sol.energy
                     : 0.0;
  const Residual res = kkt_residual(w, sol.node_potentials);
  sol.el_spread = res.spread;
  sol.el_violation = res.violation;
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

double capacity(const EquilibriumSolution& sol) {
  if (sol.energy <= 0.0)
    throw ContractError("capacity: requires a positive Riesz energy");
  return 1.0 / sol.energy;
}

std::pair<double, double> el_residual(const KernelSpec& spec,
                                      const EquilibriumSolution& sol,
                                      const DiscreteMeasure& quad) {
  const Eigen::MatrixXd K = assemble_kernel_matrix(spec, quad);
  const Eigen::VectorXd pot = K * sol.measure.weights;
  const Residual res = kkt_residual(sol.measure.weights, pot);
  return {res.spread, res.violation};
}

DiscreteMeasure measure_from_surface(const SurfaceQuadrature& quad) {
  DiscreteMeasure m;
  m.dimension = quad.dimension;
  m.nodes = quad.points;
  m.patch_areas = quad.areas;
  m.weights = quad.areas / quad.areas.sum();
  m.patch_kinds.assign(static_cast<std::size_t>(quad.size()), PatchKind::Surface);
  return m;
}

BoundaryConcentration boundary_concentration_check(const KernelSpec& spec,
                                                   const Shape& shape,
                                                   int n_surface,
                                                   int n_interior) {
  const int d = shape_dimension(shape);
  const SurfaceQuadrature surf = surface_quadrature(shape, n_surface);
  const InteriorQuadrature inter = interior_quadrature(shape, n_interior);

  DiscreteMeasure boundary = measure_from_surface(surf);
  DiscreteMeasure cells;
  cells.dimension = d;
  cells.nodes = inter.points;
  cells.patch_areas = inter.volumes;
  cells.weights = inter.volumes / inter.volumes.sum();
  cells.patch_kinds.assign(static_cast<std::size_t>(inter.points.rows()),
                           PatchKind::Cell);
  DiscreteMeasure mixed = concat_measures(boundary, cells);
  mixed.weights /= mixed.weights.sum();

  const EquilibriumSolution sol = solve_equilibrium(spec, mixed);

  const double mesh = (d == 3) ? std::sqrt(surf.area_sum() / surf.size())
                               : surf.area_sum() / surf.size();
  const double eps = 2.0 * mesh;

  // distance to the boundary via the radial graph (exact for balls)
  auto boundary_distance = [&](const Eigen::Vector3d& x) -> double {
    if (const auto* b = std::get_if<Ball>(&shape))
      return b->radius - (x - b->center).norm();
    if (const auto* g = std::get_if<NearlySpherical>(&shape)) {
      const double r = x.norm();
      if (r == 0.0) return g->base_radius;
      return g->base_radius + g->phi.eval(x / r) - r;
    }
    return 0.0;
  };

  double near_mass = 0.0;
  for (int i = 0; i < sol.measure.size(); ++i) {
    const bool is_surface = sol.measure.kind_of(i) == PatchKind::Surface;
    if (is_surface || boundary_distance(sol.measure.nodes.row(i)) <= eps) {
      near_mass += sol.measure.weights[i];
    }
  }
  return {near_mass, sol};
}

DensityBound bounded_density_check(const KernelSpec& spec,
                                   const EquilibriumSolution& sol,
                                   const Shape& shape, double delta,
                                   double tol) {
  const int d = shape_dimension(shape);
  if (spec.family != KernelFamily::Riesz ||
      std::abs(spec.alpha - (d - 2)) > 1e-12)
    throw ContractError("density bound: requires alpha = d - 2");
  if (!delta_ball_check(shape, delta))
    throw ContractError("density bound: shape is not delta-regular at this delta");
  double max_density = 0.0;
  for (int i = 0; i < sol.measure.size(); ++i) {
    max_density = std::max(max_density,
                           sol.measure.weights[i] / sol.measure.patch_areas[i]);
  }
  DensityBound out;
  out.max_density = max_density;
  out.bound = sol.energy * (d - 2) / delta;
  out.holds = max_density <= out.bound * (1.0 + tol);
  return out;
}

void write_solution_csv(std::ostream& os, const EquilibriumSolution& sol) {
  os << "x,y,z,weight,patch_area,potential\n";
  char buf[512];
  for (int i = 0; i < sol.measure.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  sol.measure.nodes(i, 0), sol.measure.nodes(i, 1),
                  sol.measure.nodes(i, 2), sol.measure.weights[i],
                  sol.measure.has_patch_areas() ? sol.measure.patch_areas[i] : 0.0,
                  sol.node_potentials[i]);
    os << buf;
  }
}

std::string solution_summary_json(const EquilibriumSolution& sol) {
  nlohmann::json j;
  j["nodes"] = sol.measure.size();
  j["energy"] = sol.energy;
  j["capacity"] = sol.capacity;
  j["el_spread"] = sol.el_spread;
  j["el_violation"] = sol.el_violation;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  return j.dump(2);
}

}  // namespace drops
