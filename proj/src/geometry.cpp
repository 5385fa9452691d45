#include "drops/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "drops/errors.hpp"
#include "drops/measure.hpp"
#include "drops/summation.hpp"

namespace drops {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.x.resize(static_cast<std::size_t>(n));
  rule.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[static_cast<std::size_t>(i)] = x;
    rule.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

// Spectral product grid on S^2: Gauss-Legendre in cos(theta), uniform in phi.
struct SphereGrid {
  std::vector<Eigen::Vector3d> dirs;
  std::vector<double> weights;  // sum = 4*pi
};

SphereGrid sphere_grid(int n_theta, int n_phi) {
  SphereGrid grid;
  const GaussRule rule = gauss_legendre(n_theta);
  grid.dirs.reserve(static_cast<std::size_t>(n_theta * n_phi));
  grid.weights.reserve(static_cast<std::size_t>(n_theta * n_phi));
  for (int i = 0; i < n_theta; ++i) {
    const double ct = rule.x[static_cast<std::size_t>(i)];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * j / n_phi;
      grid.dirs.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
      grid.weights.push_back(rule.w[static_cast<std::size_t>(i)] * 2.0 * kPi / n_phi);
    }
  }
  return grid;
}

double graph_radius(const NearlySpherical& s, const Eigen::Vector3d& n) {
  return s.base_radius + s.phi.eval(n);
}

// Area element of the radial graph x = R(n) n relative to d sigma(n):
// R^{d-2} * sqrt(R^2 + |grad R|^2).
double graph_area_element(const NearlySpherical& s, const Eigen::Vector3d& n) {
  const double R = graph_radius(s, n);
  const double g2 = s.phi.tangent_gradient(n).squaredNorm();
  const double rad = std::sqrt(R * R + g2);
  return (s.dimension() == 3) ? R * rad : rad;
}

Eigen::Vector3d graph_normal(const NearlySpherical& s, const Eigen::Vector3d& n) {
  const double R = graph_radius(s, n);
  const Eigen::Vector3d g = s.phi.tangent_gradient(n);
  return (R * n - g).normalized();
}

double cube_perimeter(const Cube& c) {
  return (c.dimension == 3) ? 6.0 * c.side * c.side : 4.0 * c.side;
}

int require_graph_dim(const NearlySpherical& s) {
  const int d = s.dimension();
  if (d != 2 && d != 3) throw ContractError("graph shape: d must be 2 or 3");
  return d;
}

}  // namespace

int shape_dimension(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) return s.dimension;
        if constexpr (std::is_same_v<T, BallUnion>) {
          if (s.balls.empty()) throw ContractError("ball union: empty");
          return s.balls.front().dimension;
        }
        if constexpr (std::is_same_v<T, NearlySpherical>) return s.dimension();
        if constexpr (std::is_same_v<T, Cube>) return s.dimension;
      },
      shape);
}

void validate_shape(const Shape& shape) {
  const int d = shape_dimension(shape);
  if (d != 2 && d != 3) throw ContractError("shape: d must be 2 or 3");
  if (const auto* b = std::get_if<Ball>(&shape)) {
    if (b->radius <= 0.0) throw ContractError("ball: radius must be positive");
    if (d == 2 && b->center.z() != 0.0)
      throw ContractError("ball: planar center must have z = 0");
  } else if (const auto* u = std::get_if<BallUnion>(&shape)) {
    for (const Ball& b : u->balls) {
      if (b.dimension != d) throw ContractError("ball union: mixed dimensions");
      validate_shape(Shape{b});
    }
    for (std::size_t i = 0; i < u->balls.size(); ++i) {
      for (std::size_t j = i + 1; j < u->balls.size(); ++j) {
        const double gap = (u->balls[i].center - u->balls[j].center).norm() -
                           u->balls[i].radius - u->balls[j].radius;
        if (gap <= 0.0) throw ContractError("ball union: balls must be disjoint");
      }
    }
  } else if (const auto* g = std::get_if<NearlySpherical>(&shape)) {
    if (g->base_radius <= 0.0)
      throw ContractError("graph shape: base radius must be positive");
    if (g->phi.sup_abs() >= g->base_radius)
      throw ContractError("graph shape: sup|phi| must stay below the base radius");
  } else if (const auto* c = std::get_if<Cube>(&shape)) {
    if (c->side <= 0.0) throw ContractError("cube: side must be positive");
  }
}

double unit_ball_volume(int d) {
  if (d == 2) return kPi;
  if (d == 3) return 4.0 * kPi / 3.0;
  throw ContractError("unit ball volume: d must be 2 or 3");
}

double unit_ball_perimeter(int d) { return d * unit_ball_volume(d); }

SurfaceQuadrature surface_quadrature(const Shape& shape, int n_nodes) {
  if (n_nodes < 4) throw ContractError("surface quadrature: need at least 4 nodes");
  validate_shape(shape);
  const int d = shape_dimension(shape);
  SurfaceQuadrature out;
  out.dimension = d;

  auto sphere_nodes = [&](const Ball& b, int n, int row0) {
    const auto dirs = fibonacci_sphere_directions(n);
    const double area = unit_ball_perimeter(d) * std::pow(b.radius, d - 1);
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d dir;
      if (d == 3) {
        dir = dirs.row(i);
      } else {
        const double t = 2.0 * kPi * (i + 0.5) / n;
        dir = Eigen::Vector3d(std::cos(t), std::sin(t), 0.0);
      }
      out.points.row(row0 + i) = b.center + b.radius * dir;
      out.normals.row(row0 + i) = dir;
      out.areas[row0 + i] = area / n;
    }
  };

  if (const auto* b = std::get_if<Ball>(&shape)) {
    out.points.resize(n_nodes, 3);
    out.normals.resize(n_nodes, 3);
    out.areas.resize(n_nodes);
    sphere_nodes(*b, n_nodes, 0);
    return out;
  }
  if (const auto* u = std::get_if<BallUnion>(&shape)) {
    std::vector<int> counts;
    double total = 0.0;
    for (const Ball& b : u->balls) total += std::pow(b.radius, d - 1);
    int assigned = 0;
    for (std::size_t i = 0; i < u->balls.size(); ++i) {
      int n = (i + 1 == u->balls.size())
                  ? n_nodes - assigned
                  : std::max(4, static_cast<int>(std::lround(
                                    n_nodes * std::pow(u->balls[i].radius, d - 1) /
                                    total)));
      counts.push_back(n);
      assigned += n;
    }
    const int total_nodes = assigned;
    out.points.resize(total_nodes, 3);
    out.normals.resize(total_nodes, 3);
    out.areas.resize(total_nodes);
    int row = 0;
    for (std::size_t i = 0; i < u->balls.size(); ++i) {
      sphere_nodes(u->balls[i], counts[i], row);
      row += counts[i];
    }
    return out;
  }
  if (const auto* g = std::get_if<NearlySpherical>(&shape)) {
    require_graph_dim(*g);
    out.points.resize(n_nodes, 3);
    out.normals.resize(n_nodes, 3);
    out.areas.resize(n_nodes);
    const double cell = ((d == 3) ? 4.0 * kPi : 2.0 * kPi) / n_nodes;
    const auto dirs = fibonacci_sphere_directions(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      Eigen::Vector3d n;
      if (d == 3) {
        n = dirs.row(i);
      } else {
        const double t = 2.0 * kPi * (i + 0.5) / n_nodes;
        n = Eigen::Vector3d(std::cos(t), std::sin(t), 0.0);
      }
      out.points.row(i) = graph_radius(*g, n) * n;
      out.normals.row(i) = graph_normal(*g, n);
      out.areas[i] = graph_area_element(*g, n) * cell;
    }
    return out;
  }
  const Cube& c = std::get<Cube>(shape);
  if (d == 2) {
    // nodes straddle the corners: offsets (i + 0.5) * spacing along the
    // unrolled boundary, so corner singularities are probed but never hit
    out.points.resize(n_nodes, 3);
    out.normals.resize(n_nodes, 3);
    out.areas.resize(n_nodes);
    const double L = 4.0 * c.side;
    const double h = c.side / 2.0;
    for (int i = 0; i < n_nodes; ++i) {
      const double s = L * (i + 0.5) / n_nodes;
      const int edge = static_cast<int>(s / c.side);
      const double t = s - edge * c.side - h;
      Eigen::Vector3d p, nv;
      switch (edge) {
        case 0: p = {h, t, 0.0}; nv = {1.0, 0.0, 0.0}; break;
        case 1: p = {-t, h, 0.0}; nv = {0.0, 1.0, 0.0}; break;
        case 2: p = {-h, -t, 0.0}; nv = {-1.0, 0.0, 0.0}; break;
        default: p = {t, -h, 0.0}; nv = {0.0, -1.0, 0.0}; break;
      }
      out.points.row(i) = p;
      out.normals.row(i) = nv;
      out.areas[i] = L / n_nodes;
    }
    return out;
  }
  // d = 3: per-face midpoint grids
  const int per_face = std::max(1, n_nodes / 6);
  const int k = std::max(1, static_cast<int>(std::lround(std::sqrt(per_face))));
  const int total = 6 * k * k;
  out.points.resize(total, 3);
  out.normals.resize(total, 3);
  out.areas.resize(total);
  const double h = c.side / 2.0;
  const double cell_area = (c.side / k) * (c.side / k);
  int row = 0;
  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    const double sign = (face % 2 == 0) ? 1.0 : -1.0;
    Eigen::Vector3d nv = Eigen::Vector3d::Zero();
    nv[axis] = sign;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double u = -h + c.side * (i + 0.5) / k;
        const double v = -h + c.side * (j + 0.5) / k;
        Eigen::Vector3d p;
        p[axis] = sign * h;
        p[(axis + 1) % 3] = u;
        p[(axis + 2) % 3] = v;
        out.points.row(row) = p;
        out.normals.row(row) = nv;
        out.areas[row] = cell_area;
        ++row;
      }
    }
  }
  return out;
}

InteriorQuadrature interior_quadrature(const Shape& shape, int n_nodes) {
  if (n_nodes < 8) throw ContractError("interior quadrature: need at least 8 nodes");
  validate_shape(shape);
  const int d = shape_dimension(shape);
  const Ball* ball = std::get_if<Ball>(&shape);
  const NearlySpherical* graph = std::get_if<NearlySpherical>(&shape);
  if (!ball && !graph)
    throw ContractError("interior quadrature: only ball and graph shapes");

  InteriorQuadrature out;
  out.points.resize(n_nodes, 3);
  out.volumes.resize(n_nodes);
  const auto lattice = unit_ball_lattice(d, n_nodes);
  const double omega = unit_ball_volume(d);
  for (int i = 0; i < n_nodes; ++i) {
    const Eigen::Vector3d x = lattice.row(i);
    if (ball) {
      out.points.row(i) = ball->center + ball->radius * x;
      out.volumes[i] = omega * std::pow(ball->radius, d) / n_nodes;
    } else {
      // radial map x -> R(x/|x|) x has Jacobian R^d exactly
      const Eigen::Vector3d n = x.normalized();
      const double R = graph_radius(*graph, n);
      out.points.row(i) = R * x;
      out.volumes[i] = omega * std::pow(R, d) / n_nodes;
    }
  }
  return out;
}

double perimeter(const Shape& shape) {
  validate_shape(shape);
  const int d = shape_dimension(shape);
  if (const auto* b = std::get_if<Ball>(&shape)) {
    return unit_ball_perimeter(d) * std::pow(b->radius, d - 1);
  }
  if (const auto* u = std::get_if<BallUnion>(&shape)) {
    double total = 0.0;
    for (const Ball& b : u->balls)
      total += unit_ball_perimeter(d) * std::pow(b.radius, d - 1);
    return total;
  }
  if (const auto* c = std::get_if<Cube>(&shape)) return cube_perimeter(*c);
  const NearlySpherical& g = std::get<NearlySpherical>(shape);
  KahanAccumulator acc;
  if (d == 2) {
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / n;
      const Eigen::Vector3d dir(std::cos(t), std::sin(t), 0.0);
      acc.add(graph_area_element(g, dir) * 2.0 * kPi / n);
    }
    return acc.value();
  }
  const SphereGrid grid = sphere_grid(64, 128);
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    acc.add(graph_area_element(g, grid.dirs[i]) * grid.weights[i]);
  }
  return acc.value();
}

double volume(const Shape& shape) {
  validate_shape(shape);
  const int d = shape_dimension(shape);
  if (const auto* b = std::get_if<Ball>(&shape)) {
    return unit_ball_volume(d) * std::pow(b->radius, d);
  }
  if (const auto* u = std::get_if<BallUnion>(&shape)) {
    double total = 0.0;
    for (const Ball& b : u->balls) total += unit_ball_volume(d) * std::pow(b.radius, d);
    return total;
  }
  if (const auto* c = std::get_if<Cube>(&shape)) return std::pow(c->side, d);
  const NearlySpherical& g = std::get<NearlySpherical>(shape);
  KahanAccumulator acc;
  if (d == 2) {
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / n;
      const double R = graph_radius(g, {std::cos(t), std::sin(t), 0.0});
      acc.add(R * R / 2.0 * 2.0 * kPi / n);
    }
    return acc.value();
  }
  const SphereGrid grid = sphere_grid(64, 128);
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    const double R = graph_radius(g, grid.dirs[i]);
    acc.add(R * R * R / 3.0 * grid.weights[i]);
  }
  return acc.value();
}

Shape enforce_volume(const Shape& shape, double target_volume) {
  if (target_volume <= 0.0) throw ContractError("enforce volume: target must be positive");
  const int d = shape_dimension(shape);
  const double v = volume(shape);
  const double lambda = std::pow(target_volume / v, 1.0 / d);
  Shape out = shape;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          s.center *= lambda;
          s.radius *= lambda;
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          for (Ball& b : s.balls) {
            b.center *= lambda;
            b.radius *= lambda;
          }
        } else if constexpr (std::is_same_v<T, NearlySpherical>) {
          s.base_radius *= lambda;
          s.phi = s.phi.scaled(lambda);
        } else if constexpr (std::is_same_v<T, Cube>) {
          s.side *= lambda;
        }
      },
      out);
  return out;
}

Eigen::Vector3d barycenter(const NearlySpherical& shape) {
  const int d = require_graph_dim(shape);
  const double v = volume(Shape{shape});
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  if (d == 2) {
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / n;
      const Eigen::Vector3d dir(std::cos(t), std::sin(t), 0.0);
      const double R = graph_radius(shape, dir);
      acc += dir * (R * R * R / 3.0) * (2.0 * kPi / n);
    }
    return acc / v;
  }
  const SphereGrid grid = sphere_grid(64, 128);
  for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
    const double R = graph_radius(shape, grid.dirs[i]);
    acc += grid.dirs[i] * (R * R * R * R / 4.0) * grid.weights[i];
  }
  return acc / v;
}

NearlySpherical recenter_barycenter(const NearlySpherical& shape) {
  const int d = require_graph_dim(shape);
  const Eigen::Vector3d b = barycenter(shape);
  // radius of the translated set E - b in direction n: solve
  // |t n + b| = R((t n + b)/|t n + b|) by fixed point, then re-project
  auto shifted_radius = [&](const Eigen::Vector3d& n) {
    double t = shape.base_radius;
    for (int it = 0; it < 200; ++it) {
      const Eigen::Vector3d p = t * n + b;
      const double target = graph_radius(shape, p.normalized());
      // |t n + b| = target  =>  quadratic in t, take the positive root
      const double bn = b.dot(n);
      const double disc = bn * bn - (b.squaredNorm() - target * target);
      if (disc < 0.0) throw ContractError("recenter: ray misses the boundary");
      const double t_new = -bn + std::sqrt(disc);
      if (std::abs(t_new - t) < 1e-14 * shape.base_radius) return t_new;
      t = t_new;
    }
    return t;
  };

  const int lmax = shape.phi.lmax();
  NearlySpherical out;
  out.phi = SphereFunction(d, lmax);
  if (d == 2) {
    const int n = std::max(4096, 8 * lmax);
    double mean = 0.0;
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      vals[static_cast<std::size_t>(i)] = shifted_radius({std::cos(t), std::sin(t), 0.0});
      mean += vals[static_cast<std::size_t>(i)];
    }
    mean /= n;
    out.base_radius = mean;
    for (int k = 1; k <= lmax; ++k) {
      double ca = 0.0, sa = 0.0;
      for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        ca += vals[static_cast<std::size_t>(i)] * std::cos(k * t);
        sa += vals[static_cast<std::size_t>(i)] * std::sin(k * t);
      }
      // trapezoid <f, cos(kt)/sqrt(pi)> over the circle
      out.phi.fourier_cos(k) = ca * (2.0 * kPi / n) / std::sqrt(kPi);
      out.phi.fourier_sin(k) = sa * (2.0 * kPi / n) / std::sqrt(kPi);
    }
  } else {
    const SphereGrid grid = sphere_grid(std::max(32, 2 * lmax + 8), std::max(64, 4 * lmax + 8));
    std::vector<double> vals(grid.dirs.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
      vals[i] = shifted_radius(grid.dirs[i]);
      mean += vals[i] * grid.weights[i];
    }
    out.base_radius = mean / (4.0 * kPi);
    for (int l = 1; l <= lmax; ++l) {
      for (int m = -l; m <= l; ++m) {
        double c = 0.0;
        for (std::size_t i = 0; i < grid.dirs.size(); ++i) {
          c += vals[i] * real_spherical_harmonic(l, m, grid.dirs[i]) * grid.weights[i];
        }
        out.phi.at(l, m) = c;
      }
    }
  }
  validate_shape(Shape{out});
  return out;
}

double isoperimetric_deficit(const Shape& shape) {
  const int d = shape_dimension(shape);
  const double v = volume(shape);
  const double omega = unit_ball_volume(d);
  if (std::abs(v - omega) > 1e-6 * omega)
    throw ContractError("isoperimetric deficit: shape must have unit-ball volume");
  return perimeter(shape) - unit_ball_perimeter(d);
}

Eigen::Vector2d principal_curvatures(const NearlySpherical& shape,
                                     const Eigen::Vector3d& direction) {
  const int d = require_graph_dim(shape);
  const Eigen::Vector3d n = (d == 2)
                                ? Eigen::Vector3d(direction.x(), direction.y(), 0.0).normalized()
                                : direction.normalized();
  if (d == 2) {
    // polar curve r(t): kappa = (r^2 + 2 r'^2 - r r'') / (r^2 + r'^2)^{3/2}
    const double t0 = std::atan2(n.y(), n.x());
    const double h = 1e-4;
    auto r_at = [&](double t) {
      return graph_radius(shape, {std::cos(t), std::sin(t), 0.0});
    };
    const double r = r_at(t0);
    const double rp = (r_at(t0 + h) - r_at(t0 - h)) / (2.0 * h);
    const double rpp = (r_at(t0 + h) - 2.0 * r + r_at(t0 - h)) / (h * h);
    const double kappa =
        (r * r + 2.0 * rp * rp - r * rpp) / std::pow(r * r + rp * rp, 1.5);
    return {kappa, 0.0};
  }
  // local parametrization s(u,v) = R(m) m with m = normalize(n + u e1 + v e2)
  Eigen::Vector3d a = (std::abs(n.z()) < 0.9) ? Eigen::Vector3d::UnitZ()
                                              : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = n.cross(a).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  auto surf = [&](double u, double v) {
    const Eigen::Vector3d m = (n + u * e1 + v * e2).normalized();
    return Eigen::Vector3d(graph_radius(shape, m) * m);
  };
  const double h = 1e-4;
  const Eigen::Vector3d s00 = surf(0.0, 0.0);
  const Eigen::Vector3d su = (surf(h, 0.0) - surf(-h, 0.0)) / (2.0 * h);
  const Eigen::Vector3d sv = (surf(0.0, h) - surf(0.0, -h)) / (2.0 * h);
  const Eigen::Vector3d suu = (surf(h, 0.0) - 2.0 * s00 + surf(-h, 0.0)) / (h * h);
  const Eigen::Vector3d svv = (surf(0.0, h) - 2.0 * s00 + surf(0.0, -h)) / (h * h);
  const Eigen::Vector3d suv =
      (surf(h, h) - surf(h, -h) - surf(-h, h) + surf(-h, -h)) / (4.0 * h * h);
  Eigen::Vector3d nu = su.cross(sv).normalized();
  // inward orientation so the round sphere has curvature +1/R
  if (nu.dot(n) > 0.0) nu = -nu;
  Eigen::Matrix2d I, II;
  I << su.dot(su), su.dot(sv), su.dot(sv), sv.dot(sv);
  II << nu.dot(suu), nu.dot(suv), nu.dot(suv), nu.dot(svv);
  const Eigen::Matrix2d S = I.inverse() * II;
  const double tr = S.trace();
  const double det = S.determinant();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return {tr / 2.0 - disc, tr / 2.0 + disc};
}

bool delta_ball_check(const Shape& shape, double delta) {
  if (delta <= 0.0) throw ContractError("delta ball check: delta must be positive");
  validate_shape(shape);
  const int d = shape_dimension(shape);
  if (const auto* b = std::get_if<Ball>(&shape)) return b->radius >= delta;
  if (const auto* u = std::get_if<BallUnion>(&shape)) {
    for (const Ball& b : u->balls) {
      if (b.radius < delta) return false;
    }
    for (std::size_t i = 0; i < u->balls.size(); ++i) {
      for (std::size_t j = i + 1; j < u->balls.size(); ++j) {
        const double gap = (u->balls[i].center - u->balls[j].center).norm() -
                           u->balls[i].radius - u->balls[j].radius;
        if (gap < 2.0 * delta) return false;
      }
    }
    return true;
  }
  if (std::holds_alternative<Cube>(shape)) return false;
  const NearlySpherical& g = std::get<NearlySpherical>(shape);
  const double bound = 1.0 / delta;
  if (d == 2) {
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / n;
      const Eigen::Vector2d k =
          principal_curvatures(g, {std::cos(t), std::sin(t), 0.0});
      if (std::abs(k[0]) > bound) return false;
    }
    return true;
  }
  const auto dirs = fibonacci_sphere_directions(4000);
  for (int i = 0; i < 4000; ++i) {
    const Eigen::Vector2d k = principal_curvatures(g, dirs.row(i));
    if (std::abs(k[0]) > bound || std::abs(k[1]) > bound) return false;
  }
  return true;
}

double diameter(const Shape& shape) {
  validate_shape(shape);
  const int d = shape_dimension(shape);
  if (const auto* b = std::get_if<Ball>(&shape)) return 2.0 * b->radius;
  if (const auto* u = std::get_if<BallUnion>(&shape)) {
    double best = 0.0;
    for (std::size_t i = 0; i < u->balls.size(); ++i) {
      best = std::max(best, 2.0 * u->balls[i].radius);
      for (std::size_t j = i + 1; j < u->balls.size(); ++j) {
        best = std::max(best, (u->balls[i].center - u->balls[j].center).norm() +
                                  u->balls[i].radius + u->balls[j].radius);
      }
    }
    return best;
  }
  if (const auto* c = std::get_if<Cube>(&shape)) return c->side * std::sqrt(double(d));
  const NearlySpherical& g = std::get<NearlySpherical>(shape);
  const int n = (d == 3) ? 600 : 1024;
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n));
  if (d == 3) {
    const auto dirs = fibonacci_sphere_directions(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d dir = dirs.row(i);
      pts.push_back(graph_radius(g, dir) * dir);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      const Eigen::Vector3d dir(std::cos(t), std::sin(t), 0.0);
      pts.push_back(graph_radius(g, dir) * dir);
    }
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

double diameter_bound(double delta, double m, int d) {
  if (delta <= 0.0 || m <= 0.0) throw ContractError("diameter bound: positive inputs");
  return std::sqrt(static_cast<double>(d)) * std::pow(2.0, d + 2) *
         (m / unit_ball_volume(d)) * std::pow(delta, 1 - d);
}

Shape parse_shape_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = true;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      }
      if (blank) continue;
      throw ConfigError("shape config: expected key = value, got '" + line + "'");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto to_real = [](const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("shape config: bad number for '" + key + "': " + v);
    }
  };
  const auto variant = take("variant");
  if (!variant) throw ConfigError("shape config: missing 'variant'");
  const int dim = static_cast<int>(to_real("dim", take("dim").value_or("3")));

  Shape shape;
  if (*variant == "ball") {
    Ball b;
    b.dimension = dim;
    if (auto r = take("radius")) b.radius = to_real("radius", *r);
    if (auto c = take("center")) {
      std::istringstream cs(*c);
      cs >> b.center.x() >> b.center.y() >> b.center.z();
      if (cs.fail()) throw ConfigError("shape config: center needs 3 numbers");
    }
    shape = b;
  } else if (*variant == "ball_union") {
    BallUnion u;
    const int count = static_cast<int>(to_real("count", take("count").value_or("0")));
    if (count < 1) throw ConfigError("shape config: ball_union needs count >= 1");
    for (int i = 0; i < count; ++i) {
      Ball b;
      b.dimension = dim;
      const std::string prefix = "ball." + std::to_string(i) + ".";
      if (auto r = take(prefix + "radius")) b.radius = to_real(prefix + "radius", *r);
      if (auto c = take(prefix + "center")) {
        std::istringstream cs(*c);
        cs >> b.center.x() >> b.center.y() >> b.center.z();
        if (cs.fail()) throw ConfigError("shape config: center needs 3 numbers");
      }
      u.balls.push_back(b);
    }
    shape = u;
  } else if (*variant == "nearly_spherical") {
    NearlySpherical g;
    const int lmax = static_cast<int>(to_real("lmax", take("lmax").value_or("8")));
    g.phi = SphereFunction(dim, lmax);
    if (auto r = take("base_radius")) g.base_radius = to_real("base_radius", *r);
    for (auto it = kv.begin(); it != kv.end();) {
      if (it->first.rfind("coeff.", 0) == 0) {
        const std::string spec = it->first.substr(6);
        const double val = to_real(it->first, it->second);
        if (dim == 3) {
          const auto dot = spec.find('.');
          if (dot == std::string::npos)
            throw ConfigError("shape config: coeff key needs coeff.<l>.<m>");
          const int l = std::stoi(spec.substr(0, dot));
          const int m = std::stoi(spec.substr(dot + 1));
          g.phi.at(l, m) = val;
        } else {
          // coeff.cos.<k> / coeff.sin.<k>
          const auto dot = spec.find('.');
          if (dot == std::string::npos)
            throw ConfigError("shape config: coeff key needs coeff.cos.<k> or coeff.sin.<k>");
          const std::string kind = spec.substr(0, dot);
          const int k = std::stoi(spec.substr(dot + 1));
          if (kind == "cos")
            g.phi.fourier_cos(k) = val;
          else if (kind == "sin")
            g.phi.fourier_sin(k) = val;
          else
            throw ConfigError("shape config: unknown coeff kind '" + kind + "'");
        }
        it = kv.erase(it);
      } else {
        ++it;
      }
    }
    shape = g;
  } else if (*variant == "cube") {
    Cube c;
    c.dimension = dim;
    if (auto s = take("side")) c.side = to_real("side", *s);
    shape = c;
  } else {
    throw ConfigError("shape config: unknown variant '" + *variant + "'");
  }
  if (!kv.empty()) throw ConfigError("shape config: unknown key '" + kv.begin()->first + "'");
  validate_shape(shape);
  return shape;
}

}  // namespace drops
