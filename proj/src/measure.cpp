#include "drops/measure.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "drops/errors.hpp"
#include "drops/summation.hpp"

namespace drops {

namespace {

constexpr double kPi = std::numbers::pi;

void format_real(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf;
}

}  // namespace

double DiscreteMeasure::total_mass() const {
  std::vector<double> w(weights.data(), weights.data() + weights.size());
  return pairwise_sum(w);
}

void DiscreteMeasure::validate() const {
  const int n = size();
  if (n < 1) throw ContractError("measure: needs at least one node");
  if (weights.size() != n) throw ContractError("measure: weight/node size mismatch");
  if (patch_areas.size() != 0 && patch_areas.size() != n)
    throw ContractError("measure: patch area size mismatch");
  if (!patch_kinds.empty() && static_cast<int>(patch_kinds.size()) != n)
    throw ContractError("measure: patch kind size mismatch");
  for (int i = 0; i < static_cast<int>(patch_areas.size()); ++i) {
    if (!(patch_areas[i] > 0.0)) throw ContractError("measure: nonpositive patch area");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((nodes.row(i) - nodes.row(j)).norm() == 0.0)
        throw ContractError("measure: duplicate nodes");
    }
  }
}

Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_sphere_directions(int n) {
  if (n < 1) throw ContractError("fibonacci lattice: n >= 1 required");
  Eigen::Matrix<double, Eigen::Dynamic, 3> dirs(n, 3);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * i;
    dirs.row(i) << r * std::cos(t), r * std::sin(t), z;
  }
  return dirs;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> unit_ball_lattice(int d, int n) {
  if (d != 2 && d != 3) throw ContractError("ball lattice: d must be 2 or 3");
  if (n < 1) throw ContractError("ball lattice: n >= 1 required");
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(n, 3);
  if (d == 2) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double r = std::sqrt((i + 0.5) / n);
      const double t = golden * i;
      pts.row(i) << r * std::cos(t), r * std::sin(t), 0.0;
    }
    return pts;
  }
  // base-2 radical inverse keeps the volume fraction uncorrelated with the
  // direction index (which already drives z and the golden angle)
  auto radical_inverse = [](unsigned k) {
    double inv = 0.0, base = 0.5;
    while (k > 0) {
      if (k & 1u) inv += base;
      base *= 0.5;
      k >>= 1u;
    }
    return inv;
  };
  const auto dirs = fibonacci_sphere_directions(n);
  for (int i = 0; i < n; ++i) {
    const double r = std::cbrt(radical_inverse(static_cast<unsigned>(i) + 1u));
    pts.row(i) = r * dirs.row(i);
  }
  return pts;
}

DiscreteMeasure uniform_sphere_measure(int d, double radius, int n_nodes) {
  if (d != 2 && d != 3) throw ContractError("uniform_sphere_measure: d must be 2 or 3");
  if (!(radius > 0.0)) throw ContractError("uniform_sphere_measure: radius > 0 required");
  if (n_nodes < 12) throw ContractError("uniform_sphere_measure: N >= 12 required");

  DiscreteMeasure mu;
  mu.dimension = d;
  mu.nodes.resize(n_nodes, 3);
  if (d == 3) {
    mu.nodes = radius * fibonacci_sphere_directions(n_nodes);
  } else {
    for (int i = 0; i < n_nodes; ++i) {
      const double t = 2.0 * kPi * (i + 0.5) / n_nodes;
      mu.nodes.row(i) << radius * std::cos(t), radius * std::sin(t), 0.0;
    }
  }
  mu.weights = Eigen::VectorXd::Constant(n_nodes, 1.0 / n_nodes);
  const double surface = (d == 3) ? 4.0 * kPi * radius * radius : 2.0 * kPi * radius;
  mu.patch_areas = Eigen::VectorXd::Constant(n_nodes, surface / n_nodes);
  mu.patch_kinds.assign(static_cast<std::size_t>(n_nodes), PatchKind::Surface);
  return mu;
}

DiscreteMeasure ball_interior_measure(int d, double alpha, int n_nodes) {
  if (d != 2 && d != 3) throw ContractError("ball_interior_measure: d must be 2 or 3");
  if (!(alpha > d - 2 && alpha < d))
    throw ContractError("ball_interior_measure: requires d-2 < alpha < d");
  if (n_nodes < 16) throw ContractError("ball_interior_measure: N >= 16 required");

  // density(r) = (1 - r^2)^{-(d-alpha)/2}; radial shells of width h, the
  // outermost node clipped at 1 - h/2 while its weight integrates the full
  // edge shell, so no boundary-layer mass is lost.
  const double expo = -(d - alpha) / 2.0;
  auto radial_mass = [&](double a, double b) {
    // \int_a^b r^{d-1} (1-r^2)^{expo} dr by transformed quadrature (exact
    // handling of the r = 1 endpoint via u = 1 - r^2 substitution).
    const int n_quad = 256;
    KahanAccumulator acc;
    const double ua = 1.0 - a * a, ub = 1.0 - b * b;
    // integrate in u from ub..ua: r^{d-2}/2 * u^{expo} du, with
    // u^{expo} handled by a power-law graded grid toward u = 0.
    const double p = 1.0 / (1.0 + expo);  // expo in (-1,0) so p > 1
    const double sa = std::pow(ua, 1.0 / p), sb = std::pow(ub, 1.0 / p);
    for (int i = 0; i < n_quad; ++i) {
      const double s = sb + (sa - sb) * (i + 0.5) / n_quad;
      const double u = std::pow(s, p);
      const double r = std::sqrt(std::max(0.0, 1.0 - u));
      const double du_ds = p * std::pow(s, p - 1.0);
      const double rpow = (d == 3) ? r : 1.0;
      acc.add(0.5 * rpow * std::pow(u, expo) * du_ds * (sa - sb) / n_quad);
    }
    return acc.value();
  };

  const int n_shells = std::max(4, static_cast<int>(std::round(
                                       std::cbrt(static_cast<double>(n_nodes)))));
  const double h = 1.0 / n_shells;

  std::vector<double> shell_mass(n_shells), shell_radius(n_shells);
  std::vector<int> shell_nodes(n_shells);
  double area_total = 0.0;
  for (int k = 0; k < n_shells; ++k) {
    const double a = k * h, b = (k + 1) * h;
    shell_mass[k] = radial_mass(a, b);
    shell_radius[k] = std::min(0.5 * (a + b), 1.0 - 0.5 * h);
    area_total += std::pow(shell_radius[k], d - 1);
  }
  int assigned = 0;
  for (int k = 0; k < n_shells; ++k) {
    shell_nodes[k] = std::max(
        1, static_cast<int>(std::round(n_nodes * std::pow(shell_radius[k], d - 1) /
                                       area_total)));
    assigned += shell_nodes[k];
  }
  shell_nodes[n_shells - 1] += n_nodes - assigned;
  if (shell_nodes[n_shells - 1] < 1) shell_nodes[n_shells - 1] = 1;

  int total = 0;
  for (int k = 0; k < n_shells; ++k) total += shell_nodes[k];

  DiscreteMeasure mu;
  mu.dimension = d;
  mu.nodes.resize(total, 3);
  mu.weights.resize(total);
  mu.patch_areas.resize(total);
  mu.patch_kinds.assign(static_cast<std::size_t>(total), PatchKind::Cell);

  const double omega_d = (d == 3) ? 4.0 * kPi / 3.0 : kPi;
  int row = 0;
  for (int k = 0; k < n_shells; ++k) {
    const int nk = shell_nodes[k];
    const double rk = shell_radius[k];
    const double a = k * h, b = (k + 1) * h;
    const double shell_volume =
        omega_d * (std::pow(b, d) - std::pow(a, d));
    Eigen::Matrix<double, Eigen::Dynamic, 3> dirs;
    if (d == 3) {
      dirs = fibonacci_sphere_directions(nk);
      // stagger shells so radial node columns do not align
      const double rot = 2.399963229728653 * k;
      for (int i = 0; i < nk; ++i) {
        const double x = dirs(i, 0), y = dirs(i, 1);
        dirs(i, 0) = x * std::cos(rot) - y * std::sin(rot);
        dirs(i, 1) = x * std::sin(rot) + y * std::cos(rot);
      }
    } else {
      dirs.resize(nk, 3);
      for (int i = 0; i < nk; ++i) {
        const double t = 2.0 * kPi * (i + 0.5) / nk + 0.37 * k;
        dirs.row(i) << std::cos(t), std::sin(t), 0.0;
      }
    }
    for (int i = 0; i < nk; ++i) {
      mu.nodes.row(row) = rk * dirs.row(i);
      mu.weights[row] = shell_mass[k] / nk;
      mu.patch_areas[row] = shell_volume / nk;
      ++row;
    }
  }
  // normalize to unit mass (the renormalization constant, computed
  // numerically via the radial quadrature above)
  const double mass = mu.total_mass();
  if (!(mass > 0.0)) throw ContractError("ball_interior_measure: degenerate mass");
  mu.weights /= mass;
  return mu;
}

DiscreteMeasure rescale_measure(const DiscreteMeasure& mu, double lambda) {
  if (!(lambda > 0.0)) throw ContractError("rescale_measure: lambda > 0 required");
  DiscreteMeasure out = mu;
  out.nodes *= lambda;
  if (out.patch_areas.size() > 0) {
    for (int i = 0; i < out.size(); ++i) {
      const int codim = (out.kind_of(i) == PatchKind::Surface) ? 1 : 0;
      out.patch_areas[i] *= std::pow(lambda, mu.dimension - codim);
    }
  }
  return out;
}

DiscreteMeasure normalize(const DiscreteMeasure& mu) {
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] < 0.0) throw ContractError("normalize: negative weight");
  }
  const double mass = mu.total_mass();
  if (!(mass > 0.0)) throw ContractError("normalize: total mass must be positive");
  DiscreteMeasure out = mu;
  out.weights /= mass;
  return out;
}

DiscreteMeasure concat_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dimension != b.dimension)
    throw ContractError("concat_measures: dimension mismatch");
  DiscreteMeasure out;
  out.dimension = a.dimension;
  const int n = a.size() + b.size();
  out.nodes.resize(n, 3);
  out.nodes.topRows(a.size()) = a.nodes;
  out.nodes.bottomRows(b.size()) = b.nodes;
  out.weights.resize(n);
  out.weights << a.weights, b.weights;
  const bool areas = a.has_patch_areas() && b.has_patch_areas();
  if (areas) {
    out.patch_areas.resize(n);
    out.patch_areas << a.patch_areas, b.patch_areas;
  }
  out.patch_kinds.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < a.size(); ++i) out.patch_kinds.push_back(a.kind_of(i));
  for (int i = 0; i < b.size(); ++i) out.patch_kinds.push_back(b.kind_of(i));
  return out;
}

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu) {
  os << "x,y,z,weight,patch_area\n";
  for (int i = 0; i < mu.size(); ++i) {
    format_real(os, mu.nodes(i, 0));
    os << ',';
    format_real(os, mu.nodes(i, 1));
    os << ',';
    format_real(os, mu.nodes(i, 2));
    os << ',';
    format_real(os, mu.weights[i]);
    os << ',';
    format_real(os, mu.has_patch_areas() ? mu.patch_areas[i] : 0.0);
    os << '\n';
  }
}

DiscreteMeasure read_measure_csv(std::istream& is, int dimension) {
  std::string line;
  std::getline(is, line);  // header
  std::vector<std::array<double, 5>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 5> row{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 5; ++c) {
      if (!std::getline(ss, cell, ',')) throw ContractError("measure csv: short row");
      row[static_cast<std::size_t>(c)] = std::stod(cell);
    }
    rows.push_back(row);
  }
  DiscreteMeasure mu;
  mu.dimension = dimension;
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw ContractError("measure csv: empty");
  mu.nodes.resize(n, 3);
  mu.weights.resize(n);
  mu.patch_areas.resize(n);
  bool any_area = false;
  for (int i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    mu.nodes.row(i) << r[0], r[1], r[2];
    mu.weights[i] = r[3];
    mu.patch_areas[i] = r[4];
    if (r[4] > 0.0) any_area = true;
  }
  if (!any_area) mu.patch_areas.resize(0);
  return mu;
}

}  // namespace drops
