#pragma once

#include <Eigen/Dense>

#include "drops/measure.hpp"

namespace drops {

enum class KernelFamily { Riesz, Logarithmic };

// Pair interaction kernel: |x-y|^{-alpha} (Riesz, 0 < alpha < d) or
// -log|x-y| (logarithmic, d = 2 only).
struct KernelSpec {
  int dimension = 3;
  KernelFamily family = KernelFamily::Riesz;
  double alpha = 1.0;  // unused for the logarithmic family

  static KernelSpec riesz(int d, double alpha);
  static KernelSpec logarithmic();

  bool is_riesz() const { return family == KernelFamily::Riesz; }
};

double eval_kernel(const KernelSpec& spec, const Eigen::Vector3d& x,
                   const Eigen::Vector3d& y);

// v^mu(x) = sum_i w_i k(x, x_i). Throws SingularityError if x coincides
// with a node (Riesz).
double potential(const KernelSpec& spec, const DiscreteMeasure& mu,
                 const Eigen::Vector3d& x);

// Bilinear energy sum_{ij} w_i u_j k(x_i, y_j). Supports must share no
// coincident node pair (Riesz).
double interaction_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu);

// Quadratic self-energy of a quadrature measure with patch areas:
// off-diagonal double sum plus the per-node diagonal correction of
// diagonal_term(). Approximates I_alpha(mu) for surface/volume densities.
double self_energy_quadrature(const KernelSpec& spec, const DiscreteMeasure& mu);

// Diagonal self-interaction of one node of unit weight over a patch of the
// given area (surface patches) or volume (cells). The lattice constant is
// calibrated once per (family, d, alpha, kind) against the analytic energy
// of a uniform reference measure on the matching lattice, then cached.
double diagonal_term(const KernelSpec& spec, PatchKind kind, double patch_area);

// The cached calibration constant itself (see diagonal_term).
double diagonal_coefficient(const KernelSpec& spec, PatchKind kind);

// Analytic energies of uniform reference measures, used as calibration
// targets and as oracles in tests.
// Uniform probability measure on the unit sphere/circle (alpha < d-1).
double uniform_sphere_riesz_energy(int d, double alpha);
// Uniform probability measure on the unit ball/disk (alpha < d).
double uniform_ball_riesz_energy(int d, double alpha);
// Equilibrium energy I_alpha(B_1) of the unit ball: boundary value for
// alpha <= d-2, interior closed form for alpha > d-2.
double ball_riesz_equilibrium_energy(int d, double alpha);

}  // namespace drops
