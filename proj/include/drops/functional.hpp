#pragma once

#include "drops/equilibrium.hpp"
#include "drops/geometry.hpp"
#include "drops/kernel.hpp"

namespace drops {

struct FunctionalReport {
  double perimeter = 0.0;
  double riesz_energy = 0.0;  // equilibrium energy of the admissible class
  double charge = 0.0;
  double total = 0.0;         // perimeter + Q^2 * riesz_energy
  double deficit = 0.0;       // P(E) - P(ball of same volume)
  double normalized_charge = 0.0;
  double el_spread = 0.0;
  double el_violation = 0.0;
  int solver_iterations = 0;
};

// F(E) = P(E) + Q^2 I_alpha(E). The equilibrium is solved over boundary
// nodes for alpha <= d-2 and over a 1:3 boundary:interior node set for
// alpha > d-2.
FunctionalReport evaluate_F(const Shape& shape, const KernelSpec& spec,
                            double charge, int n_nodes);

// G(E) = P(E) + Q^2 I_alpha(boundary of E): measure constrained to boundary
// nodes for every alpha; requires alpha < d-1 for finiteness.
FunctionalReport evaluate_G(const Shape& shape, const KernelSpec& spec,
                            double charge, int n_nodes);

// Q / m^{(d-1+alpha)/(2d)}, the scale-invariant charge.
double normalized_charge(double charge, double mass, int d, double alpha);

// Lower bound for connected K_delta sets of volume m:
// (m/omega_d)^{(d-1)/d} P(B) + (sqrt(d) 2^{d+2})^{-alpha} (m/omega_d)^{-alpha}
//   * Q^2 delta^{(d-1)alpha}.
double connected_lower_bound(double delta, double m, double charge, int d,
                             double alpha);

}  // namespace drops
