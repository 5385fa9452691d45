#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "drops/functional.hpp"
#include "drops/geometry.hpp"

namespace drops {

// One row of a parameter sweep: ordered key-value triples so CSV output is
// deterministic and every record regenerates itself.
struct SweepRecord {
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, bool>> verdicts;

  void param(const std::string& k, double v) { params.emplace_back(k, v); }
  void value(const std::string& k, double v) { values.emplace_back(k, v); }
  void verdict(const std::string& k, bool v) { verdicts.emplace_back(k, v); }
  double get_value(const std::string& k) const;
  bool get_verdict(const std::string& k) const;
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);

// Droplet-cloud competitor of the non-existence construction: N balls of
// radius N^{-beta} carrying charge Q/N each (cross terms dropped) plus an
// uncharged reservoir ball. Closed-form energy per N in n_list.
std::vector<SweepRecord> nonexistence_sweep(int d, double alpha, double m,
                                            double charge, double beta,
                                            const std::vector<int>& n_list);

// Split-ball competitor vs. the connected lower bound: N ~ delta^{-d} equal
// balls of radius ~delta, total volume omega_d, equally charged.
SweepRecord splitting_construction(int d, double alpha, double delta,
                                   double charge);

// F(E) - F(B) over nearly-spherical perturbations (d = 3, alpha = 1).
// One record per (Q, mode, amplitude); shapes violating the graph or
// delta-ball conditions are skipped (record carries skipped = true).
std::vector<SweepRecord> stability_sweep(double delta,
                                         const std::vector<double>& charges,
                                         const std::vector<int>& modes,
                                         const std::vector<double>& amplitudes,
                                         int n_nodes);

// Ratio (I^{dB}(fbar) - I^{dE}(f)) / (||f||_inf^2 D(E)) for the solved
// boundary equilibrium density f on a nearly-spherical shape.
SweepRecord mainstab_check(const NearlySpherical& shape, int n_nodes);

// Max absolute error of the exact expansion
// |R(x)x - R(y)y|^2 = |x-y|^2 (1 + phi(x) + phi(y) + phi(x)phi(y) + psi)
// over random unit vectors and graph values.
double expansion_identity_check(int num_trials, unsigned seed = 1234);

// Equilibrium density profile on the square boundary (d = 2, log kernel):
// corner blow-up witness.
SweepRecord corner_blowup_study(double side, int n_nodes);

// (a) two-disk energy decay in separation (slope of the cross term), and
// (b) the scaling identity I_log(lambda E) = I_log(E) - log(lambda).
std::vector<SweepRecord> log_divergence_and_scaling(
    double radius, const std::vector<double>& separations,
    const std::vector<double>& lambdas);

// Least-squares fit through the origin of y against x; used for the suite
// constants (Fuglede c0, mainstab C).
double fit_through_origin(const std::vector<double>& x,
                          const std::vector<double>& y);

}  // namespace drops
