#pragma once

#include <Eigen/Dense>
#include <vector>

namespace drops {

// Real band-limited function on the unit sphere S^{d-1}.
//
// d = 3: fully normalized real spherical harmonics Y_{l,m}, flat index
//        l*l + l + m for l = 0..lmax, m = -l..l (the l = 0 slot exists but
//        shapes keep it at zero).
// d = 2: orthonormal Fourier basis cos(k t)/sqrt(pi), sin(k t)/sqrt(pi),
//        index 2(k-1) for the cosine and 2(k-1)+1 for the sine, k = 1..lmax.
class SphereFunction {
 public:
  SphereFunction() = default;
  SphereFunction(int dimension, int lmax);

  int dimension() const { return dim_; }
  int lmax() const { return lmax_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  double& at(int l, int m);          // d = 3
  double at(int l, int m) const;
  double& fourier_cos(int k);        // d = 2
  double& fourier_sin(int k);

  // Value at a unit direction (z ignored for d = 2).
  double eval(const Eigen::Vector3d& n) const;
  // Tangential gradient, returned as a vector in the tangent plane at n.
  Eigen::Vector3d tangent_gradient(const Eigen::Vector3d& n) const;

  double sup_abs(int n_samples = 4096) const;
  bool is_zero() const;

  SphereFunction scaled(double factor) const;

  // Spectral Sobolev seminorms over l >= 1 with sphere-Laplacian
  // eigenvalues l(l+d-2): returns (L2^2, H1^2, Hs^2) for s = exponent.
  struct Seminorms {
    double l2_sq;
    double h1_sq;
    double hs_sq;
  };
  Seminorms sobolev_seminorms(double s) const;

 private:
  int dim_ = 3;
  int lmax_ = 0;
  std::vector<double> coeffs_;
};

// Normalized associated Legendre P̄_{l,m}(cos theta) for all 0<=m<=l<=lmax,
// such that Y_{l,0} = P̄_{l,0}, Y_{l,m>0} = sqrt(2) P̄_{l,m} cos(m phi).
void normalized_legendre_table(int lmax, double cos_theta,
                               std::vector<std::vector<double>>& out);

// Real orthonormal Y_{l,m}(n) for a single (l, m).
double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& n);

}  // namespace drops
