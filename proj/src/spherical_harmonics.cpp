#include "drops/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>

#include "drops/errors.hpp"
#include "drops/measure.hpp"

namespace drops {

namespace {

constexpr double kPi = std::numbers::pi;

int sh_index(int l, int m) { return l * l + l + m; }

}  // namespace

void normalized_legendre_table(int lmax, double cos_theta,
                               std::vector<std::vector<double>>& out) {
  // P̄_{l,m} with \int_{S^2} P̄_{l,0}^2 = 1 and Y_{l,|m|>0} = sqrt(2) P̄ cos/sin.
  const double x = cos_theta;
  const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
  out.assign(static_cast<std::size_t>(lmax + 1),
             std::vector<double>(static_cast<std::size_t>(lmax + 1), 0.0));
  out[0][0] = std::sqrt(1.0 / (4.0 * kPi));
  if (lmax == 0) return;
  // sectoral recurrence P̄_{m,m}
  for (int m = 1; m <= lmax; ++m) {
    out[static_cast<std::size_t>(m)][static_cast<std::size_t>(m)] =
        -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx *
        out[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(m - 1)];
  }
  for (int m = 0; m < lmax; ++m) {
    out[static_cast<std::size_t>(m + 1)][static_cast<std::size_t>(m)] =
        std::sqrt(2.0 * m + 3.0) * x *
        out[static_cast<std::size_t>(m)][static_cast<std::size_t>(m)];
  }
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) /
                                 (static_cast<double>(l * l) - m * m));
      const double b = std::sqrt(
          ((2.0 * l + 1.0) * ((l - 1.0) * (l - 1.0) - m * m)) /
          ((2.0 * l - 3.0) * (static_cast<double>(l * l) - m * m)));
      out[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)] =
          a * x * out[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(m)] -
          b * out[static_cast<std::size_t>(l - 2)][static_cast<std::size_t>(m)];
    }
  }
}

double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& n) {
  if (l < 0 || std::abs(m) > l) throw ContractError("spherical harmonic: |m| <= l");
  static thread_local std::vector<std::vector<double>> table;
  const Eigen::Vector3d u = n.normalized();
  normalized_legendre_table(l, u.z(), table);
  const double phi = std::atan2(u.y(), u.x());
  const std::size_t lu = static_cast<std::size_t>(l);
  if (m == 0) return table[lu][0];
  const std::size_t mu = static_cast<std::size_t>(std::abs(m));
  const double base = std::numbers::sqrt2 * table[lu][mu];
  return (m > 0) ? base * std::cos(m * phi) : base * std::sin(-m * phi);
}

SphereFunction::SphereFunction(int dimension, int lmax) : dim_(dimension), lmax_(lmax) {
  if (dimension != 2 && dimension != 3)
    throw ContractError("sphere function: d must be 2 or 3");
  if (lmax < 0) throw ContractError("sphere function: lmax >= 0");
  const std::size_t n = (dimension == 3)
                            ? static_cast<std::size_t>((lmax + 1) * (lmax + 1))
                            : static_cast<std::size_t>(2 * lmax);
  coeffs_.assign(n, 0.0);
}

double& SphereFunction::at(int l, int m) {
  if (dim_ != 3) throw ContractError("sphere function: (l,m) indexing is d=3 only");
  if (l < 1 || l > lmax_ || std::abs(m) > l)
    throw ContractError("sphere function: harmonic index out of range");
  return coeffs_[static_cast<std::size_t>(sh_index(l, m))];
}

double SphereFunction::at(int l, int m) const {
  return const_cast<SphereFunction*>(this)->at(l, m);
}

double& SphereFunction::fourier_cos(int k) {
  if (dim_ != 2) throw ContractError("sphere function: fourier indexing is d=2 only");
  if (k < 1 || k > lmax_) throw ContractError("sphere function: fourier index range");
  return coeffs_[static_cast<std::size_t>(2 * (k - 1))];
}

double& SphereFunction::fourier_sin(int k) {
  if (dim_ != 2) throw ContractError("sphere function: fourier indexing is d=2 only");
  if (k < 1 || k > lmax_) throw ContractError("sphere function: fourier index range");
  return coeffs_[static_cast<std::size_t>(2 * (k - 1) + 1)];
}

double SphereFunction::eval(const Eigen::Vector3d& n) const {
  if (dim_ == 2) {
    const double t = std::atan2(n.y(), n.x());
    double v = 0.0;
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    for (int k = 1; k <= lmax_; ++k) {
      v += coeffs_[static_cast<std::size_t>(2 * (k - 1))] * inv_sqrt_pi * std::cos(k * t);
      v += coeffs_[static_cast<std::size_t>(2 * (k - 1) + 1)] * inv_sqrt_pi * std::sin(k * t);
    }
    return v;
  }
  static thread_local std::vector<std::vector<double>> table;
  const Eigen::Vector3d u = n.normalized();
  normalized_legendre_table(lmax_, u.z(), table);
  const double phi = std::atan2(u.y(), u.x());
  double v = 0.0;
  for (int l = 1; l <= lmax_; ++l) {
    const std::size_t lu = static_cast<std::size_t>(l);
    v += coeffs_[static_cast<std::size_t>(sh_index(l, 0))] * table[lu][0];
    for (int m = 1; m <= l; ++m) {
      const double base = std::numbers::sqrt2 * table[lu][static_cast<std::size_t>(m)];
      const double cp = coeffs_[static_cast<std::size_t>(sh_index(l, m))];
      const double cm = coeffs_[static_cast<std::size_t>(sh_index(l, -m))];
      if (cp != 0.0) v += cp * base * std::cos(m * phi);
      if (cm != 0.0) v += cm * base * std::sin(m * phi);
    }
  }
  return v;
}

Eigen::Vector3d SphereFunction::tangent_gradient(const Eigen::Vector3d& n) const {
  // central differences along an orthonormal tangent frame; pole-safe and
  // accurate to ~1e-10 for the band limits used here
  const Eigen::Vector3d u = n.normalized();
  Eigen::Vector3d a = (std::abs(u.z()) < 0.9) ? Eigen::Vector3d::UnitZ()
                                              : Eigen::Vector3d::UnitX();
  if (dim_ == 2) a = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d e1 = u.cross(a).normalized();
  const double h = 1e-5;
  const double d1 = (eval(u + h * e1) - eval(u - h * e1)) / (2.0 * h);
  if (dim_ == 2) return d1 * e1;
  const Eigen::Vector3d e2 = u.cross(e1);
  const double d2 = (eval(u + h * e2) - eval(u - h * e2)) / (2.0 * h);
  return d1 * e1 + d2 * e2;
}

double SphereFunction::sup_abs(int n_samples) const {
  double best = 0.0;
  if (dim_ == 2) {
    for (int i = 0; i < n_samples; ++i) {
      const double t = 2.0 * kPi * i / n_samples;
      best = std::max(best, std::abs(eval({std::cos(t), std::sin(t), 0.0})));
    }
    return best;
  }
  const auto dirs = fibonacci_sphere_directions(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    best = std::max(best, std::abs(eval(dirs.row(i))));
  }
  return best;
}

bool SphereFunction::is_zero() const {
  for (double c : coeffs_) {
    if (c != 0.0) return false;
  }
  return true;
}

SphereFunction SphereFunction::scaled(double factor) const {
  SphereFunction out = *this;
  for (double& c : out.coeffs_) c *= factor;
  return out;
}

SphereFunction::Seminorms SphereFunction::sobolev_seminorms(double s) const {
  Seminorms out{0.0, 0.0, 0.0};
  auto add = [&](int l, double c) {
    const double ev = static_cast<double>(l) * (l + dim_ - 2);
    out.l2_sq += c * c;
    out.h1_sq += ev * c * c;
    out.hs_sq += std::pow(ev, s) * c * c;
  };
  if (dim_ == 2) {
    for (int k = 1; k <= lmax_; ++k) {
      add(k, coeffs_[static_cast<std::size_t>(2 * (k - 1))]);
      add(k, coeffs_[static_cast<std::size_t>(2 * (k - 1) + 1)]);
    }
    return out;
  }
  for (int l = 1; l <= lmax_; ++l) {
    for (int m = -l; m <= l; ++m) {
      add(l, coeffs_[static_cast<std::size_t>(sh_index(l, m))]);
    }
  }
  return out;
}

}  // namespace drops
