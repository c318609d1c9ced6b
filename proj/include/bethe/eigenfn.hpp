#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "bethe/baesolver.hpp"
#include "bethe/common.hpp"
#include "bethe/rootsys.hpp"

namespace bethe {

/// Pairings below this magnitude are treated as c-function poles.
inline constexpr double kPoleThreshold = 1e-8;

/// c_k(lambda) = prod_{R+} (<lambda,a^vee> - i k_a) / <lambda,a^vee>.
/// Identically 1 at zero coupling.
Complex c_fun(const RootSystem& rs, const Coupling& k, const Vector& lambda);

/// Weyl-symmetrized plane wave
///   phi(v) = (1/#W) sum_w c_k(w lambda) exp(i <w lambda, v>).
/// Coefficients are computed once at construction; summation follows the
/// enumeration order of the Weyl group.
class BetheFunction {
public:
  BetheFunction(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k, Vector lambda);

  const Vector& lambda() const noexcept { return lambda_; }
  const Coupling& coupling() const noexcept { return k_; }
  /// Eigenvalue of -Laplace, |lambda|^2.
  double eigenvalue() const noexcept { return lambda_.squaredNorm(); }

  const std::vector<Vector>& orbit() const noexcept { return orbit_; }
  const std::vector<Complex>& coefficients() const noexcept { return coeff_; }

  Complex operator()(const Vector& v) const;
  Complex directional_derivative(const Vector& v, const Vector& eta) const;
  /// Analytic Laplacian, equal to -|lambda|^2 phi(v).
  Complex laplacian(const Vector& v) const;

private:
  Vector lambda_;
  Coupling k_;
  std::vector<Vector> orbit_;
  std::vector<Complex> coeff_;
};

Complex phi_eval(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                 const Vector& lambda, const Vector& v);

Complex phi_directional_derivative(const RootSystem& rs, const WeylGroup& weyl,
                                   const Coupling& k, const Vector& lambda, const Vector& v,
                                   const Vector& eta);

/// phi^0_lambda with lambda = 2 pi (mu - rho).
Complex free_phi(const RootSystem& rs, const WeylGroup& weyl, const DominantWeight& mu,
                 const Vector& v);

/// A point on wall V_i of the closed alcove with its inward normal alpha_i^vee.
struct WallSample {
  int wall = 0;
  Vector point;
  Vector normal;
};

/// max over samples of |d_{alpha_i^vee} phi(v) - k_{alpha_i} phi(v)|.
double boundary_residual(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                         const Vector& lambda, std::span<const WallSample> samples);

/// Same, reported separately for walls 0..n (entries for walls without samples are 0).
std::vector<double> boundary_residual_per_wall(const RootSystem& rs, const BetheFunction& fn,
                                               std::span<const WallSample> samples);

/// Five-point-per-axis central difference of the Laplacian along an
/// orthonormal basis.
Complex laplacian_fd(const BetheFunction& fn, const Vector& v, double h = 1e-4);

/// max over points of |-Delta_h phi - |lambda|^2 phi| / max(1, |lambda|^2 max|phi|).
double interior_pde_residual(const BetheFunction& fn, std::span<const Vector> points,
                             double h = 1e-4);

/// CSV with columns v_1..v_n,re,im.
void write_grid_csv(std::ostream& os, const BetheFunction& fn, std::span<const Vector> points);

} // namespace bethe
