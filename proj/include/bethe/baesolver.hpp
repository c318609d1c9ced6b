#pragma once

#include <optional>
#include <vector>

#include "bethe/common.hpp"
#include "bethe/rootsys.hpp"

namespace bethe {

/// Repulsive coupling k_alpha, constant on each root-length class, or the
/// boundary point k = 0.
class Coupling {
public:
  /// k = 0 (free Laplacian with Neumann walls).
  static Coupling zero();
  /// The same value on every length class.
  static Coupling uniform(double k);
  /// One value per length class in RootSystem::length_classes order (short
  /// first). A single value is broadcast.
  static Coupling per_class(std::vector<double> values);

  bool is_zero() const noexcept { return zero_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// k for length class c (0 for the zero coupling).
  double for_class(int c) const;
  /// k_alpha for each positive root of rs.
  Vector per_root(const RootSystem& rs) const;
  /// k_{alpha_i} for the wall V_i, i = 0..n.
  double for_wall(const RootSystem& rs, int i) const;

  /// Multiplies every class value by s > 0.
  Coupling scaled(double s) const;

  /// Throws DomainError if the class count does not fit rs.
  void check(const RootSystem& rs) const;

private:
  bool zero_ = true;
  std::vector<double> values_;
};

/// Hessian B^k_v of S_k(mu, .) at v; symmetric positive definite.
using HessianMatrix = Matrix;

struct SolverOptions {
  double tol = 1e-12;       ///< gradient 2-norm at termination
  double bae_tol = 1e-9;    ///< BAE residual certificate
  int max_iter = 500;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double min_step = 1e-12;
  std::optional<Vector> start; ///< default 2 pi mu
  /// Throw CertificateError on chamber/BAE failure; when false the flags are
  /// only recorded in the solution.
  bool certify = true;
};

struct NewtonStep {
  double value;     ///< S at the accepted iterate
  double grad_norm; ///< gradient norm at the accepted iterate
  double step;      ///< accepted step length
  bool armijo;      ///< false when the step was taken at rounding level
};

struct BaeSolution {
  DominantWeight mu;
  Vector lambda;
  double grad_norm = 0.0;
  int iterations = 0;
  double bae_residual = 0.0;
  /// det B at lambda; NaN at zero coupling where B is undefined.
  double hessian_det = 0.0;
  bool in_chamber = false;
  std::vector<NewtonStep> trace;
};

/// S_k(mu, v). Uses the closed form of the arctan integral; at zero coupling
/// evaluates the non-smooth limit 1/2|v|^2 - 2pi<v,mu> + pi sum_{R+} |<v,a>|.
double master_value(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                    const Vector& v);

/// v - 2 pi mu + sigma_v^k. Requires k > 0.
Vector master_grad(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                   const Vector& v);

/// I + sum_{R+} |a|^2 k_a / (k_a^2 + <v,a^vee>^2) a^vee (a^vee)^T. Requires k > 0.
HessianMatrix master_hessian(const RootSystem& rs, const Coupling& k, const Vector& v);

/// sigma_lambda^k = 2 sum_{R+} arctan(<lambda,a^vee>/k_a) a. Requires k > 0.
Vector sigma(const RootSystem& rs, const Coupling& k, const Vector& lambda);

/// max_j |exp(i<lambda,a_j^vee>) - prod_{R+} ((x_b + i k_b)/(x_b - i k_b))^{<a_j^vee, b>}|.
/// Throws PoleError when some |<lambda, b^vee>| < 1e-8 and k > 0. At zero
/// coupling every factor is 1.
double bae_residual(const RootSystem& rs, const Coupling& k, const Vector& lambda);

/// True when <lambda, a^vee> > 0 for all positive roots, beyond a rounding
/// margin of 1e-12 max(1, |lambda|) |a^vee|.
bool in_open_chamber(const RootSystem& rs, const Vector& lambda);

/// Minimizes S_k(mu, .) by damped Newton with Armijo backtracking.
///
/// Throws ConvergenceError when max_iter is hit and CertificateError when the
/// minimizer is outside the open chamber or misses bae_tol. At zero coupling
/// returns the closed form 2 pi (mu - rho) without iterating.
BaeSolution solve_bae(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                      const SolverOptions& opts = {});

/// One entry of a continuation path: the solution or the error message.
struct PathPoint {
  Coupling coupling;
  std::optional<BaeSolution> solution;
  std::string error;
};

/// Solves along a coupling sequence, warm-starting each solve from the
/// previous minimizer. A failed point is recorded and the next one restarts
/// from the last successful iterate.
std::vector<PathPoint> solve_bae_path(const RootSystem& rs, const std::vector<Coupling>& path,
                                      const DominantWeight& mu, const SolverOptions& opts = {});

} // namespace bethe
