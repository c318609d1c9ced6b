#include "bethe/baesolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bethe {

namespace {

// int_0^x arctan(t/k) dt
double arctan_integral(double x, double k) {
  const double r = x / k;
  return x * std::atan(r) - 0.5 * k * std::log1p(r * r);
}

Complex ipow(Complex z, int e) {
  Complex r{1.0, 0.0};
  const Complex base = e < 0 ? 1.0 / z : z;
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return r;
}

void require_positive(const Coupling& k, const char* what) {
  if (k.is_zero()) throw DomainError(std::string(what) + " requires a strictly positive coupling");
}

} // namespace

Coupling Coupling::zero() { return Coupling{}; }

Coupling Coupling::uniform(double k) { return per_class({k}); }

Coupling Coupling::per_class(std::vector<double> values) {
  if (values.empty() || values.size() > 2)
    throw DomainError("coupling needs one or two class values");
  bool all_zero = true;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("coupling values must be finite and >= 0");
    if (v != 0.0) all_zero = false;
  }
  if (all_zero) return zero();
  for (double v : values)
    if (v == 0.0) throw DomainError("coupling must be strictly positive on every class, or zero on all");
  Coupling c;
  c.zero_ = false;
  c.values_ = std::move(values);
  return c;
}

double Coupling::for_class(int c) const {
  if (zero_) return 0.0;
  if (values_.size() == 1) return values_.front();
  if (c < 0 || c >= static_cast<int>(values_.size())) throw DomainError("length class out of range");
  return values_[static_cast<std::size_t>(c)];
}

Vector Coupling::per_root(const RootSystem& rs) const {
  check(rs);
  Vector k(static_cast<Eigen::Index>(rs.num_positive()));
  for (std::size_t i = 0; i < rs.num_positive(); ++i)
    k(static_cast<Eigen::Index>(i)) = for_class(rs.root_class[i]);
  return k;
}

double Coupling::for_wall(const RootSystem& rs, int i) const {
  check(rs);
  return for_class(rs.wall_class(i));
}

Coupling Coupling::scaled(double s) const {
  if (zero_) return *this;
  if (!(s > 0.0)) throw DomainError("coupling scale must be positive");
  auto v = values_;
  for (double& x : v) x *= s;
  return per_class(std::move(v));
}

void Coupling::check(const RootSystem& rs) const {
  if (!zero_ && values_.size() != 1 && static_cast<int>(values_.size()) != rs.num_classes()) {
    throw DomainError(rs.label.str() + " has " + std::to_string(rs.num_classes()) +
                      " root length class(es) but the coupling has " +
                      std::to_string(values_.size()) + " values");
  }
}

double master_value(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                    const Vector& v) {
  double s = 0.5 * v.squaredNorm() - kTwoPi * v.dot(mu.vec);
  if (k.is_zero()) {
    for (const auto& a : rs.positive_roots) s += kPi * std::abs(v.dot(a));
    return s;
  }
  const Vector ka = k.per_root(rs);
  // The sum over R pairs each root with its negative; the integrand is even.
  for (std::size_t i = 0; i < rs.num_positive(); ++i) {
    const double x = v.dot(rs.coroots[i]);
    s += rs.positive_roots[i].squaredNorm() * arctan_integral(x, ka(static_cast<Eigen::Index>(i)));
  }
  return s;
}

Vector sigma(const RootSystem& rs, const Coupling& k, const Vector& lambda) {
  require_positive(k, "sigma");
  const Vector ka = k.per_root(rs);
  Vector s = Vector::Zero(rs.dim);
  for (std::size_t i = 0; i < rs.num_positive(); ++i)
    s += 2.0 * std::atan(lambda.dot(rs.coroots[i]) / ka(static_cast<Eigen::Index>(i))) * rs.positive_roots[i];
  return s;
}

Vector master_grad(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                   const Vector& v) {
  require_positive(k, "master_grad");
  return v - kTwoPi * mu.vec + sigma(rs, k, v);
}

HessianMatrix master_hessian(const RootSystem& rs, const Coupling& k, const Vector& v) {
  require_positive(k, "master_hessian");
  const Vector ka = k.per_root(rs);
  HessianMatrix b = Matrix::Identity(rs.dim, rs.dim);
  for (std::size_t i = 0; i < rs.num_positive(); ++i) {
    const auto& cv = rs.coroots[i];
    const double x = v.dot(cv);
    const double kk = ka(static_cast<Eigen::Index>(i));
    const double w = rs.positive_roots[i].squaredNorm() * kk / (kk * kk + x * x);
    b.noalias() += w * cv * cv.transpose();
  }
  return b;
}

double bae_residual(const RootSystem& rs, const Coupling& k, const Vector& lambda) {
  const std::size_t np = rs.num_positive();
  std::vector<Complex> factor(np, Complex{1.0, 0.0});
  if (!k.is_zero()) {
    const Vector ka = k.per_root(rs);
    for (std::size_t b = 0; b < np; ++b) {
      const double x = lambda.dot(rs.coroots[b]);
      if (std::abs(x) < 1e-8) {
        std::ostringstream os;
        os << "BAE pole: <lambda, beta^vee> = " << x << " for positive root #" << b;
        throw PoleError(os.str(), static_cast<int>(b));
      }
      const double kb = ka(static_cast<Eigen::Index>(b));
      factor[b] = Complex{x, kb} / Complex{x, -kb};
    }
  }
  double worst = 0.0;
  for (int j = 0; j < rs.dim; ++j) {
    const Vector& cj = rs.coroots[static_cast<std::size_t>(j)];
    Complex rhs{1.0, 0.0};
    for (std::size_t b = 0; b < np; ++b) {
      const int e = static_cast<int>(std::lround(cj.dot(rs.positive_roots[b])));
      rhs *= ipow(factor[b], e);
    }
    const Complex lhs = std::exp(Complex{0.0, lambda.dot(cj)});
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

bool in_open_chamber(const RootSystem& rs, const Vector& lambda) {
  const double margin = 1e-12 * std::max(1.0, lambda.norm());
  for (const auto& cv : rs.coroots)
    if (!(lambda.dot(cv) > margin * cv.norm())) return false;
  return true;
}

BaeSolution solve_bae(const RootSystem& rs, const Coupling& k, const DominantWeight& mu,
                      const SolverOptions& opts) {
  k.check(rs);
  if (!mu.is_strictly_dominant()) throw DomainError("solve_bae requires mu in P++ (all coefficients >= 1)");

  BaeSolution sol;
  sol.mu = mu;
  if (k.is_zero()) {
    sol.lambda = kTwoPi * (mu.vec - rs.rho);
    sol.grad_norm = 0.0;
    sol.iterations = 0;
    sol.bae_residual = bae_residual(rs, k, sol.lambda);
    sol.hessian_det = std::numeric_limits<double>::quiet_NaN();
    sol.in_chamber = in_open_chamber(rs, sol.lambda);
    return sol;
  }

  Vector v = opts.start ? *opts.start : Vector(kTwoPi * mu.vec);
  double s = master_value(rs, k, mu, v);
  Vector g = master_grad(rs, k, mu, v);
  int it = 0;
  while (g.norm() > opts.tol) {
    if (it >= opts.max_iter) {
      throw ConvergenceError("Newton iteration cap (" + std::to_string(opts.max_iter) +
                                 ") reached for " + rs.label.str(),
                             v, g.norm(), it);
    }
    ++it;
    const HessianMatrix h = master_hessian(rs, k, v);
    const Vector d = -h.llt().solve(g);
    const double slope = g.dot(d);
    // Once the predicted decrease is at rounding level S cannot resolve the
    // Armijo test; the Newton step is then taken whole.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
    if (-slope <= noise) {
      v += d;
      s = master_value(rs, k, mu, v);
      g = master_grad(rs, k, mu, v);
      sol.trace.push_back({s, g.norm(), 1.0, false});
      continue;
    }
    double t = 1.0;
    double s_new = master_value(rs, k, mu, v + d);
    while (s_new > s + opts.armijo_c * t * slope) {
      t *= opts.backtrack;
      if (t < opts.min_step) {
        throw ConvergenceError("Armijo line search stalled for " + rs.label.str(), v, g.norm(), it);
      }
      s_new = master_value(rs, k, mu, v + t * d);
    }
    v += t * d;
    s = s_new;
    g = master_grad(rs, k, mu, v);
    sol.trace.push_back({s, g.norm(), t, true});
  }
  if (it > 0) {
    const Vector polished = v - master_hessian(rs, k, v).llt().solve(g);
    const Vector gp = master_grad(rs, k, mu, polished);
    if (gp.norm() < g.norm()) {
      v = polished;
      g = gp;
      s = master_value(rs, k, mu, v);
      sol.trace.push_back({s, g.norm(), 1.0, false});
    }
  }

  sol.lambda = v;
  sol.grad_norm = g.norm();
  sol.iterations = it;
  sol.in_chamber = in_open_chamber(rs, v);
  if (opts.certify && !sol.in_chamber) {
    throw CertificateError("minimizer for " + rs.label.str() + " lies outside the open chamber");
  }
  sol.hessian_det = master_hessian(rs, k, v).determinant();
  try {
    sol.bae_residual = bae_residual(rs, k, v);
  } catch (const PoleError&) {
    if (opts.certify) throw;
    sol.bae_residual = std::numeric_limits<double>::infinity();
  }
  if (opts.certify && !(sol.bae_residual <= opts.bae_tol)) {
    std::ostringstream os;
    os << "BAE residual " << sol.bae_residual << " exceeds certificate " << opts.bae_tol;
    throw CertificateError(os.str());
  }
  return sol;
}

std::vector<PathPoint> solve_bae_path(const RootSystem& rs, const std::vector<Coupling>& path,
                                      const DominantWeight& mu, const SolverOptions& opts) {
  std::vector<PathPoint> out;
  SolverOptions o = opts;
  for (const auto& k : path) {
    PathPoint p{k, std::nullopt, {}};
    try {
      p.solution = solve_bae(rs, k, mu, o);
      if (!k.is_zero()) o.start.emplace(p.solution->lambda);
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

} // namespace bethe
