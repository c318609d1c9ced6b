#include "bethe/eigenfn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace bethe {

Complex c_fun(const RootSystem& rs, const Coupling& k, const Vector& lambda) {
  if (k.is_zero()) return {1.0, 0.0};
  const Vector ka = k.per_root(rs);
  Complex c{1.0, 0.0};
  for (std::size_t i = 0; i < rs.num_positive(); ++i) {
    const double x = lambda.dot(rs.coroots[i]);
    if (std::abs(x) < kPoleThreshold) {
      std::ostringstream os;
      os << "c-function pole: <lambda, alpha^vee> = " << x << " for positive root #" << i;
      throw PoleError(os.str(), static_cast<int>(i));
    }
    c *= Complex{x, -ka(static_cast<Eigen::Index>(i))} / x;
  }
  return c;
}

BetheFunction::BetheFunction(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                             Vector lambda)
    : lambda_(std::move(lambda)), k_(k) {
  const double inv = 1.0 / static_cast<double>(weyl.order());
  orbit_.reserve(weyl.order());
  coeff_.reserve(weyl.order());
  for (const auto& w : weyl.elements) {
    Vector wl = w * lambda_;
    coeff_.push_back(inv * c_fun(rs, k, wl));
    orbit_.push_back(std::move(wl));
  }
}

Complex BetheFunction::operator()(const Vector& v) const {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < orbit_.size(); ++i)
    s += coeff_[i] * std::exp(Complex{0.0, orbit_[i].dot(v)});
  return s;
}

Complex BetheFunction::directional_derivative(const Vector& v, const Vector& eta) const {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < orbit_.size(); ++i)
    s += coeff_[i] * Complex{0.0, orbit_[i].dot(eta)} * std::exp(Complex{0.0, orbit_[i].dot(v)});
  return s;
}

Complex BetheFunction::laplacian(const Vector& v) const { return -eigenvalue() * (*this)(v); }

Complex phi_eval(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                 const Vector& lambda, const Vector& v) {
  return BetheFunction(rs, weyl, k, lambda)(v);
}

Complex phi_directional_derivative(const RootSystem& rs, const WeylGroup& weyl,
                                   const Coupling& k, const Vector& lambda, const Vector& v,
                                   const Vector& eta) {
  return BetheFunction(rs, weyl, k, lambda).directional_derivative(v, eta);
}

Complex free_phi(const RootSystem& rs, const WeylGroup& weyl, const DominantWeight& mu,
                 const Vector& v) {
  return phi_eval(rs, weyl, Coupling::zero(), kTwoPi * (mu.vec - rs.rho), v);
}

std::vector<double> boundary_residual_per_wall(const RootSystem& rs, const BetheFunction& fn,
                                               std::span<const WallSample> samples) {
  std::vector<double> worst(static_cast<std::size_t>(rs.dim + 1), 0.0);
  for (const auto& s : samples) {
    if (s.wall < 0 || s.wall > rs.dim) throw DomainError("wall sample index out of range");
    const double kw = fn.coupling().for_wall(rs, s.wall);
    const double r = std::abs(fn.directional_derivative(s.point, s.normal) - kw * fn(s.point));
    auto& slot = worst[static_cast<std::size_t>(s.wall)];
    slot = std::max(slot, r);
  }
  return worst;
}

double boundary_residual(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                         const Vector& lambda, std::span<const WallSample> samples) {
  const BetheFunction fn(rs, weyl, k, lambda);
  const auto per_wall = boundary_residual_per_wall(rs, fn, samples);
  return *std::max_element(per_wall.begin(), per_wall.end());
}

Complex laplacian_fd(const BetheFunction& fn, const Vector& v, double h) {
  const auto n = v.size();
  const Complex f0 = fn(v);
  Complex lap{0.0, 0.0};
  for (Eigen::Index d = 0; d < n; ++d) {
    Vector e = Vector::Zero(n);
    e(d) = h;
    const Complex fp1 = fn(v + e), fm1 = fn(v - e);
    const Complex fp2 = fn(v + 2.0 * e), fm2 = fn(v - 2.0 * e);
    lap += (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
  }
  return lap;
}

double interior_pde_residual(const BetheFunction& fn, std::span<const Vector> points, double h) {
  double worst = 0.0, scale = 0.0;
  for (const auto& p : points) {
    const Complex f = fn(p);
    worst = std::max(worst, std::abs(-laplacian_fd(fn, p, h) - fn.eigenvalue() * f));
    scale = std::max(scale, std::abs(f));
  }
  return worst / std::max(1.0, fn.eigenvalue() * scale);
}

void write_grid_csv(std::ostream& os, const BetheFunction& fn, std::span<const Vector> points) {
  if (points.empty()) return;
  const auto n = points.front().size();
  for (Eigen::Index i = 0; i < n; ++i) os << "v_" << (i + 1) << ',';
  os << "re,im\n";
  os << std::setprecision(17);
  for (const auto& p : points) {
    for (Eigen::Index i = 0; i < n; ++i) os << p(i) << ',';
    const Complex f = fn(p);
    os << f.real() << ',' << f.imag() << '\n';
  }
}

} // namespace bethe
