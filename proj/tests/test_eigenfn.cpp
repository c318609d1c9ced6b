#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"

#include "bethe/eigenfn.hpp"
#include "bethe/quadrature.hpp"

using namespace bethe;

namespace {

RootSystem rs_of(const char* s) { return build_root_system(CartanLabel::parse(s)); }

std::vector<WallSample> all_walls(const RootSystem& rs, std::size_t per_wall) {
  std::vector<WallSample> out;
  for (int w = 0; w <= rs.dim; ++w) {
    auto s = facet_rule(rs, w, per_wall);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

} // namespace

TEST_CASE("c-function") {
  const auto rs = rs_of("A1");
  const Vector lam = Vector::Constant(1, 1.3);
  const double x = lam.dot(rs.coroots[0]);
  const Complex expect = Complex(x, -0.7) / x;
  CHECK(std::abs(c_fun(rs, Coupling::uniform(0.7), lam) - expect) < 1e-15);
  CHECK(c_fun(rs, Coupling::zero(), lam) == Complex(1.0, 0.0));
  CHECK_THROWS_AS(c_fun(rs, Coupling::uniform(1.0), Vector::Zero(1)), PoleError);
  try {
    c_fun(rs_of("A2"), Coupling::uniform(1.0), rs_of("A2").fundamental_weights[0]);
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(e.root_index() == 1);
  }
}

TEST_CASE("rank-one closed form") {
  const auto rs = rs_of("A1");
  const auto w = weyl_group(rs);
  const double k = 1.0;
  const auto sol = solve_bae(rs, Coupling::uniform(k), make_weight(rs, {2}));
  const BetheFunction fn(rs, w, Coupling::uniform(k), sol.lambda);
  const double l = sol.lambda(0), x = sol.lambda.dot(rs.coroots[0]);
  for (double v : {0.0, 0.1, 0.3, 0.7}) {
    const Complex cp = Complex(x, -k) / x, cm = Complex(-x, -k) / (-x);
    const Complex expect = 0.5 * (cp * std::exp(Complex(0, l * v)) + cm * std::exp(Complex(0, -l * v)));
    CHECK(std::abs(fn(Vector::Constant(1, v)) - expect) < 1e-14);
  }
}

TEST_CASE("zero coupling reduces to the free function") {
  for (const char* l : {"A2", "B2", "G2"}) {
    const auto rs = rs_of(l);
    const auto w = weyl_group(rs);
    const auto mu = make_weight(rs, {2, 3});
    const BetheFunction fn(rs, w, Coupling::zero(), kTwoPi * (mu.vec - rs.rho));
    for (const auto& p : alcove_grid(rs, 30)) CHECK(std::abs(fn(p) - free_phi(rs, w, mu, p)) < 1e-13);
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const auto rs = rs_of("B2");
  const auto w = weyl_group(rs);
  const auto k = Coupling::per_class({0.5, 1.5});
  const auto sol = solve_bae(rs, k, make_weight(rs, {2, 1}));
  const BetheFunction fn(rs, w, k, sol.lambda);
  const Vector eta = Vector::Constant(2, 1.0).normalized();
  const double h = 1e-6;
  for (const auto& p : alcove_grid(rs, 10)) {
    const Complex fd = (fn(p + h * eta) - fn(p - h * eta)) / (2 * h);
    CHECK(std::abs(fn.directional_derivative(p, eta) - fd) < 1e-7);
    CHECK(std::abs(fn.laplacian(p) + fn.eigenvalue() * fn(p)) < 1e-10 * std::max(1.0, fn.eigenvalue()));
    CHECK(std::abs(laplacian_fd(fn, p) - fn.laplacian(p)) < 1e-5 * std::max(1.0, fn.eigenvalue()));
  }
}

TEST_CASE("Bethe solutions satisfy the repulsive wall condition") {
  for (const char* l : {"A2", "B2", "C2", "G2", "A3", "B3", "C3"}) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    const auto w = weyl_group(rs);
    const auto samples = all_walls(rs, 20);
    const auto k = rs.num_classes() == 2 ? Coupling::per_class({0.6, 1.4}) : Coupling::uniform(1.0);
    for (const auto& mu : dominant_weights(rs, rs.dim + 2, true)) {
      const auto sol = solve_bae(rs, k, mu);
      const BetheFunction fn(rs, w, k, sol.lambda);
      const auto per_wall = boundary_residual_per_wall(rs, fn, samples);
      for (double r : per_wall) CHECK(r <= 1e-8);
      CHECK(boundary_residual(rs, w, k, sol.lambda + 0.05 * rs.rho, samples) >= 1e-3);
      CHECK(interior_pde_residual(fn, alcove_grid(rs, 20)) <= 1e-5);
    }
  }
}

TEST_CASE("wall samples lie on their facet") {
  const auto rs = rs_of("C3");
  for (int wall = 0; wall <= 3; ++wall) {
    const auto s = facet_rule(rs, wall, 25);
    CHECK(s.size() == 25);
    for (const auto& x : s) {
      const Vector b = alcove_barycentric(rs, x.point);
      CHECK(std::abs(b(wall)) < 1e-12);
      CHECK(b.minCoeff() > -1e-12);
    }
  }
  CHECK(facet_rule(rs_of("A1"), 0, 50).size() == 1);
}

TEST_CASE("grid export") {
  const auto rs = rs_of("A2");
  const auto w = weyl_group(rs);
  const BetheFunction fn(rs, w, Coupling::zero(), kTwoPi * rs.fundamental_weights[0]);
  std::ostringstream os;
  const auto pts = alcove_grid(rs, 5);
  write_grid_csv(os, fn, pts);
  const auto text = os.str();
  CHECK(text.rfind("v_1,v_2,re,im\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == pts.size() + 1);
}
