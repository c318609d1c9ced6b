#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "bethe/baesolver.hpp"

using namespace bethe;

namespace {

RootSystem rs_of(const char* s) { return build_root_system(CartanLabel::parse(s)); }

// Root of x + 4 atan(x/k) = 2 pi m by bisection; the left side is increasing.
double bisect_rank1(double k, int m) {
  auto f = [&](double x) { return x + 4.0 * std::atan(x / k) - kTwoPi * m; };
  double lo = 0.0, hi = kTwoPi * m;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vector random_vector(std::mt19937_64& gen, int n, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector v(n);
  for (auto& x : v) x = nd(gen);
  return v;
}

struct Case {
  const char* label;
  std::vector<double> k;
};

const Case kCases[] = {{"A1", {1.0}}, {"A2", {0.5}}, {"B2", {0.5, 2.0}}, {"G2", {1.0, 0.3}},
                       {"A3", {2.0}}, {"B3", {1.0, 1.5}}, {"C3", {0.7, 0.2}}, {"F4", {1.0, 2.0}}};

} // namespace

TEST_CASE("rank-one Newton matches bisection oracle") {
  const auto rs = rs_of("A1");
  for (double k : {0.1, 1.0, 10.0})
    for (int m : {1, 2, 3, 7}) {
      CAPTURE(k);
      CAPTURE(m);
      const auto sol = solve_bae(rs, Coupling::uniform(k), make_weight(rs, {m}));
      const double x = sol.lambda.dot(rs.coroots[0]);
      CHECK(std::abs(x - bisect_rank1(k, m)) <= 1e-12);
    }
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  std::mt19937_64 gen(11);
  for (const auto& c : kCases) {
    CAPTURE(c.label);
    const auto rs = rs_of(c.label);
    const auto k = Coupling::per_class(c.k);
    std::vector<int> coeffs(static_cast<std::size_t>(rs.dim), 1);
    coeffs.back() = 2;
    const auto mu = make_weight(rs, coeffs);
    for (int t = 0; t < 5; ++t) {
      const Vector v = random_vector(gen, rs.dim, 3.0);
      const Vector g = master_grad(rs, k, mu, v);
      const Matrix h = master_hessian(rs, k, v);
      Vector gfd(rs.dim);
      Matrix hfd(rs.dim, rs.dim);
      const double e = 1e-5;
      for (int i = 0; i < rs.dim; ++i) {
        Vector d = Vector::Zero(rs.dim);
        d(i) = e;
        gfd(i) = (master_value(rs, k, mu, v + d) - master_value(rs, k, mu, v - d)) / (2 * e);
        hfd.col(i) = (master_grad(rs, k, mu, v + d) - master_grad(rs, k, mu, v - d)) / (2 * e);
      }
      CHECK((g - gfd).norm() <= 1e-5 * std::max(1.0, g.norm()));
      CHECK((h - hfd).norm() <= 1e-5 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("Hessian is symmetric with spectrum above one") {
  std::mt19937_64 gen(5);
  for (const auto& c : kCases) {
    CAPTURE(c.label);
    const auto rs = rs_of(c.label);
    const auto k = Coupling::per_class(c.k);
    for (int t = 0; t < 10; ++t) {
      const Matrix h = master_hessian(rs, k, random_vector(gen, rs.dim, 5.0));
      CHECK((h - h.transpose()).norm() <= 1e-14 * h.norm());
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("master function is convex along segments") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (const auto& c : kCases) {
    CAPTURE(c.label);
    const auto rs = rs_of(c.label);
    const auto k = Coupling::per_class(c.k);
    const auto mu = rho_weight(rs);
    for (int t = 0; t < 20; ++t) {
      const Vector a = random_vector(gen, rs.dim, 4.0), b = random_vector(gen, rs.dim, 4.0);
      const double s = ud(gen);
      const double lhs = master_value(rs, k, mu, s * a + (1 - s) * b);
      const double rhs = s * master_value(rs, k, mu, a) + (1 - s) * master_value(rs, k, mu, b);
      CHECK(lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("solutions are certified BAE roots in the open chamber") {
  for (const auto& c : kCases) {
    CAPTURE(c.label);
    const auto rs = rs_of(c.label);
    const auto k = Coupling::per_class(c.k);
    for (const auto& mu : dominant_weights(rs, rs.dim + 2, true)) {
      const auto sol = solve_bae(rs, k, mu);
      CHECK(sol.grad_norm <= 1e-12);
      CHECK(sol.bae_residual <= 1e-9);
      CHECK(sol.in_chamber);
      CHECK(sol.hessian_det >= 1.0);
      CHECK((master_grad(rs, k, mu, sol.lambda)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("solution is W-equivariant") {
  const auto rs = rs_of("G2");
  const auto k = Coupling::per_class({0.8, 1.7});
  const auto sol = solve_bae(rs, k, make_weight(rs, {2, 1}));
  Matrix w = Matrix::Identity(2, 2);
  for (const auto& a : {rs.simple_roots[0], rs.simple_roots[1], rs.simple_roots[0]})
    w = (Matrix::Identity(2, 2) - 2.0 * a * a.transpose() / a.squaredNorm()) * w;
  const auto trs = transformed(rs, w);
  const auto tsol = solve_bae(trs, k, make_weight(trs, {2, 1}));
  CHECK((tsol.lambda - w * sol.lambda).norm() <= 1e-12);
}

TEST_CASE("zero coupling is the shifted weight") {
  for (const char* l : {"A1", "B2", "G2", "A3"}) {
    const auto rs = rs_of(l);
    for (const auto& mu : dominant_weights(rs, 4, true)) {
      const auto sol = solve_bae(rs, Coupling::zero(), mu);
      CHECK((sol.lambda - kTwoPi * (mu.vec - rs.rho)).norm() <= 1e-12);
      CHECK(sol.bae_residual <= 1e-12);
      CHECK(std::isnan(sol.hessian_det));
      const bool interior = std::all_of(mu.coeffs.begin(), mu.coeffs.end(), [](int x) { return x >= 2; });
      CHECK(sol.in_chamber == interior);
    }
  }
}

TEST_CASE("warm-started path agrees with cold starts") {
  const auto rs = rs_of("B2");
  const auto mu = make_weight(rs, {1, 2});
  std::vector<Coupling> path;
  for (int j = 0; j < 8; ++j) path.push_back(Coupling::per_class({1.0, 2.0}).scaled(std::ldexp(1.0, -j)));
  const auto pts = solve_bae_path(rs, path, mu);
  REQUIRE(pts.size() == path.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    REQUIRE(pts[i].solution);
    CHECK((pts[i].solution->lambda - solve_bae(rs, path[i], mu).lambda).norm() <= 1e-10);
  }
}

TEST_CASE("coupling validation") {
  CHECK_THROWS_AS(Coupling::per_class({1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(Coupling::uniform(-1.0), DomainError);
  CHECK_THROWS_AS(Coupling::per_class({1.0, 2.0, 3.0}), DomainError);
  CHECK(Coupling::per_class({0.0, 0.0}).is_zero());
  CHECK_THROWS_AS(Coupling::per_class({1.0, 2.0}).check(rs_of("A2")), DomainError);
  const auto b2 = rs_of("B2");
  const auto k = Coupling::per_class({0.5, 3.0});
  CHECK(k.for_wall(b2, 1) == 3.0); // alpha_1 long in Bourbaki B2
  CHECK(k.for_wall(b2, 2) == 0.5);
  CHECK(k.for_wall(b2, 0) == 3.0); // highest root of B2 is long
}

TEST_CASE("error paths") {
  const auto rs = rs_of("B3");
  const auto mu = make_weight(rs, {3, 1, 2});
  SolverOptions o;
  o.max_iter = 1;
  try {
    solve_bae(rs, Coupling::uniform(10.0), mu, o);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 1);
    CHECK(e.last_iterate().size() == 3);
    CHECK(e.grad_norm() > 0.0);
  }
  CHECK_THROWS_AS(solve_bae(rs, Coupling::uniform(1.0), make_weight(rs, {0, 1, 1})), DomainError);
  CHECK_THROWS_AS(bae_residual(rs, Coupling::uniform(1.0), Vector::Zero(3)), PoleError);
}
