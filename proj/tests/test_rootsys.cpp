#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"

#include "bethe/eigenfn.hpp"
#include "bethe/rootsys.hpp"
#include "bethe/serialize.hpp"

using namespace bethe;

namespace {

RootSystem rs_of(const char* s) { return build_root_system(CartanLabel::parse(s)); }

const char* kLabels[] = {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"};

bool contains(const std::vector<Vector>& set, const Vector& v) {
  for (const auto& x : set)
    if ((x - v).norm() < 1e-9) return true;
  return false;
}

std::set<std::vector<long long>> keys(const WeylGroup& w) {
  std::set<std::vector<long long>> out;
  for (const auto& g : w.elements) {
    std::vector<long long> k;
    for (Eigen::Index i = 0; i < g.size(); ++i) k.push_back(std::llround(g.data()[i] * 1e8));
    out.insert(k);
  }
  return out;
}

std::vector<long long> key(const Matrix& g) {
  std::vector<long long> k;
  for (Eigen::Index i = 0; i < g.size(); ++i) k.push_back(std::llround(g.data()[i] * 1e8));
  return k;
}

void json_close(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number()) {
    REQUIRE(b.is_number());
    CHECK(a.get<double>() == doctest::Approx(b.get<double>()).epsilon(1e-12));
  } else if (a.is_array()) {
    REQUIRE(b.is_array());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) json_close(a[i], b[i]);
  } else if (a.is_object()) {
    REQUIRE(b.is_object());
    REQUIRE(a.size() == b.size());
    for (auto it = a.begin(); it != a.end(); ++it) {
      REQUIRE(b.contains(it.key()));
      json_close(it.value(), b[it.key()]);
    }
  } else {
    CHECK(a == b);
  }
}

} // namespace

TEST_CASE("label parsing") {
  CHECK(CartanLabel::parse("G2").str() == "G2");
  CHECK(CartanLabel::parse("e8").str() == "E8");
  for (const char* bad : {"A0", "B1", "D3", "E5", "E9", "F3", "G3", "X2", "A", "", "A-1", "B2x"})
    CHECK_THROWS_AS(build_root_system(CartanLabel::parse(bad)), DomainError);
}

TEST_CASE("positive root counts and normalization") {
  for (const char* l : {"A1", "A3", "B3", "C3", "D5", "E6", "E7", "E8", "F4", "G2"}) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    CHECK(rs.num_positive() == classical_positive_count(rs.label));
    const auto fam = rs.label.family;
    const double long_sq = fam == Family::G ? 6.0 : (fam == Family::B || fam == Family::C || fam == Family::F) ? 4.0 : 2.0;
    for (const auto& a : rs.positive_roots) {
      const double sq = a.squaredNorm();
      CHECK((std::abs(sq - 2.0) < 1e-12 || std::abs(sq - long_sq) < 1e-12));
    }
    CHECK(rs.highest_root.squaredNorm() == doctest::Approx(long_sq));
  }
}

TEST_CASE("Cartan matrices in Bourbaki numbering") {
  const auto b2 = rs_of("B2");
  CHECK(b2.cartan(0, 1) == -2);
  CHECK(b2.cartan(1, 0) == -1);
  const auto g2 = rs_of("G2");
  CHECK(g2.cartan(0, 1) == -1);
  CHECK(g2.cartan(1, 0) == -3);
  const auto c3 = rs_of("C3");
  CHECK(c3.cartan(1, 2) == -1);
  CHECK(c3.cartan(2, 1) == -2);
}

TEST_CASE("marks of the highest root") {
  CHECK(rs_of("B3").marks == std::vector<int>{1, 2, 2});
  CHECK(rs_of("C3").marks == std::vector<int>{2, 2, 1});
  CHECK(rs_of("D5").marks == std::vector<int>{1, 2, 2, 1, 1});
  CHECK(rs_of("F4").marks == std::vector<int>{2, 3, 4, 2});
  CHECK(rs_of("G2").marks == std::vector<int>{3, 2});
  CHECK(rs_of("E8").marks == std::vector<int>{2, 3, 4, 6, 5, 4, 3, 2});
}

TEST_CASE("fundamental weights and coweights are dual bases") {
  for (const char* l : kLabels) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    for (int i = 0; i < rs.dim; ++i)
      for (int j = 0; j < rs.dim; ++j) {
        const double d = i == j ? 1.0 : 0.0;
        CHECK(rs.coroots[static_cast<std::size_t>(i)].dot(rs.fundamental_weights[static_cast<std::size_t>(j)]) ==
              doctest::Approx(d).epsilon(1e-12));
        CHECK(rs.simple_roots[static_cast<std::size_t>(i)].dot(rs.fundamental_coweights[static_cast<std::size_t>(j)]) ==
              doctest::Approx(d).epsilon(1e-12));
      }
    Vector half = Vector::Zero(rs.dim);
    for (const auto& a : rs.positive_roots) half += 0.5 * a;
    CHECK((half - rs.rho).norm() < 1e-12);
  }
}

TEST_CASE("Weyl group orders, closure and root permutation") {
  for (const char* l : kLabels) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    const auto w = weyl_group(rs);
    CHECK(w.order() == classical_weyl_order(rs.label));
    CHECK((w.elements.front() - Matrix::Identity(rs.dim, rs.dim)).norm() < 1e-12);
    const auto all = keys(w);
    CHECK(all.size() == w.order());
    for (const auto& g : w.elements)
      for (const auto& s : w.generators) CHECK(all.count(key(s * g)) == 1);
    std::vector<Vector> roots = rs.positive_roots;
    for (const auto& a : rs.positive_roots) roots.push_back(-a);
    for (std::size_t e = 0; e < w.elements.size(); e += 7)
      for (const auto& a : rs.positive_roots) CHECK(contains(roots, w.elements[e] * a));
  }
}

TEST_CASE("Weyl order cap refuses large groups") {
  const auto f4 = rs_of("F4");
  CHECK_THROWS_AS(weyl_group(f4, 1000), CapExceeded);
  CHECK(weyl_group(f4, 1152).order() == 1152);
}

TEST_CASE("alcove vertices and barycentric coordinates") {
  for (const char* l : kLabels) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    const auto verts = alcove_vertices(rs);
    REQUIRE(verts.size() == static_cast<std::size_t>(rs.dim + 1));
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vector b = alcove_barycentric(rs, verts[i]);
      for (Eigen::Index j = 0; j < b.size(); ++j)
        CHECK(b(j) == doctest::Approx(static_cast<std::size_t>(j) == i ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(in_closed_alcove(rs, verts[i]));
    }
  }
}

TEST_CASE("folding lands in the alcove and preserves affine-invariant functions") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (const char* l : {"A2", "B2", "G2", "A3", "C3"}) {
    CAPTURE(l);
    const auto rs = rs_of(l);
    const auto w = weyl_group(rs);
    std::vector<int> c(static_cast<std::size_t>(rs.dim), 2);
    c[0] = 3;
    const auto mu = make_weight(rs, c);
    for (int t = 0; t < 20; ++t) {
      Vector v(rs.dim);
      for (auto& x : v) x = nd(gen);
      const Vector f = fold_to_alcove(rs, v);
      CHECK(in_closed_alcove(rs, f, 1e-10));
      CHECK(std::abs(free_phi(rs, w, mu, v) - free_phi(rs, w, mu, f)) < 1e-9);
    }
  }
}

TEST_CASE("transformed root system is the image under w") {
  const auto rs = rs_of("B3");
  const auto w = weyl_group(rs);
  const Matrix& g = w.elements[17];
  const auto t = transformed(rs, g);
  CHECK((t.rho - g * rs.rho).norm() < 1e-12);
  for (std::size_t i = 0; i < rs.simple_roots.size(); ++i)
    CHECK((t.simple_roots[i] - g * rs.simple_roots[i]).norm() < 1e-12);
  CHECK(t.marks == rs.marks);
}

TEST_CASE("dominant weight enumeration") {
  const auto rs = rs_of("A2");
  const auto ws = dominant_weights(rs, 4, true);
  REQUIRE(!ws.empty());
  CHECK(ws.front().coeffs == std::vector<int>{1, 1});
  for (std::size_t i = 1; i < ws.size(); ++i) {
    CHECK(ws[i].is_strictly_dominant());
    CHECK(ws[i].height() <= 4);
    CHECK((ws[i].vec - rs.rho).norm() >= (ws[i - 1].vec - rs.rho).norm() - 1e-12);
  }
  CHECK(ws.size() == 6);
  CHECK_THROWS_AS(make_weight(rs, {1}), DomainError);
}

TEST_CASE("A1 root data matches golden record") {
  std::ifstream in(BETHE_TEST_DATA "/a1_rootsystem.json");
  REQUIRE(in);
  const auto golden = nlohmann::json::parse(in);
  json_close(golden, to_json(rs_of("A1")));
}
