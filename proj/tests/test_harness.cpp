#include <cmath>
#include <sstream>

#include "doctest.h"

#include "bethe/harness.hpp"
#include "bethe/quadrature.hpp"

using namespace bethe;

namespace {

std::string jsonl(const Report& r) {
  std::ostringstream os;
  write_jsonl(os, r);
  return os.str();
}

const Check* find_check(const CaseRecord& c, const std::string& name) {
  for (const auto& ch : c.checks)
    if (ch.name == name) return &ch;
  return nullptr;
}

} // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment line
label = B2        # trailing comment
k = 0.5, 2; 1; 0
k_grid_exponents = 2..4
weights = 1,1; 2,3
depth = 5
probe_n = 0, 1, 3
certify = false
)");
  CHECK(cfg.label.str() == "B2");
  REQUIRE(cfg.couplings.size() == 3);
  CHECK(cfg.couplings[0].values() == std::vector<double>{0.5, 2.0});
  CHECK(cfg.couplings[2].is_zero());
  CHECK(cfg.k_grid == std::vector<double>{0.25, 0.125, 0.0625});
  CHECK(cfg.weights == std::vector<std::vector<int>>{{1, 1}, {2, 3}});
  CHECK(cfg.depth == 5);
  CHECK(!cfg.solver.certify);
  CHECK(cfg.entries.size() == 7);

  CHECK(parse_config("label = A2").couplings.front().values() == std::vector<double>{1.0});
  CHECK_THROWS_AS(parse_config("k = 1"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\nfoo = 1"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\nk = 1, 2"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\nk_grid = 0.1, 0.2"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\nweights = 1,1,1"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\ntol = -1"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\ndepth = x"), DomainError);
  CHECK_THROWS_AS(parse_config("label = A2\nprobe_n = 2, 1"), DomainError);
  CHECK_THROWS_AS(parse_config("label = Z9"), DomainError);
  CHECK_THROWS_AS(parse_config("label A2"), DomainError);
}

TEST_CASE("probe bump vanishes on the walls up to rounding and is positive at its center") {
  for (const char* l : {"A1", "A2", "G2"}) {
    const auto rs = build_root_system(CartanLabel::parse(l));
    for (int w = 0; w <= rs.dim; ++w)
      for (const auto& s : facet_rule(rs, w, 10)) CHECK(probe_function(rs, s.point) < 1e-20);
    const auto verts = alcove_vertices(rs);
    Vector c = Vector::Zero(rs.dim);
    const int n = rs.dim;
    for (int i = 0; i <= n; ++i) c += (2.0 * (i + 1) / ((n + 1.0) * (n + 2.0))) * verts[static_cast<std::size_t>(i)];
    CHECK(probe_function(rs, c) == doctest::Approx(1.0));
  }
}

TEST_CASE("verdict semantics separate proven from conjectural checks") {
  Report r;
  r.cases.resize(1);
  r.cases[0].checks.push_back(check_le("a", 2.0, 1.0, Status::Conjectural));
  r.cases[0].checks.push_back(check_ge("b", 2.0, 1.0));
  CHECK(r.passed());
  r.cases[0].checks.push_back(check_true("c", false));
  CHECK(!r.passed());
  CHECK(r.find(0, "b").pass);
  CHECK_THROWS_AS(r.find(0, "zzz"), Error);
  r.cases[0].checks.pop_back();
  r.cases[0].error = "boom";
  CHECK(!r.passed());
}

TEST_CASE("solve report is reproducible and well-formed") {
  const auto cfg = parse_config("label = G2\nk = 1, 2; 0.5\nheight = 4\n");
  const auto a = cmd_solve(cfg);
  const auto b = cmd_solve(cfg);
  CHECK(jsonl(a) == jsonl(b));
  CHECK(a.passed());
  std::istringstream in(jsonl(a));
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  CHECK(header["type"] == "header");
  CHECK(header["label"] == "G2");
  CHECK(header["metadata"]["weyl_order"] == 12);
  CHECK(header["normalization"].get<std::string>().find("6 (G2)") != std::string::npos);
  std::size_t cases = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["type"] == "case");
    CHECK(j["index"] == cases);
    ++cases;
  }
  CHECK(cases == a.cases.size());

  std::ostringstream csv;
  write_csv(csv, a);
  CHECK(csv.str().find("experiment,case,check,value,tolerance,comparator,status,verdict\n") != std::string::npos);
}

TEST_CASE("zero coupling norm check reports the left side only") {
  const auto r = cmd_norm_check(parse_config("label = A2\nk = 0\nweights = 2,2\n"));
  REQUIRE(r.cases.size() == 1);
  CHECK(r.cases[0].error.empty());
  CHECK(r.cases[0].checks.empty());
  CHECK(r.cases[0].outputs.contains("lhs"));
  CHECK(!r.cases[0].outputs.contains("rhs"));
}

TEST_CASE("norm check marks the formula conjectural") {
  const auto r = cmd_norm_check(parse_config("label = G2\nk = 1\nweights = 1,1\n"));
  REQUIRE(r.cases.size() == 1);
  const auto* dev = find_check(r.cases[0], "relative_deviation");
  REQUIRE(dev);
  CHECK(dev->status == Status::Conjectural);
  CHECK(r.cases[0].outputs["verdict"] == "consistent");
}

TEST_CASE("under-resolved norm check fails its quadrature check") {
  const auto r = cmd_norm_check(parse_config("label = A2\nk = 1\nweights = 4,5\ndepth = 1\n"));
  const auto* q = find_check(r.cases[0], "relative_quadrature_error");
  REQUIRE(q);
  CHECK(!q->pass);
  const auto& o = r.cases[0].outputs;
  if (o["verdict"] == "violation")
    CHECK(o["relative_deviation"].get<double>() > o["relative_quadrature_error"].get<double>());
  else if (o["relative_deviation"].get<double>() > 1e-3)
    CHECK(o["verdict"] == "unresolved");
}

TEST_CASE("rank guards") {
  CHECK_THROWS_AS(cmd_gram(parse_config("label = A4\n")), DomainError);
  CHECK_THROWS_AS(cmd_probe_completeness(parse_config("label = A3\n")), DomainError);
  CHECK_THROWS_AS(cmd_solve(parse_config("label = F4\nrank_cap = 100\n")), CapExceeded);
}

TEST_CASE("single-function Gram is trivially diagonal") {
  const auto r = cmd_gram(parse_config("label = A2\nk = 1\ncount = 1\n"));
  REQUIRE(r.cases.size() == 1);
  CHECK(r.passed());
  CHECK(r.cases[0].outputs["normalized"].size() == 1);
  CHECK(r.cases[0].outputs["pairs"].empty());
}

TEST_CASE("probe with no basis functions returns the bump norm") {
  const auto r = cmd_probe_completeness(parse_config("label = A1\nk = 1\nprobe_n = 0, 1\n"));
  REQUIRE(r.cases.size() == 1);
  const auto& o = r.cases[0].outputs;
  CHECK(o["n"][0] == 0);
  CHECK(o["residual"][0].get<double>() == o["f_norm"].get<double>());
  CHECK(o["residual"][1].get<double>() < o["residual"][0].get<double>());
}

TEST_CASE("limit scan emits one case per grid point plus a trend") {
  const auto r = cmd_limit_scan(parse_config("label = A1\nk = 1\nweights = 2\nk_grid_exponents = 1..6\n"));
  REQUIRE(r.cases.size() == 7);
  const auto& trend = r.cases.back();
  CHECK(find_check(trend, "distance_decreasing")->pass);
  CHECK(find_check(trend, "final_det_b_vs_weyl_order") == nullptr);
  CHECK(trend.outputs["distance_to_free"].size() == 6);
}

TEST_CASE("unknown command") { CHECK_THROWS_AS(run_command("frobnicate", parse_config("label = A1")), DomainError); }
