#include "bethe/serialize.hpp"

#include <cmath>

namespace bethe {

std::string normalization_convention() {
  return "short roots |a|^2 = 2, long roots |a|^2 = 4 (B, C, F) or 6 (G2); "
         "simply-laced |a|^2 = 2; simple roots realized in R^n via the Cholesky "
         "factor of their Gram matrix (Bourbaki numbering)";
}

nlohmann::json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json vector_json(const Vector& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

namespace {

nlohmann::json vectors_json(const std::vector<Vector>& vs) {
  auto a = nlohmann::json::array();
  for (const auto& v : vs) a.push_back(vector_json(v));
  return a;
}

} // namespace

nlohmann::json to_json(const RootSystem& rs) {
  nlohmann::json j;
  j["label"] = rs.label.str();
  j["dim"] = rs.dim;
  j["simple_roots"] = vectors_json(rs.simple_roots);
  j["positive_roots"] = vectors_json(rs.positive_roots);
  j["coroots"] = vectors_json(rs.coroots);
  j["highest_root"] = vector_json(rs.highest_root);
  j["alpha0"] = vector_json(rs.alpha0);
  j["rho"] = vector_json(rs.rho);
  j["marks"] = rs.marks;
  j["fundamental_weights"] = vectors_json(rs.fundamental_weights);
  j["fundamental_coweights"] = vectors_json(rs.fundamental_coweights);
  auto classes = nlohmann::json::array();
  for (int c = 0; c < rs.num_classes(); ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < rs.num_positive(); ++i)
      if (rs.root_class[i] == c) members.push_back(static_cast<int>(i));
    classes.push_back({{"squared_length", rs.length_classes[static_cast<std::size_t>(c)]},
                       {"positive_roots", members}});
  }
  j["length_classes"] = classes;
  j["normalization"] = normalization_convention();
  return j;
}

nlohmann::json to_json(const Coupling& k) {
  if (k.is_zero()) return nlohmann::json::array({0.0});
  return k.values();
}

nlohmann::json to_json(const BaeSolution& s) {
  return {
      {"mu", s.mu.coeffs},
      {"lambda", vector_json(s.lambda)},
      {"grad_norm", number_json(s.grad_norm)},
      {"iterations", s.iterations},
      {"bae_residual", number_json(s.bae_residual)},
      {"hessian_det", number_json(s.hessian_det)},
      {"in_chamber", s.in_chamber},
  };
}

} // namespace bethe
