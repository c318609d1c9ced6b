#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bethe/baesolver.hpp"
#include "bethe/common.hpp"
#include "bethe/eigenfn.hpp"
#include "bethe/rootsys.hpp"

namespace bethe {

enum class RuleKind { SubdivisionGauss, MonteCarlo };

std::string to_string(RuleKind kind);
RuleKind parse_rule_kind(const std::string& text);

struct RuleParams {
  RuleKind kind = RuleKind::SubdivisionGauss;
  int depth = 0;              ///< subdivision depth (2^(depth n) cells)
  std::size_t nodes = 100000; ///< Monte Carlo sample count
  std::uint64_t seed = 20240601;
};

/// Nodes and positive weights on the closed alcove.
///
/// Subdivision rules carry the depth-1 companion used for the refinement
/// error estimate (empty at depth 0).
struct QuadratureRule {
  RuleParams params;
  std::vector<Vector> nodes;
  std::vector<double> weights;
  std::vector<Vector> coarse_nodes;
  std::vector<double> coarse_weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// |A| = |det[v_1 - v_0, ..., v_n - v_0]| / n!.
double volume(const RootSystem& rs);

/// Euclidean diameter of the alcove (longest edge).
double alcove_diameter(const RootSystem& rs);

/// Degree-2 symmetric rule with n+1 positive equal weights on the reference
/// simplex, in barycentric coordinates (rows). For n = 1 these are the
/// two-point Gauss nodes.
Matrix stroud_degree2_barycentric(int n);

/// Edgewise (Freudenthal) subdivision of the alcove into 2^(depth n) simplices
/// of equal volume; each returned matrix holds the n+1 cell vertices as rows.
std::vector<Matrix> subdivide_alcove(const RootSystem& rs, int depth);

QuadratureRule build_rule(const RootSystem& rs, const RuleParams& params);

struct IntegralResult {
  Complex value;
  /// |I(depth) - I(depth-1)| for subdivision rules (infinity at depth 0);
  /// |A| times the sample standard deviation over sqrt(N) for Monte Carlo.
  double error;
};

using Integrand = std::function<Complex(const Vector&)>;

IntegralResult integrate(const QuadratureRule& rule, const Integrand& f);

/// Smallest depth d >= min_depth with max_lambda * diam(A) / 2^d <= 1,
/// capped at max_depth.
int resolution_depth(const RootSystem& rs, double max_lambda_norm, int min_depth = 3,
                     int max_depth = 12);

struct GramResult {
  /// G(i,j) = int_A phi_i conj(phi_j) dv.
  Eigen::MatrixXcd matrix;
  /// Per-entry quadrature error estimate.
  Matrix error;
  /// |lambda_i| of each function.
  std::vector<double> spectral_norms;

  /// |G_ij| / sqrt(G_ii G_jj).
  Matrix normalized() const;
};

GramResult gram(const std::vector<BetheFunction>& functions, const QuadratureRule& rule);

GramResult gram(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                const std::vector<BaeSolution>& solutions, const QuadratureRule& rule);

/// Quasi-uniform samples on the closed facet V_i (opposite alcove vertex i)
/// taken from a barycentric lattice on the facet. Returns exactly `count`
/// samples for rank >= 2; a rank-1 facet is a single point and yields one.
std::vector<WallSample> facet_rule(const RootSystem& rs, int wall, std::size_t count);

/// Strictly interior barycentric lattice points with the smallest resolution
/// giving at least `min_count` points.
std::vector<Vector> alcove_grid(const RootSystem& rs, std::size_t min_count);

/// CSV export: first line is a JSON metadata object, then x_1..x_n,weight.
void write_rule_csv(std::ostream& os, const QuadratureRule& rule, const std::string& metadata_json);
/// CSV export: first line JSON metadata, then i,j,re,im,abs_normalized,error.
void write_gram_csv(std::ostream& os, const GramResult& g, const std::string& metadata_json);

} // namespace bethe
