#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bethe/baesolver.hpp"
#include "bethe/quadrature.hpp"
#include "bethe/rootsys.hpp"

namespace bethe {

/// One experiment, read from flat `key = value` text. Blank lines and lines
/// starting with '#' are ignored; unknown keys are rejected.
///
/// List syntax: items separated by ';', per-class values within a coupling or
/// coefficients within a weight separated by ','. For example
///
///     label   = G2
///     k       = 1, 0.5          # short class 1, long class 0.5
///     weights = 1,1; 2,1
///     k_grid_exponents = 1..20  # k = 2^-1 ... 2^-20
struct ExperimentConfig {
  CartanLabel label;
  std::vector<Coupling> couplings;          ///< `k`, default {1}
  std::vector<double> k_grid;               ///< `k_grid` or `k_grid_exponents`
  std::vector<std::vector<int>> weights;    ///< `weights`; empty -> height bound
  int height = 4;                           ///< `height`
  std::optional<std::size_t> count;         ///< `count`: first N weights

  std::optional<int> depth;                 ///< `depth`: overrides the heuristic
  int min_depth = 3;                        ///< `min_depth`
  int max_depth = 12;                       ///< `max_depth`
  RuleKind quadrature = RuleKind::SubdivisionGauss; ///< `quadrature`
  std::size_t mc_nodes = 100000;            ///< `mc_nodes`
  std::uint64_t seed = 20240601;            ///< `seed`
  std::size_t rank_cap = kDefaultWeylCap;   ///< `rank_cap`: Weyl order cap

  SolverOptions solver;                     ///< `tol`, `bae_tol`, `max_iter`

  double perturbation = 0.05;               ///< `perturbation`: control shift along rho
  double wall_tol = 1e-8;                   ///< `wall_tol`
  double contrast = 1e3;                    ///< `contrast`
  double pde_tol = 1e-5;                    ///< `pde_tol`
  double norm_tol = 1e-3;                   ///< `norm_tol`
  double orth_tol = 1e-3;                   ///< `orth_tol`
  double limit_tol = 1e-3;                  ///< `limit_tol`
  double c_tol = 1e-3;                      ///< `c_tol`
  double phi_tol = 1e-2;                    ///< `phi_tol`
  double detb_tol = 1e-2;                   ///< `detb_tol` (relative)
  double probe_tol = 0.05;                  ///< `probe_tol` (relative to |f|)
  std::vector<int> probe_n = {1, 2, 4, 8, 16}; ///< `probe_n`

  std::size_t wall_samples = 50;            ///< `wall_samples` per wall
  std::size_t interior_samples = 20;        ///< `interior_samples`
  std::size_t grid_points = 1000;           ///< `grid_points`

  std::string grid_csv;                     ///< `grid_csv`: eigenfunction grid export
  std::string gram_csv;                     ///< `gram_csv`: Gram matrix export
  std::string rule_csv;                     ///< `rule_csv`: quadrature rule export

  /// Original key/value pairs in file order, echoed into report headers.
  std::vector<std::pair<std::string, std::string>> entries;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks positivity of tolerances and the strict decrease of k_grid.
void validate(const ExperimentConfig& cfg);

/// Parses "1, 0.5" into a coupling; "0" gives the zero coupling.
Coupling parse_coupling(std::string_view text);

} // namespace bethe
