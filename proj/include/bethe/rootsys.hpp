#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bethe/common.hpp"

namespace bethe {

enum class Family { A, B, C, D, E, F, G };

/// Cartan type and rank, e.g. "A2", "G2", "F4".
struct CartanLabel {
  Family family = Family::A;
  int rank = 1;

  /// Parses "B3", "g2", ... and validates admissibility.
  static CartanLabel parse(std::string_view text);
  std::string str() const;

  /// Throws DomainError naming the violated constraint.
  void validate() const;

  bool operator==(const CartanLabel&) const = default;
};

/// Irreducible crystallographic root system realized in R^n.
///
/// Normalization: short roots have squared length 2; long roots have squared
/// length 4 (B, C, F) or 6 (G2). Simply-laced systems have all roots of
/// squared length 2. Simple roots are obtained from a Cholesky factor of the
/// simple-root Gram matrix, so vectors live in R^rank with the standard inner
/// product.
///
/// Simple roots follow Bourbaki numbering.
struct RootSystem {
  CartanLabel label;
  int dim = 0;

  std::vector<Vector> simple_roots;
  /// Positive roots, ordered by height then lexicographically by their
  /// simple-root coefficients. The first `dim` entries are the simple roots.
  std::vector<Vector> positive_roots;
  std::vector<std::vector<int>> positive_root_coeffs;
  /// coroots[i] = 2 a / |a|^2 for a = positive_roots[i].
  std::vector<Vector> coroots;

  Vector highest_root;
  Vector alpha0; // -highest_root
  Vector rho;
  std::vector<int> marks;
  std::vector<Vector> fundamental_weights;
  std::vector<Vector> fundamental_coweights;

  /// Distinct squared root lengths, ascending (one or two entries).
  std::vector<double> length_classes;
  /// Length class of each positive root.
  std::vector<int> root_class;

  /// cartan(i, j) = <alpha_i, alpha_j^vee>.
  Eigen::MatrixXi cartan;

  int rank() const noexcept { return dim; }
  std::size_t num_positive() const noexcept { return positive_roots.size(); }
  int num_classes() const noexcept { return static_cast<int>(length_classes.size()); }

  /// Length class of the simple root alpha_i (i = 1..n) or of alpha_0 (i = 0).
  int wall_class(int i) const;
  /// Inward normal alpha_i^vee of wall V_i, i = 0..n.
  Vector wall_normal(int i) const;
  /// Vector of sum_j c_j omega_j.
  Vector weight_vector(const std::vector<int>& coeffs) const;
};

RootSystem build_root_system(const CartanLabel& label);

/// Returns a copy with every vector mapped by the orthogonal matrix w.
/// Labels, coefficients and the Cartan matrix are unchanged.
RootSystem transformed(const RootSystem& rs, const Matrix& w);

/// Classical |W| for the label, computed from the closed-form order table.
std::size_t classical_weyl_order(const CartanLabel& label);
/// Classical |R+| for the label.
std::size_t classical_positive_count(const CartanLabel& label);

inline constexpr std::size_t kDefaultWeylCap = 100000;

struct WeylGroup {
  std::vector<Matrix> generators;
  /// Identity first, then breadth-first order of first discovery.
  std::vector<Matrix> elements;

  std::size_t order() const noexcept { return elements.size(); }
};

/// Enumerates W by breadth-first closure over the simple reflections.
/// Throws CapExceeded once more than `cap` elements are discovered.
WeylGroup weyl_group(const RootSystem& rs, std::size_t cap = kDefaultWeylCap);

/// Vertices {0, omega_1^vee/m_1, ..., omega_n^vee/m_n} of the fundamental alcove.
std::vector<Vector> alcove_vertices(const RootSystem& rs);

/// Barycentric coordinates of v with respect to alcove_vertices:
/// b_0 = 1 - <phi, v>, b_i = m_i <alpha_i, v>.
Vector alcove_barycentric(const RootSystem& rs, const Vector& v);

/// True when 0 <= <alpha_i, v> and <phi, v> <= 1 up to `tol`.
bool in_closed_alcove(const RootSystem& rs, const Vector& v, double tol = 1e-12);

/// Maps v into the closed alcove by repeated wall reflections s_0..s_n.
Vector fold_to_alcove(const RootSystem& rs, Vector v);

struct DominantWeight {
  std::vector<int> coeffs; // over fundamental weights
  Vector vec;

  bool is_dominant() const;
  bool is_strictly_dominant() const;
  int height() const;
};

DominantWeight make_weight(const RootSystem& rs, std::vector<int> coeffs);
DominantWeight rho_weight(const RootSystem& rs);

/// All weights with sum c_j <= height_bound and c_j >= (strict ? 1 : 0).
///
/// Strict lists are sorted by |mu - rho| so truncations are spectral prefixes
/// at zero coupling; non-strict lists by |mu|. Ties are broken by descending
/// lexicographic order of the coefficients.
std::vector<DominantWeight> dominant_weights(const RootSystem& rs, int height_bound,
                                             bool strict);

} // namespace bethe
