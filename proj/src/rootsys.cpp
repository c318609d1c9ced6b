#include "bethe/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <functional>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace bethe {

namespace {

struct DynkinData {
  std::vector<double> sq_lengths;
  std::vector<std::pair<int, int>> bonds;
};

// Bourbaki numbering, 0-based.
DynkinData dynkin(const CartanLabel& label) {
  const int n = label.rank;
  DynkinData d;
  d.sq_lengths.assign(n, 2.0);
  auto chain = [&](int upto) {
    for (int i = 0; i + 1 < upto; ++i) d.bonds.emplace_back(i, i + 1);
  };
  switch (label.family) {
  case Family::A:
    chain(n);
    break;
  case Family::B:
    chain(n);
    std::fill(d.sq_lengths.begin(), d.sq_lengths.end() - 1, 4.0);
    break;
  case Family::C:
    chain(n);
    d.sq_lengths.back() = 4.0;
    break;
  case Family::D:
    chain(n - 1);
    d.bonds.emplace_back(n - 3, n - 1);
    break;
  case Family::E:
    // 1-3-4-5-6(-7-8) with 2 attached to 4
    d.bonds.emplace_back(0, 2);
    d.bonds.emplace_back(1, 3);
    for (int i = 2; i + 1 < n; ++i) d.bonds.emplace_back(i, i + 1);
    break;
  case Family::F:
    chain(4);
    d.sq_lengths = {4.0, 4.0, 2.0, 2.0};
    break;
  case Family::G:
    d.bonds.emplace_back(0, 1);
    d.sq_lengths = {2.0, 6.0};
    break;
  }
  return d;
}

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

struct MatrixKeyHash {
  std::size_t operator()(const std::vector<long long>& key) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long x : key) {
      h ^= std::hash<long long>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

std::vector<long long> matrix_key(const Matrix& m) {
  std::vector<long long> key(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    key[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e9);
  }
  return key;
}

Matrix reflection(const Vector& a) {
  const auto n = a.size();
  return Matrix::Identity(n, n) - 2.0 * a * a.transpose() / a.squaredNorm();
}

} // namespace

CartanLabel CartanLabel::parse(std::string_view text) {
  if (text.size() < 2) throw DomainError("cartan label '" + std::string(text) + "' is too short");
  CartanLabel l;
  switch (std::toupper(static_cast<unsigned char>(text[0]))) {
  case 'A': l.family = Family::A; break;
  case 'B': l.family = Family::B; break;
  case 'C': l.family = Family::C; break;
  case 'D': l.family = Family::D; break;
  case 'E': l.family = Family::E; break;
  case 'F': l.family = Family::F; break;
  case 'G': l.family = Family::G; break;
  default:
    throw DomainError("cartan label '" + std::string(text) + "': unknown family");
  }
  int rank = 0;
  for (char ch : text.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw DomainError("cartan label '" + std::string(text) + "': rank must be an integer");
    rank = rank * 10 + (ch - '0');
    if (rank > 1000) throw DomainError("cartan label '" + std::string(text) + "': rank too large");
  }
  l.rank = rank;
  l.validate();
  return l;
}

std::string CartanLabel::str() const {
  static constexpr char names[] = {'A', 'B', 'C', 'D', 'E', 'F', 'G'};
  return std::string(1, names[static_cast<int>(family)]) + std::to_string(rank);
}

void CartanLabel::validate() const {
  const std::string name = str();
  auto fail = [&](const char* constraint) {
    throw DomainError("inadmissible cartan label " + name + ": requires " + constraint);
  };
  switch (family) {
  case Family::A: if (rank < 1) fail("n >= 1"); break;
  case Family::B: if (rank < 2) fail("n >= 2"); break;
  case Family::C: if (rank < 2) fail("n >= 2"); break;
  case Family::D: if (rank < 4) fail("n >= 4"); break;
  case Family::E: if (rank < 6 || rank > 8) fail("n in {6,7,8}"); break;
  case Family::F: if (rank != 4) fail("n = 4"); break;
  case Family::G: if (rank != 2) fail("n = 2"); break;
  }
}

std::size_t classical_weyl_order(const CartanLabel& label) {
  const int n = label.rank;
  switch (label.family) {
  case Family::A: return factorial(n + 1);
  case Family::B:
  case Family::C: return (std::size_t{1} << n) * factorial(n);
  case Family::D: return (std::size_t{1} << (n - 1)) * factorial(n);
  case Family::E: return n == 6 ? 51840 : n == 7 ? 2903040 : 696729600;
  case Family::F: return 1152;
  case Family::G: return 12;
  }
  return 0;
}

std::size_t classical_positive_count(const CartanLabel& label) {
  const std::size_t n = static_cast<std::size_t>(label.rank);
  switch (label.family) {
  case Family::A: return n * (n + 1) / 2;
  case Family::B:
  case Family::C: return n * n;
  case Family::D: return n * (n - 1);
  case Family::E: return n == 6 ? 36 : n == 7 ? 63 : 120;
  case Family::F: return 24;
  case Family::G: return 6;
  }
  return 0;
}

int RootSystem::wall_class(int i) const {
  if (i < 0 || i > dim) throw DomainError("wall index out of range");
  if (i == 0) return root_class.back(); // highest root is last in height order
  return root_class[static_cast<std::size_t>(i - 1)];
}

Vector RootSystem::wall_normal(int i) const {
  if (i < 0 || i > dim) throw DomainError("wall index out of range");
  if (i == 0) return -coroots.back();
  return coroots[static_cast<std::size_t>(i - 1)];
}

Vector RootSystem::weight_vector(const std::vector<int>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != dim)
    throw DomainError("weight needs " + std::to_string(dim) + " coefficients");
  Vector v = Vector::Zero(dim);
  for (int j = 0; j < dim; ++j) v += coeffs[static_cast<std::size_t>(j)] * fundamental_weights[static_cast<std::size_t>(j)];
  return v;
}

RootSystem build_root_system(const CartanLabel& label) {
  label.validate();
  const int n = label.rank;
  const DynkinData dd = dynkin(label);

  Matrix gram = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) gram(i, i) = dd.sq_lengths[static_cast<std::size_t>(i)];
  for (auto [i, j] : dd.bonds) {
    const double v = -0.5 * std::max(dd.sq_lengths[static_cast<std::size_t>(i)],
                                     dd.sq_lengths[static_cast<std::size_t>(j)]);
    gram(i, j) = gram(j, i) = v;
  }
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("simple-root Gram matrix is not positive definite");
  const Matrix lower = llt.matrixL();

  RootSystem rs;
  rs.label = label;
  rs.dim = n;
  for (int i = 0; i < n; ++i) rs.simple_roots.push_back(lower.row(i).transpose());

  rs.cartan.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      rs.cartan(i, j) = static_cast<int>(std::lround(2.0 * gram(i, j) / gram(j, j)));

  // Every root is W-conjugate to a simple root, so closing the simple roots
  // under simple reflections in integer coordinates yields R.
  std::set<std::vector<int>> roots;
  std::deque<std::vector<int>> frontier;
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    roots.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    auto b = frontier.front();
    frontier.pop_front();
    for (int i = 0; i < n; ++i) {
      int pairing = 0;
      for (int j = 0; j < n; ++j) pairing += b[static_cast<std::size_t>(j)] * rs.cartan(j, i);
      auto nb = b;
      nb[static_cast<std::size_t>(i)] -= pairing;
      if (roots.insert(nb).second) frontier.push_back(nb);
    }
  }
  std::vector<std::vector<int>> positive;
  for (const auto& r : roots)
    if (std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; })) positive.push_back(r);
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) {
    const int ha = std::accumulate(a.begin(), a.end(), 0);
    const int hb = std::accumulate(b.begin(), b.end(), 0);
    if (ha != hb) return ha < hb;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  });
  rs.positive_root_coeffs = positive;

  for (const auto& c : positive) {
    Vector v = Vector::Zero(n);
    for (int j = 0; j < n; ++j) v += c[static_cast<std::size_t>(j)] * rs.simple_roots[static_cast<std::size_t>(j)];
    rs.positive_roots.push_back(v);
    rs.coroots.push_back(2.0 * v / v.squaredNorm());
  }

  rs.highest_root = rs.positive_roots.back();
  rs.alpha0 = -rs.highest_root;
  rs.marks = positive.back();

  Matrix simple(n, n), simple_co(n, n);
  for (int i = 0; i < n; ++i) {
    simple.row(i) = rs.simple_roots[static_cast<std::size_t>(i)].transpose();
    simple_co.row(i) = rs.coroots[static_cast<std::size_t>(i)].transpose();
  }
  // <omega_j, alpha_i^vee> = delta_ij  =>  omega = columns of simple_co^{-1}
  const Matrix omega = simple_co.inverse();
  const Matrix coomega = simple.inverse();
  rs.rho = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    rs.fundamental_weights.push_back(omega.col(j));
    rs.fundamental_coweights.push_back(coomega.col(j));
  }
  for (const auto& a : rs.positive_roots) rs.rho += 0.5 * a;

  for (const auto& a : rs.positive_roots) {
    const double l = a.squaredNorm();
    auto it = std::find_if(rs.length_classes.begin(), rs.length_classes.end(),
                           [&](double c) { return std::abs(c - l) < 1e-9; });
    if (it == rs.length_classes.end()) rs.length_classes.push_back(std::round(l));
  }
  std::sort(rs.length_classes.begin(), rs.length_classes.end());
  for (const auto& a : rs.positive_roots) {
    const double l = a.squaredNorm();
    for (int c = 0; c < rs.num_classes(); ++c)
      if (std::abs(rs.length_classes[static_cast<std::size_t>(c)] - l) < 1e-9) rs.root_class.push_back(c);
  }
  return rs;
}

RootSystem transformed(const RootSystem& rs, const Matrix& w) {
  RootSystem out = rs;
  auto map_all = [&](std::vector<Vector>& vs) {
    for (auto& v : vs) v = w * v;
  };
  map_all(out.simple_roots);
  map_all(out.positive_roots);
  map_all(out.coroots);
  map_all(out.fundamental_weights);
  map_all(out.fundamental_coweights);
  out.highest_root = w * rs.highest_root;
  out.alpha0 = w * rs.alpha0;
  out.rho = w * rs.rho;
  return out;
}

WeylGroup weyl_group(const RootSystem& rs, std::size_t cap) {
  const int n = rs.dim;
  WeylGroup g;
  for (const auto& a : rs.simple_roots) g.generators.push_back(reflection(a));

  std::unordered_set<std::vector<long long>, MatrixKeyHash> seen;
  const Matrix id = Matrix::Identity(n, n);
  g.elements.push_back(id);
  seen.insert(matrix_key(id));
  std::size_t head = 0;
  while (head < g.elements.size()) {
    const Matrix current = g.elements[head++];
    for (const auto& s : g.generators) {
      Matrix next = s * current;
      if (seen.insert(matrix_key(next)).second) {
        if (g.elements.size() >= cap) {
          throw CapExceeded("Weyl group of " + rs.label.str() + " has more than " +
                            std::to_string(cap) + " elements (classical order " +
                            std::to_string(classical_weyl_order(rs.label)) + ")");
        }
        g.elements.push_back(std::move(next));
      }
    }
  }
  return g;
}

std::vector<Vector> alcove_vertices(const RootSystem& rs) {
  std::vector<Vector> v;
  v.push_back(Vector::Zero(rs.dim));
  for (int j = 0; j < rs.dim; ++j)
    v.push_back(rs.fundamental_coweights[static_cast<std::size_t>(j)] / rs.marks[static_cast<std::size_t>(j)]);
  return v;
}

Vector alcove_barycentric(const RootSystem& rs, const Vector& v) {
  Vector b(rs.dim + 1);
  b(0) = 1.0 - rs.highest_root.dot(v);
  for (int i = 0; i < rs.dim; ++i)
    b(i + 1) = rs.marks[static_cast<std::size_t>(i)] * rs.simple_roots[static_cast<std::size_t>(i)].dot(v);
  return b;
}

bool in_closed_alcove(const RootSystem& rs, const Vector& v, double tol) {
  if (rs.highest_root.dot(v) > 1.0 + tol) return false;
  for (const auto& a : rs.simple_roots)
    if (a.dot(v) < -tol) return false;
  return true;
}

Vector fold_to_alcove(const RootSystem& rs, Vector v) {
  // Each reflection strictly decreases the number of separating affine
  // hyperplanes, so this terminates; the cap only guards against NaN input.
  for (int iter = 0; iter < 100000; ++iter) {
    bool moved = false;
    for (int i = 0; i < rs.dim; ++i) {
      const double p = rs.simple_roots[static_cast<std::size_t>(i)].dot(v);
      if (p < 0.0) {
        v -= p * rs.coroots[static_cast<std::size_t>(i)];
        moved = true;
      }
    }
    const double h = rs.highest_root.dot(v);
    if (h > 1.0) {
      v -= (h - 1.0) * rs.coroots.back();
      moved = true;
    }
    if (!moved) return v;
  }
  throw Error("fold_to_alcove did not terminate");
}

bool DominantWeight::is_dominant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c >= 0; });
}

bool DominantWeight::is_strictly_dominant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c >= 1; });
}

int DominantWeight::height() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0); }

DominantWeight make_weight(const RootSystem& rs, std::vector<int> coeffs) {
  DominantWeight w;
  w.vec = rs.weight_vector(coeffs);
  w.coeffs = std::move(coeffs);
  return w;
}

DominantWeight rho_weight(const RootSystem& rs) {
  return make_weight(rs, std::vector<int>(static_cast<std::size_t>(rs.dim), 1));
}

std::vector<DominantWeight> dominant_weights(const RootSystem& rs, int height_bound, bool strict) {
  if (height_bound < 0) throw DomainError("height_bound must be >= 0");
  const int lo = strict ? 1 : 0;
  std::vector<DominantWeight> out;
  std::vector<int> c(static_cast<std::size_t>(rs.dim), lo);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == rs.dim) {
      out.push_back(make_weight(rs, c));
      return;
    }
    for (int v = lo; used + v <= height_bound; ++v) {
      c[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, used + v);
    }
  };
  rec(0, 0);
  const Vector shift = strict ? rs.rho : Vector::Zero(rs.dim);
  std::stable_sort(out.begin(), out.end(), [&](const DominantWeight& a, const DominantWeight& b) {
    const double na = (a.vec - shift).norm();
    const double nb = (b.vec - shift).norm();
    if (std::abs(na - nb) > 1e-9 * (1.0 + na)) return na < nb;
    return std::lexicographical_compare(b.coeffs.begin(), b.coeffs.end(), a.coeffs.begin(),
                                        a.coeffs.end());
  });
  return out;
}

} // namespace bethe
