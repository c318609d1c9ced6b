#include "bethe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace bethe {

namespace {

// Affine map of the Kuhn simplex {1 >= y_1 >= ... >= y_n >= 0} onto the alcove:
// x = v_0 + sum_j y_j (v_j - v_{j-1}) sends (1,..,1,0,..,0) with j ones to v_j.
struct KuhnMap {
  Vector origin;
  Matrix edges; // column j-1 = v_j - v_{j-1}

  explicit KuhnMap(const std::vector<Vector>& verts) {
    const auto n = static_cast<Eigen::Index>(verts.size() - 1);
    origin = verts.front();
    edges.resize(n, n);
    for (Eigen::Index j = 1; j <= n; ++j)
      edges.col(j - 1) = verts[static_cast<std::size_t>(j)] - verts[static_cast<std::size_t>(j - 1)];
  }
  Vector operator()(const Vector& y) const { return origin + edges * y; }
};

void nonincreasing_corners(int n, int m, std::vector<int>& z, int pos,
                           const std::function<void(const std::vector<int>&)>& emit) {
  if (pos == n) {
    emit(z);
    return;
  }
  const int hi = pos == 0 ? m - 1 : z[static_cast<std::size_t>(pos - 1)];
  for (int v = 0; v <= hi; ++v) {
    z[static_cast<std::size_t>(pos)] = v;
    nonincreasing_corners(n, m, z, pos + 1, emit);
  }
}

// All integer compositions of `total` into `parts` parts, each at least `lo`,
// in lexicographic order.
void compositions(int parts, int total, int lo, std::vector<int>& a, int pos,
                  std::vector<std::vector<int>>& out) {
  if (pos == parts - 1) {
    if (total >= lo) {
      a[static_cast<std::size_t>(pos)] = total;
      out.push_back(a);
    }
    return;
  }
  for (int v = lo; v <= total - lo * (parts - 1 - pos); ++v) {
    a[static_cast<std::size_t>(pos)] = v;
    compositions(parts, total - v, lo, a, pos + 1, out);
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Weighted sum and its standard error for equal-weight Monte Carlo nodes.
IntegralResult mc_estimate(const std::vector<double>& w, const Eigen::VectorXcd& vals) {
  Complex sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < vals.size(); ++i) sum += w[static_cast<std::size_t>(i)] * vals(i);
  const double n = static_cast<double>(vals.size());
  const double vol = std::accumulate(w.begin(), w.end(), 0.0);
  const Complex mean = sum / vol;
  double var = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) var += std::norm(vals(i) - mean);
  var /= std::max(1.0, n - 1.0);
  return {sum, vol * std::sqrt(var / n)};
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void append_cells(const RootSystem& rs, int depth, std::vector<Vector>& nodes,
                  std::vector<double>& weights) {
  const int n = rs.dim;
  const Matrix bary = stroud_degree2_barycentric(n);
  const auto cells = subdivide_alcove(rs, depth);
  const double w = volume(rs) / static_cast<double>(cells.size()) / (n + 1);
  nodes.reserve(cells.size() * static_cast<std::size_t>(n + 1));
  weights.reserve(nodes.capacity());
  for (const auto& cell : cells) {
    for (int q = 0; q <= n; ++q) {
      nodes.push_back((bary.row(q) * cell).transpose());
      weights.push_back(w);
    }
  }
}

} // namespace

std::string to_string(RuleKind kind) {
  return kind == RuleKind::SubdivisionGauss ? "subdivision-gauss" : "monte-carlo";
}

RuleKind parse_rule_kind(const std::string& text) {
  if (text == "subdivision-gauss") return RuleKind::SubdivisionGauss;
  if (text == "monte-carlo") return RuleKind::MonteCarlo;
  throw DomainError("unknown quadrature kind '" + text + "'");
}

double volume(const RootSystem& rs) {
  const auto verts = alcove_vertices(rs);
  Matrix e(rs.dim, rs.dim);
  for (int j = 1; j <= rs.dim; ++j) e.col(j - 1) = verts[static_cast<std::size_t>(j)] - verts[0];
  double fact = 1.0;
  for (int i = 2; i <= rs.dim; ++i) fact *= i;
  return std::abs(e.determinant()) / fact;
}

double alcove_diameter(const RootSystem& rs) {
  const auto verts = alcove_vertices(rs);
  double d = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) d = std::max(d, (verts[i] - verts[j]).norm());
  return d;
}

Matrix stroud_degree2_barycentric(int n) {
  const double b = (n + 2 - std::sqrt(static_cast<double>(n + 2))) / ((n + 1.0) * (n + 2.0));
  const double a = 1.0 - n * b;
  Matrix m = Matrix::Constant(n + 1, n + 1, b);
  m.diagonal().setConstant(a);
  return m;
}

std::vector<Matrix> subdivide_alcove(const RootSystem& rs, int depth) {
  if (depth < 0 || depth > 20) throw DomainError("subdivision depth must be in [0, 20]");
  const int n = rs.dim;
  const int m = 1 << depth;
  const KuhnMap map(alcove_vertices(rs));

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::vector<Matrix> cells;
  std::vector<int> z(static_cast<std::size_t>(n), 0);
  nonincreasing_corners(n, m, z, 0, [&](const std::vector<int>& corner) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      // Cell vertices corner, corner + e_p0, corner + e_p0 + e_p1, ...
      Matrix ys(n + 1, n);
      Vector y(n);
      for (int i = 0; i < n; ++i) y(i) = corner[static_cast<std::size_t>(i)];
      ys.row(0) = y.transpose();
      for (int s = 0; s < n; ++s) {
        y(perm[static_cast<std::size_t>(s)]) += 1.0;
        ys.row(s + 1) = y.transpose();
      }
      const Vector centroid = ys.colwise().mean().transpose();
      bool inside = centroid(0) < m && centroid(n - 1) > 0.0;
      for (int i = 0; inside && i + 1 < n; ++i) inside = centroid(i) > centroid(i + 1);
      if (!inside) continue;
      Matrix cell(n + 1, n);
      for (int r = 0; r <= n; ++r) cell.row(r) = map(ys.row(r).transpose() / m).transpose();
      cells.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return cells;
}

QuadratureRule build_rule(const RootSystem& rs, const RuleParams& params) {
  QuadratureRule rule;
  rule.params = params;
  if (params.kind == RuleKind::SubdivisionGauss) {
    if (params.depth < 0 || params.depth > 20) throw DomainError("subdivision depth must be in [0, 20]");
    append_cells(rs, params.depth, rule.nodes, rule.weights);
    if (params.depth > 0) append_cells(rs, params.depth - 1, rule.coarse_nodes, rule.coarse_weights);
    return rule;
  }
  if (params.nodes < 1) throw DomainError("Monte Carlo node count must be >= 1");
  const auto verts = alcove_vertices(rs);
  const double w = volume(rs) / static_cast<double>(params.nodes);
  std::mt19937_64 gen(params.seed);
  rule.nodes.reserve(params.nodes);
  rule.weights.assign(params.nodes, w);
  Vector e(rs.dim + 1);
  for (std::size_t s = 0; s < params.nodes; ++s) {
    for (int i = 0; i <= rs.dim; ++i) e(i) = -std::log1p(-uniform01(gen));
    e /= e.sum();
    Vector x = Vector::Zero(rs.dim);
    for (int i = 0; i <= rs.dim; ++i) x += e(i) * verts[static_cast<std::size_t>(i)];
    rule.nodes.push_back(std::move(x));
  }
  return rule;
}

IntegralResult integrate(const QuadratureRule& rule, const Integrand& f) {
  if (rule.params.kind == RuleKind::MonteCarlo) {
    Eigen::VectorXcd vals(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t i = 0; i < rule.size(); ++i) vals(static_cast<Eigen::Index>(i)) = f(rule.nodes[i]);
    return mc_estimate(rule.weights, vals);
  }
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  if (rule.coarse_nodes.empty()) return {sum, std::numeric_limits<double>::infinity()};
  Complex coarse{0.0, 0.0};
  for (std::size_t i = 0; i < rule.coarse_nodes.size(); ++i)
    coarse += rule.coarse_weights[i] * f(rule.coarse_nodes[i]);
  return {sum, std::abs(sum - coarse)};
}

int resolution_depth(const RootSystem& rs, double max_lambda_norm, int min_depth, int max_depth) {
  const double scale = max_lambda_norm * alcove_diameter(rs);
  int d = std::max(0, min_depth);
  while (d < max_depth && scale / std::ldexp(1.0, d) > 1.0) ++d;
  return d;
}

Matrix GramResult::normalized() const {
  const auto n = matrix.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = std::abs(matrix(i, j)) / std::sqrt(matrix(i, i).real() * matrix(j, j).real());
  return out;
}

GramResult gram(const std::vector<BetheFunction>& functions, const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(functions.size());
  auto tabulate = [&](const std::vector<Vector>& nodes) {
    Eigen::MatrixXcd vals(static_cast<Eigen::Index>(nodes.size()), n);
    for (Eigen::Index f = 0; f < n; ++f)
      for (std::size_t p = 0; p < nodes.size(); ++p)
        vals(static_cast<Eigen::Index>(p), f) = functions[static_cast<std::size_t>(f)](nodes[p]);
    return vals;
  };
  auto weighted = [&](const Eigen::MatrixXcd& vals, const std::vector<double>& w) {
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    // G_ij = sum_p w_p phi_i(p) conj(phi_j(p))
    Eigen::MatrixXcd g = vals.transpose() * wv.cast<Complex>().asDiagonal() * vals.conjugate();
    return g;
  };

  GramResult out;
  const auto fine = tabulate(rule.nodes);
  out.matrix = weighted(fine, rule.weights);
  if (rule.params.kind == RuleKind::SubdivisionGauss && !rule.coarse_nodes.empty()) {
    Eigen::MatrixXcd coarse = weighted(tabulate(rule.coarse_nodes), rule.coarse_weights);
    out.error = (out.matrix - coarse).cwiseAbs();
  } else if (rule.params.kind == RuleKind::MonteCarlo) {
    out.error.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out.error(i, j) = mc_estimate(rule.weights, fine.col(i).cwiseProduct(fine.col(j).conjugate())).error;
  } else {
    out.error = Matrix::Constant(n, n, std::numeric_limits<double>::infinity());
  }
  for (const auto& f : functions) out.spectral_norms.push_back(f.lambda().norm());
  return out;
}

GramResult gram(const RootSystem& rs, const WeylGroup& weyl, const Coupling& k,
                const std::vector<BaeSolution>& solutions, const QuadratureRule& rule) {
  for (std::size_t i = 0; i < solutions.size(); ++i)
    for (std::size_t j = i + 1; j < solutions.size(); ++j)
      if (solutions[i].mu.coeffs == solutions[j].mu.coeffs)
        throw DomainError("gram requires pairwise distinct weights");
  std::vector<BetheFunction> fns;
  fns.reserve(solutions.size());
  for (const auto& s : solutions) fns.emplace_back(rs, weyl, k, s.lambda);
  return gram(fns, rule);
}

std::vector<WallSample> facet_rule(const RootSystem& rs, int wall, std::size_t count) {
  if (wall < 0 || wall > rs.dim)
    throw DomainError("wall index " + std::to_string(wall) + " outside 0.." + std::to_string(rs.dim));
  if (count < 1) throw DomainError("facet sample count must be >= 1");
  const auto verts = alcove_vertices(rs);
  std::vector<Vector> facet;
  for (int j = 0; j <= rs.dim; ++j)
    if (j != wall) facet.push_back(verts[static_cast<std::size_t>(j)]);
  const Vector normal = rs.wall_normal(wall);

  std::vector<WallSample> out;
  const int parts = static_cast<int>(facet.size());
  if (parts == 1) {
    out.push_back({wall, facet.front(), normal});
    return out;
  }
  int r = 1;
  while (binomial(r + parts - 1, parts - 1) < static_cast<double>(count)) ++r;
  std::vector<std::vector<int>> lattice;
  std::vector<int> a(static_cast<std::size_t>(parts));
  compositions(parts, r, 0, a, 0, lattice);
  const std::size_t total = lattice.size();
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t idx =
        count == 1 ? 0 : static_cast<std::size_t>(std::llround(static_cast<double>(s) * (total - 1) / (count - 1)));
    Vector p = Vector::Zero(rs.dim);
    for (int j = 0; j < parts; ++j)
      p += (static_cast<double>(lattice[idx][static_cast<std::size_t>(j)]) / r) * facet[static_cast<std::size_t>(j)];
    out.push_back({wall, std::move(p), normal});
  }
  return out;
}

std::vector<Vector> alcove_grid(const RootSystem& rs, std::size_t min_count) {
  const auto verts = alcove_vertices(rs);
  const int parts = rs.dim + 1;
  int r = parts;
  while (binomial(r - 1, parts - 1) < static_cast<double>(min_count)) ++r;
  std::vector<std::vector<int>> lattice;
  std::vector<int> a(static_cast<std::size_t>(parts));
  compositions(parts, r, 1, a, 0, lattice);
  std::vector<Vector> out;
  out.reserve(lattice.size());
  for (const auto& c : lattice) {
    Vector p = Vector::Zero(rs.dim);
    for (int j = 0; j < parts; ++j)
      p += (static_cast<double>(c[static_cast<std::size_t>(j)]) / r) * verts[static_cast<std::size_t>(j)];
    out.push_back(std::move(p));
  }
  return out;
}

void write_rule_csv(std::ostream& os, const QuadratureRule& rule, const std::string& metadata_json) {
  os << metadata_json << '\n';
  if (rule.nodes.empty()) return;
  const auto n = rule.nodes.front().size();
  for (Eigen::Index i = 0; i < n; ++i) os << "x_" << (i + 1) << ',';
  os << "weight\n" << std::setprecision(17);
  for (std::size_t p = 0; p < rule.size(); ++p) {
    for (Eigen::Index i = 0; i < n; ++i) os << rule.nodes[p](i) << ',';
    os << rule.weights[p] << '\n';
  }
}

void write_gram_csv(std::ostream& os, const GramResult& g, const std::string& metadata_json) {
  os << metadata_json << '\n';
  os << "i,j,re,im,abs_normalized,error\n" << std::setprecision(17);
  const Matrix nrm = g.normalized();
  for (Eigen::Index i = 0; i < g.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < g.matrix.cols(); ++j)
      os << i << ',' << j << ',' << g.matrix(i, j).real() << ',' << g.matrix(i, j).imag() << ','
         << nrm(i, j) << ',' << g.error(i, j) << '\n';
}

} // namespace bethe
