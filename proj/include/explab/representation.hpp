#pragma once

// Permutation representation matrices and the exact linear algebra around
// them: fixed spaces, commutant dimensions, eigenspace identifications and
// the mean-zero compression.  Everything that produces an integer goes
// through rational arithmetic; floats only appear on the spectral side.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "explab/errors.hpp"
#include "explab/group.hpp"
#include "explab/matrix.hpp"
#include "explab/sparse_kernel.hpp"

namespace explab {

// P maps the basis vector at x to the basis vector at sigma(x).
template <typename T = double>
DenseMatrix<T> perm_matrix(const Permutation& sigma) {
  DenseMatrix<T> m(sigma.size(), sigma.size());
  for (int x = 0; x < sigma.size(); ++x) m(sigma(x), x) = T(1);
  return m;
}

// The rank-one projection z onto the normalized constant vector: all
// entries 1/n, exactly rational.
inline MatQ mean_projection_exact(int n) {
  MatQ z(n, n, Rational(1, n));
  return z;
}

inline std::vector<double> constant_unit_vector(int n) {
  return std::vector<double>(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
}

// A space together with its generator permutations: the raw material of the
// unitary representation pi_p and its derived operators.
class RepresentationBundle {
 public:
  static RepresentationBundle build(ProjectiveSpace space, const GeneratorSet& gens) {
    RepresentationBundle b(std::move(space));
    for (const auto& g : gens.elements) b.gens_.emplace_back(g.label, permutation_of(g.matrix, b.space_));
    return b;
  }

  const ProjectiveSpace& space() const { return space_; }
  int dim() const { return space_.size(); }
  const std::vector<std::pair<std::string, Permutation>>& generators() const { return gens_; }

  std::vector<Permutation> permutations() const {
    std::vector<Permutation> out;
    out.reserve(gens_.size());
    for (const auto& [label, perm] : gens_) out.push_back(perm);
    return out;
  }

  const Permutation& permutation(const std::string& label) const {
    for (const auto& [l, perm] : gens_)
      if (l == label) return perm;
    throw std::domain_error("RepresentationBundle: no generator labelled " + label);
  }

  Mat op(const std::string& label) const { return perm_matrix<double>(permutation(label)); }
  MatQ op_exact(const std::string& label) const { return perm_matrix<Rational>(permutation(label)); }
  MatQ z_exact() const { return mean_projection_exact(dim()); }
  Mat z() const { return to_double(z_exact()); }
  std::vector<double> chi() const { return constant_unit_vector(dim()); }

 private:
  explicit RepresentationBundle(ProjectiveSpace space) : space_(std::move(space)) {}
  ProjectiveSpace space_;
  std::vector<std::pair<std::string, Permutation>> gens_;
};

struct FixedSpaceResult {
  int dimension = 0;
  // exact orthogonal (not normalized) spanning set of the fixed space
  std::vector<std::vector<Rational>> rational_basis;
  // the same basis normalized in floating point
  std::vector<std::vector<double>> orthonormal_basis;
};

namespace detail {

inline FixedSpaceResult fixed_space_from_kernel(KernelResult kernel) {
  FixedSpaceResult out;
  out.dimension = kernel.nullity;
  out.rational_basis = orthogonalize(std::move(kernel.basis));
  for (const auto& v : out.rational_basis) {
    std::vector<double> w(v.size());
    double norm2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      w[i] = to_double(v[i]);
      norm2 += w[i] * w[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : w) x *= inv;
    out.orthonormal_basis.push_back(std::move(w));
  }
  return out;
}

}  // namespace detail

// Joint fixed space of a family of permutation operators, as the exact
// kernel of the stacked system (P - 1)v = 0.  The dimension is checked
// against the orbit count of the generated group, which counts the same
// thing by a combinatorial route.
inline FixedSpaceResult fixed_space(const std::vector<Permutation>& perms) {
  if (perms.empty()) throw std::domain_error("fixed_space: empty operator list");
  const int n = perms.front().size();
  SparseSystemQ sys(n);
  for (const auto& sigma : perms) {
    if (sigma.size() != n) throw std::domain_error("fixed_space: mixed dimensions");
    for (int x = 0; x < n; ++x)
      if (sigma(x) != x) sys.add_row({{sigma(x), Rational(1)}, {x, Rational(-1)}});
  }
  FixedSpaceResult out = detail::fixed_space_from_kernel(rational_kernel(sys));
  const int orbits = orbit_count(perms, n);
  if (orbits != out.dimension)
    throw consistency_error("fixed_space: kernel dimension " + std::to_string(out.dimension) +
                            " != orbit count " + std::to_string(orbits));
  return out;
}

// Generic rational-operator variant (no combinatorial oracle available).
inline FixedSpaceResult fixed_space(const std::vector<MatQ>& ops) {
  if (ops.empty()) throw std::domain_error("fixed_space: empty operator list");
  const int n = ops.front().rows();
  SparseSystemQ sys(n);
  for (const auto& op : ops) {
    if (op.rows() != n || op.cols() != n) throw std::domain_error("fixed_space: mixed dimensions");
    for (int y = 0; y < n; ++y) {
      std::vector<std::pair<std::int32_t, Rational>> row;
      for (int x = 0; x < n; ++x) {
        Rational v = op(y, x);
        if (x == y) v -= 1;
        if (v != 0) row.emplace_back(x, v);
      }
      sys.add_row(row);
    }
  }
  return detail::fixed_space_from_kernel(rational_kernel(sys));
}

// dim { T : P T = T P for all generators }, computed two independent ways:
// exact rank-nullity of the commutation system, and the number of orbits of
// the diagonal action on ordered pairs.  The two must agree.
inline int commutant_dimension(const std::vector<Permutation>& perms) {
  if (perms.empty()) throw std::domain_error("commutant_dimension: empty permutation list");
  const int n = perms.front().size();

  // P T = T P for a permutation matrix P means T(sigma x, sigma y) = T(x, y)
  SparseSystemQ sys(n * n);
  for (const auto& sigma : perms) {
    if (sigma.size() != n) throw std::domain_error("commutant_dimension: mixed sizes");
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const std::int32_t from = static_cast<std::int32_t>(x * n + y);
        const std::int32_t to = static_cast<std::int32_t>(sigma(x) * n + sigma(y));
        if (from != to) sys.add_row({{to, Rational(1)}, {from, Rational(-1)}});
      }
  }
  const int by_kernel = rational_kernel(sys, /*want_basis=*/false).nullity;

  std::vector<Permutation> diag;
  diag.reserve(perms.size());
  for (const auto& sigma : perms) diag.push_back(tensor_permutation(sigma, sigma));
  const int by_orbitals = orbit_count(diag, n * n);

  if (by_kernel != by_orbitals)
    throw consistency_error("commutant_dimension: linear solve gives " + std::to_string(by_kernel) +
                            ", orbital count gives " + std::to_string(by_orbitals));
  return by_kernel;
}

struct HEigenspaceReport {
  std::int64_t p = 0;
  int dimension = 0;
  bool expected_basis_spans = false;
  bool pass() const { return dimension == 2 && expected_basis_spans; }
};

// The 1-eigenspace of pi_p(h) on P^1(F_p) is spanned by the indicator of
// the affine line and the point at infinity; checked exactly.
inline HEigenspaceReport h_eigenspace_check(const ProjectiveSpace& space) {
  if (space.dim() != 1) throw std::domain_error("h_eigenspace_check: P^1 spaces only");
  const Permutation sigma = permutation_of(generator_matrix("h", Group::SL2), space);
  const FixedSpaceResult fs = fixed_space(std::vector<Permutation>{sigma});

  HEigenspaceReport rep;
  rep.p = space.p();
  rep.dimension = fs.dimension;

  const int n = space.size();
  const int inf = space.index_infinity();
  std::vector<Rational> affine_indicator(static_cast<std::size_t>(n), Rational(1));
  affine_indicator[static_cast<std::size_t>(inf)] = 0;
  std::vector<Rational> delta_inf(static_cast<std::size_t>(n), Rational(0));
  delta_inf[static_cast<std::size_t>(inf)] = 1;

  const auto fixed_by_sigma = [&](const std::vector<Rational>& v) {
    for (int x = 0; x < n; ++x)
      if (v[static_cast<std::size_t>(sigma(x))] != v[static_cast<std::size_t>(x)]) return false;
    return true;
  };
  // both candidate vectors lie in the eigenspace; with dimension 2 that
  // pins the eigenspace down exactly
  rep.expected_basis_spans = fixed_by_sigma(affine_indicator) && fixed_by_sigma(delta_inf);
  return rep;
}

// Orthonormal basis of the complement of the constant vector: column k has
// k entries 1/sqrt(k(k+1)) followed by -k/sqrt(k(k+1)).
inline Mat helmert_complement_basis(int n) {
  Mat b(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) b(i, k - 1) = s;
    b(k, k - 1) = -static_cast<double>(k) * s;
  }
  return b;
}

// Compression of op to the mean-zero subspace; op must commute with the
// projection onto constants, i.e. have constant row and column sums.
inline Mat meanzero_restriction(const Mat& op) {
  if (!op.is_square()) throw std::domain_error("meanzero_restriction: non-square operator");
  const int n = op.rows();
  if (n < 2) throw std::domain_error("meanzero_restriction: dimension too small");
  const double scale = std::max(1.0, max_abs(op));
  double first = 0;
  for (int j = 0; j < n; ++j) first += op(0, j);
  for (int i = 0; i < n; ++i) {
    double row = 0, col = 0;
    for (int j = 0; j < n; ++j) {
      row += op(i, j);
      col += op(j, i);
    }
    if (std::abs(row - first) > 1e-12 * scale * n || std::abs(col - first) > 1e-12 * scale * n)
      throw std::domain_error("meanzero_restriction: operator does not commute with the mean projection");
  }
  const Mat b = helmert_complement_basis(n);
  return b.transpose() * (op * b);
}

}  // namespace explab
