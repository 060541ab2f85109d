#pragma once

// Generator matrices and words of SL(2,Z) / SL(3,Z), and the permutations
// they induce on projective spaces through reduction mod p.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "explab/errors.hpp"
#include "explab/int_matrix.hpp"
#include "explab/projective.hpp"

namespace explab {

enum class Group { SL2, SL3 };

// SL2 labels: "I", "h" = [[1,1],[0,1]], "k" = [[0,1],[-1,0]].
// SL3 labels: "I", "e{i}{j}+" / "e{i}{j}-" for I +- e_ij (1-based indices),
// with "h" an alias for e21+.
inline IntMat generator_matrix(const std::string& label, Group group) {
  if (group == Group::SL2) {
    if (label == "I") return IntMat::identity(2);
    if (label == "h") {
      IntMat m = IntMat::identity(2);
      m.at(0, 1) = 1;
      return m;
    }
    if (label == "h^-1") {
      IntMat m = IntMat::identity(2);
      m.at(0, 1) = -1;
      return m;
    }
    if (label == "k") {
      IntMat m(2);
      m.at(0, 1) = 1;
      m.at(1, 0) = -1;
      return m;
    }
    throw std::domain_error("generator_matrix: unknown SL2 label " + label);
  }
  if (label == "I") return IntMat::identity(3);
  if (label == "h") return IntMat::elementary(3, 1, 0, 1);
  if (label.size() == 4 && label[0] == 'e') {
    const int i = label[1] - '1';
    const int j = label[2] - '1';
    const char sign = label[3];
    if (i >= 0 && i < 3 && j >= 0 && j < 3 && i != j && (sign == '+' || sign == '-'))
      return IntMat::elementary(3, i, j, sign == '+' ? 1 : -1);
  }
  throw std::domain_error("generator_matrix: unknown SL3 label " + label);
}

struct Generator {
  std::string label;
  IntMat matrix;
};

struct GeneratorSet {
  Group group;
  std::vector<Generator> elements;
  bool symmetric;
  bool contains_identity;

  const IntMat& matrix(const std::string& label) const {
    for (const auto& g : elements)
      if (g.label == label) return g.matrix;
    throw std::domain_error("GeneratorSet: no generator labelled " + label);
  }
};

// The three-element set {I, h, k} generating SL(2,Z) projectively.
inline GeneratorSet sl2_generating_set() {
  return GeneratorSet{Group::SL2,
                      {{"I", generator_matrix("I", Group::SL2)},
                       {"h", generator_matrix("h", Group::SL2)},
                       {"k", generator_matrix("k", Group::SL2)}},
                      /*symmetric=*/false,
                      /*contains_identity=*/true};
}

// {h, h^-1, k}: closed under inverses up to sign (k^-1 = -k), so every
// induced projective permutation matrix appears together with its transpose.
inline GeneratorSet sl2_symmetric_set() {
  return GeneratorSet{Group::SL2,
                      {{"h", generator_matrix("h", Group::SL2)},
                       {"h^-1", generator_matrix("h^-1", Group::SL2)},
                       {"k", generator_matrix("k", Group::SL2)}},
                      /*symmetric=*/true,
                      /*contains_identity=*/false};
}

// The thirteen-element symmetric set {I} u {I +- e_ij : i != j} for SL(3,Z).
inline GeneratorSet sl3_symmetric_set() {
  GeneratorSet s{Group::SL3, {}, /*symmetric=*/true, /*contains_identity=*/true};
  s.elements.push_back({"I", IntMat::identity(3)});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const std::string base = "e" + std::to_string(i + 1) + std::to_string(j + 1);
      s.elements.push_back({base + "+", IntMat::elementary(3, i, j, 1)});
      s.elements.push_back({base + "-", IntMat::elementary(3, i, j, -1)});
    }
  return s;
}

// A product of generator powers, evaluated mod p by square-and-multiply.
struct GroupWord {
  Group group;
  std::vector<std::pair<std::string, std::int64_t>> factors;

  IntMat eval_mod(std::int64_t p) const {
    IntMat m = IntMat::identity(group == Group::SL2 ? 2 : 3).mod(p);
    for (const auto& [label, exp] : factors) {
      if (exp == 0) throw std::domain_error("GroupWord: zero exponent");
      m = m.mul_mod(generator_matrix(label, group).pow_mod(exp, p), p);
    }
    return m;
  }
};

class Permutation {
 public:
  explicit Permutation(std::vector<std::int32_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (const std::int32_t v : images_) {
      if (v < 0 || v >= static_cast<std::int32_t>(images_.size()) || seen[static_cast<std::size_t>(v)])
        throw std::domain_error("Permutation: images are not a bijection");
      seen[static_cast<std::size_t>(v)] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<std::int32_t> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 0);
    return Permutation(std::move(im));
  }

  int size() const { return static_cast<int>(images_.size()); }
  std::int32_t operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<std::int32_t>& images() const { return images_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (images_[static_cast<std::size_t>(i)] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<std::int32_t> im(images_.size());
    for (int i = 0; i < size(); ++i) im[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
    return Permutation(std::move(im));
  }

  // (a * b)(x) = a(b(x))
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::domain_error("Permutation: size mismatch");
    std::vector<std::int32_t> im(a.images_.size());
    for (int i = 0; i < a.size(); ++i) im[static_cast<std::size_t>(i)] = a(b(i));
    return Permutation(std::move(im));
  }

  bool operator==(const Permutation& o) const = default;

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(images_.size(), false);
    for (int i = 0; i < size(); ++i) {
      if (seen[static_cast<std::size_t>(i)]) continue;
      std::vector<int> cyc;
      int j = i;
      while (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        cyc.push_back(j);
        j = images_[static_cast<std::size_t>(j)];
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

 private:
  std::vector<std::int32_t> images_;
};

inline Permutation permutation_of(const IntMat& m, const ProjectiveSpace& space) {
  std::vector<std::int32_t> im(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i)
    im[static_cast<std::size_t>(i)] = space.index_of(apply_matrix(m, space.point(i)));
  return Permutation(std::move(im));
}

inline Permutation permutation_of(const GroupWord& w, const ProjectiveSpace& space) {
  const int want = space.dim() + 1;
  const int have = w.group == Group::SL2 ? 2 : 3;
  if (want != have) throw std::domain_error("permutation_of: word group does not match space dimension");
  return permutation_of(w.eval_mod(space.p()), space);
}

// Permutation of the product index set, (a x b)(x*m + y) = a(x)*m + b(y).
inline Permutation tensor_permutation(const Permutation& a, const Permutation& b) {
  const std::int64_t n = a.size(), m = b.size();
  if (n * m > kMaxSpacePoints) throw resource_error("tensor_permutation: product too large");
  std::vector<std::int32_t> im(static_cast<std::size_t>(n * m));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < m; ++y)
      im[static_cast<std::size_t>(x * m + y)] = static_cast<std::int32_t>(a(x) * m + b(y));
  return Permutation(std::move(im));
}

// Orbits of the group generated by the given permutations (union-find).
inline int orbit_count(const std::vector<Permutation>& perms, int n) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (const auto& perm : perms) {
    if (perm.size() != n) throw std::domain_error("orbit_count: size mismatch");
    for (int i = 0; i < n; ++i) {
      const int ra = find(i), rb = find(perm(i));
      if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
    }
  }
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++count;
  return count;
}

inline bool is_transitive(const std::vector<Permutation>& perms, int n) {
  return orbit_count(perms, n) == 1;
}

struct ActionFormulaReport {
  std::int64_t p = 0;
  int points_checked = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

// Pointwise check that h acts by t -> t+1 (fixing infinity) and k acts by
// t -> -1/t with 0 and infinity swapped, on P^1(F_p).
inline ActionFormulaReport verify_action_formulas(std::int64_t p) {
  const ProjectiveSpace space = ProjectiveSpace::enumerate(p, 1);
  const Permutation sh = permutation_of(generator_matrix("h", Group::SL2), space);
  const Permutation sk = permutation_of(generator_matrix("k", Group::SL2), space);
  ActionFormulaReport rep;
  rep.p = p;
  const int inf = space.index_infinity();
  const auto expect = [&](const Permutation& s, int from, int to, const char* what) {
    ++rep.points_checked;
    if (s(from) != to)
      rep.failures.push_back(std::string(what) + " fails at point " + space.point(from).str());
  };
  for (std::int64_t t = 0; t < p; ++t)
    expect(sh, space.index_of_affine(t), space.index_of_affine(t + 1), "h: [t] -> [t+1]");
  expect(sh, inf, inf, "h: [inf] -> [inf]");
  expect(sk, space.index_of_affine(0), inf, "k: [0] -> [inf]");
  expect(sk, inf, space.index_of_affine(0), "k: [inf] -> [0]");
  for (std::int64_t t = 1; t < p; ++t)
    expect(sk, space.index_of_affine(t), space.index_of_affine(-mod_inverse(t, p)), "k: [t] -> [-1/t]");
  return rep;
}

}  // namespace explab
