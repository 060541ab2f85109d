#pragma once

// SL(3,Z) experiments on projective planes: Dirichlet prime chains, the
// half-plane sets X_p with their disjointness and 2/3 bounds, the averaging
// and cut-down operators s, t, r on Hilbert-Schmidt space, the isolated
// eigenvalue 2 of r with its spectral projection and trace, and the
// Kazhdan-style gap survey.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "explab/errors.hpp"
#include "explab/parallel.hpp"
#include "explab/representation.hpp"
#include "explab/sparse_kernel.hpp"
#include "explab/spectral.hpp"

namespace explab {

// ---------------------------------------------------------------------------
// prime chains

// Ascending odd primes with p = 1 mod q for every pair p > q in the chain
// (which forces p > 2q).
struct PrimeChain {
  std::vector<std::int64_t> primes;

  bool valid() const {
    if (primes.empty()) return false;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (!is_prime(primes[i]) || primes[i] == 2) return false;
      for (std::size_t j = 0; j < i; ++j) {
        if (primes[i] <= primes[j]) return false;
        if (primes[i] % primes[j] != 1) return false;
        if (primes[i] <= 2 * primes[j]) return false;
      }
    }
    return true;
  }
};

// Greedy chain: each new member is the least prime = 1 mod the product of
// all current members (so all congruences hold at once).
inline PrimeChain dirichlet_chain(int length, std::int64_t start = 3,
                                  std::int64_t search_cap = 200'000'000) {
  if (length < 1) throw std::domain_error("dirichlet_chain: length must be at least 1");
  if (!is_prime(start) || start == 2) throw std::domain_error("dirichlet_chain: start must be an odd prime");
  PrimeChain chain;
  chain.primes.push_back(start);
  while (static_cast<int>(chain.primes.size()) < length) {
    std::int64_t modulus = 1;
    for (const std::int64_t p : chain.primes) {
      if (modulus > search_cap / p) throw resource_error("dirichlet_chain: modulus exceeds the search cap");
      modulus *= p;
    }
    std::int64_t candidate = modulus + 1;
    while (candidate <= search_cap && !is_prime(candidate)) candidate += modulus;
    if (candidate > search_cap) throw resource_error("dirichlet_chain: no prime found below the search cap");
    chain.primes.push_back(candidate);
  }
  if (!chain.valid()) throw consistency_error("dirichlet_chain: produced chain violates its congruences");
  return chain;
}

// ---------------------------------------------------------------------------
// the sets X_p

// X_p = classes of (1 a b)^T with a even, read off from the representative
// scaled to have first coordinate 1.  |X_p| = (p^2+p)/2, strictly between
// |L_p|/3 and |L_p|/2.
struct CharacteristicSet {
  std::int64_t p = 0;
  int space_size = 0;
  std::vector<char> member;  // indicator over point indices
  std::int64_t size = 0;

  bool contains(int i) const { return member[static_cast<std::size_t>(i)] != 0; }

  std::vector<double> indicator() const {
    std::vector<double> e(member.size(), 0.0);
    for (std::size_t i = 0; i < member.size(); ++i) e[i] = member[i] ? 1.0 : 0.0;
    return e;
  }

  Mat projection() const {
    Mat e(space_size, space_size);
    for (int i = 0; i < space_size; ++i) e(i, i) = contains(i) ? 1.0 : 0.0;
    return e;
  }

  bool bounds_hold() const {
    // |L|/3 < |X| < |L|/2 as exact integer comparisons
    return 3 * size > space_size && 2 * size < space_size;
  }
};

inline CharacteristicSet x_set(const ProjectiveSpace& space) {
  if (space.dim() != 2) throw std::domain_error("x_set: projective plane required");
  const std::int64_t p = space.p();
  if (p == 2) throw std::domain_error("x_set: odd prime required");
  CharacteristicSet xs;
  xs.p = p;
  xs.space_size = space.size();
  xs.member.assign(static_cast<std::size_t>(space.size()), 0);
  for (int i = 0; i < space.size(); ++i) {
    const ProjectivePoint& pt = space.point(i);
    if (pt[0] == 0) continue;
    const std::int64_t a = mod_mul(pt[1], mod_inverse(pt[0], p), p);
    if (a % 2 == 0) {
      xs.member[static_cast<std::size_t>(i)] = 1;
      ++xs.size;
    }
  }
  if (xs.size != p * (p + 1) / 2)
    throw consistency_error("x_set: enumeration disagrees with the closed form (p^2+p)/2");
  return xs;
}

inline CharacteristicSet x_set(std::int64_t p) { return x_set(ProjectiveSpace::enumerate(p, 2)); }

// ---------------------------------------------------------------------------
// disjointness and the f <= 2/3 bound

namespace detail {

inline void require_distinct_chain_pair(std::int64_t p, std::int64_t q) {
  if (p == q) throw std::domain_error("chain pair must be distinct primes");
  if (!is_prime(p) || !is_prime(q) || p == 2 || q == 2)
    throw std::domain_error("chain pair must consist of odd primes");
}

struct ShiftedSets {
  CharacteristicSet xs;
  Permutation fwd;  // sigma_p(h^q)
  Permutation bwd;  // sigma_p(h^-q)
};

inline ShiftedSets shifted_sets(const ProjectiveSpace& space, std::int64_t q) {
  const IntMat h = generator_matrix("h", Group::SL3);
  return ShiftedSets{x_set(space), permutation_of(h.pow_mod(q, space.p()), space),
                     permutation_of(h.pow_mod(-q, space.p()), space)};
}

}  // namespace detail

// sigma_p(h^q) X_p  and  X_p  and  sigma_p(h^-q) X_p have empty intersection.
inline bool triple_disjointness(const ProjectiveSpace& space, std::int64_t q) {
  detail::require_distinct_chain_pair(space.p(), q);
  const auto sh = detail::shifted_sets(space, q);
  for (int i = 0; i < space.size(); ++i) {
    if (!sh.xs.contains(i)) continue;
    // i = sigma(h^q) x with x in X  <=>  sigma(h^-q) i in X
    if (sh.xs.contains(sh.bwd(i)) && sh.xs.contains(sh.fwd(i))) return false;
  }
  return true;
}

inline bool triple_disjointness(std::int64_t p, std::int64_t q) {
  return triple_disjointness(ProjectiveSpace::enumerate(p, 2), q);
}

// max over L_p of (1_{sigma(h^q)X} + 1_X + 1_{sigma(h^-q)X}) / 3, exactly.
inline Rational f_bound(const ProjectiveSpace& space, std::int64_t q) {
  detail::require_distinct_chain_pair(space.p(), q);
  const auto sh = detail::shifted_sets(space, q);
  int max_count = 0;
  for (int i = 0; i < space.size(); ++i) {
    const int c = (sh.xs.contains(sh.bwd(i)) ? 1 : 0) + (sh.xs.contains(i) ? 1 : 0) +
                  (sh.xs.contains(sh.fwd(i)) ? 1 : 0);
    max_count = std::max(max_count, c);
  }
  return Rational(max_count, 3);
}

inline Rational f_bound(std::int64_t p, std::int64_t q) {
  return f_bound(ProjectiveSpace::enumerate(p, 2), q);
}

// ---------------------------------------------------------------------------
// Hilbert-Schmidt norm of the cut-down of the commutant unit T~

struct TNormResult {
  std::int64_t q = 0;
  std::int64_t n = 0;       // |L_q|
  std::int64_t xsize = 0;   // |X_q|
  Rational closed_form;     // (|X|(|X|-1) + (n-|X|)(n-|X|-1)) / (n(n-1))
  double matrix_value = 0;  // ||e T~ e + (1-e) T~ (1-e)||_HS^2 computed entrywise
  bool agree = false;       // |closed_form - matrix_value| <= 1e-12
  Rational upper_bound{25, 36};
  bool below_bound = false;
};

// T~ = (n(n-1))^{-1/2} (n z - 1) is the unit Hilbert-Schmidt element of the
// commutant with zero diagonal; its cut-down norm has the exact closed form
// evaluated here both ways.
inline TNormResult t_norm_formula(std::int64_t q) {
  const CharacteristicSet xs = x_set(q);
  TNormResult r;
  r.q = q;
  r.n = xs.space_size;
  r.xsize = xs.size;
  const Rational x(r.xsize), n(r.n);
  r.closed_form = (x * (x - 1) + (n - x) * (n - x - 1)) / (n * (n - 1));

  // every surviving cell contributes the same square, so count cells first:
  // the count is exact in 64 bits and the product rounds once
  const int nn = static_cast<int>(r.n);
  const double off2 = 1.0 / (static_cast<double>(r.n) * static_cast<double>(r.n - 1));
  std::int64_t kept = 0;
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      if (i == j) continue;  // T~ has zero diagonal
      if (xs.contains(i) == xs.contains(j)) ++kept;
    }
  r.matrix_value = static_cast<double>(kept) * off2;
  r.agree = std::abs(to_double(r.closed_form) - r.matrix_value) <= 1e-12;
  r.below_bound = r.closed_form < r.upper_bound;
  return r;
}

// Tr(T*T e_q) for T*T = lambda 1 + mu z with n lambda + mu = 1; the value
// |X_q|/n is independent of the split, checked on two different splits.
inline Rational trace_identity(std::int64_t q) {
  const CharacteristicSet xs = x_set(q);
  const Rational n(xs.space_size), x(xs.size);
  const auto evaluate = [&](const Rational& lambda, const Rational& mu) {
    // Tr(lambda 1 e) = lambda |X|, Tr(mu z e) = mu |X| / n
    return lambda * x + mu * x / n;
  };
  const Rational v1 = evaluate(Rational(1) / n, Rational(0));
  const Rational v2 = evaluate(Rational(1) / (n * (n - 1)), (n - 2) / (n - 1));  // the T~ split
  if (v1 != v2 || v1 != x / n)
    throw consistency_error("trace_identity: splits disagree with |X|/n");
  return v1;
}

// ---------------------------------------------------------------------------
// the gap experiment: r = s + t on conj(l2(L_q)) (x) l2(L_q) (x) H_u

// Finite stand-in for the universal representation u: the trivial
// representation or the permutation representation on the projective plane
// mod r.
struct StandIn {
  enum class Kind { Trivial, Perm };
  Kind kind = Kind::Trivial;
  std::int64_t r = 0;

  static StandIn trivial() { return StandIn{}; }
  static StandIn perm(std::int64_t r) { return StandIn{Kind::Perm, r}; }

  static StandIn parse(const std::string& text) {
    if (text == "trivial") return trivial();
    if (text.rfind("perm:", 0) == 0) {
      const std::int64_t r = std::stoll(text.substr(5));
      if (!is_prime(r)) throw std::domain_error("StandIn: perm modulus must be prime");
      return perm(r);
    }
    throw std::domain_error("StandIn: expected 'trivial' or 'perm:R', got '" + text + "'");
  }

  std::string str() const { return kind == Kind::Trivial ? "trivial" : "perm:" + std::to_string(r); }
};

namespace detail {

// The operators of one experiment, kept matrix-free: each generator acts as
// a permutation of the composite index (x, y, z) -> x*(nq*nu) + y*nu + z,
// and t is diagonal with entry [x in X] == [y in X].
struct GapOperators {
  int nq = 0;
  int nu = 0;
  int dim = 0;
  int generators = 0;
  std::vector<std::vector<std::int32_t>> composite;  // one map per generator
  std::vector<double> t_diag;
  int k1_dimension = 0;        // orbits of the diagonal action on L_q x H_u basis
  int s_fixed_dimension = 0;   // orbits on the full composite index set

  LinearOperator s_op() const {
    auto self = std::make_shared<GapOperators>(*this);
    LinearOperator op;
    op.n = dim;
    op.apply_fn = [self](const double* x, double* y) {
      const double w = 1.0 / self->generators;
      std::fill(y, y + self->dim, 0.0);
      for (const auto& tau : self->composite)
        for (int i = 0; i < self->dim; ++i) y[tau[static_cast<std::size_t>(i)]] += w * x[i];
    };
    return op;
  }

  LinearOperator r_op() const {
    auto self = std::make_shared<GapOperators>(*this);
    LinearOperator op;
    op.n = dim;
    op.apply_fn = [self](const double* x, double* y) {
      const double w = 1.0 / self->generators;
      for (int i = 0; i < self->dim; ++i) y[i] = self->t_diag[static_cast<std::size_t>(i)] * x[i];
      for (const auto& tau : self->composite)
        for (int i = 0; i < self->dim; ++i) y[tau[static_cast<std::size_t>(i)]] += w * x[i];
    };
    return op;
  }

  Mat s_dense() const {
    Mat s(dim, dim);
    const double w = 1.0 / generators;
    for (const auto& tau : composite)
      for (int i = 0; i < dim; ++i) s(tau[static_cast<std::size_t>(i)], i) += w;
    return s;
  }

  Mat r_dense() const {
    Mat r = s_dense();
    for (int i = 0; i < dim; ++i) r(i, i) += t_diag[static_cast<std::size_t>(i)];
    return r;
  }
};

inline GapOperators build_gap_operators(std::int64_t q, const StandIn& u) {
  if (!is_prime(q) || q == 2) throw std::domain_error("gap experiment: odd prime q required");
  const auto space_q = ProjectiveSpace::enumerate(q, 2);
  const CharacteristicSet xs = x_set(space_q);
  const GeneratorSet gens = sl3_symmetric_set();

  std::vector<Permutation> sigma_q, rho;
  for (const auto& g : gens.elements) sigma_q.push_back(permutation_of(g.matrix, space_q));
  if (u.kind == StandIn::Kind::Trivial) {
    for (std::size_t i = 0; i < gens.elements.size(); ++i) rho.push_back(Permutation::identity(1));
  } else {
    if (u.r == q) throw std::domain_error("gap experiment: perm stand-in modulus must differ from q");
    const auto space_r = ProjectiveSpace::enumerate(u.r, 2);
    for (const auto& g : gens.elements) rho.push_back(permutation_of(g.matrix, space_r));
  }

  GapOperators ops;
  ops.nq = space_q.size();
  ops.nu = rho.front().size();
  ops.dim = ops.nq * ops.nq * ops.nu;
  ops.generators = static_cast<int>(gens.elements.size());

  std::vector<Permutation> composite, pair;
  for (std::size_t g = 0; g < sigma_q.size(); ++g) {
    composite.push_back(tensor_permutation(tensor_permutation(sigma_q[g], sigma_q[g]), rho[g]));
    pair.push_back(tensor_permutation(sigma_q[g], rho[g]));
  }
  ops.k1_dimension = orbit_count(pair, ops.nq * ops.nu);
  ops.s_fixed_dimension = orbit_count(composite, ops.dim);
  for (const auto& tau : composite) ops.composite.push_back(tau.images());

  ops.t_diag.assign(static_cast<std::size_t>(ops.dim), 0.0);
  for (int x = 0; x < ops.nq; ++x)
    for (int y = 0; y < ops.nq; ++y) {
      if (xs.contains(x) != xs.contains(y)) continue;
      for (int z = 0; z < ops.nu; ++z)
        ops.t_diag[static_cast<std::size_t>((x * ops.nq + y) * ops.nu + z)] = 1.0;
    }
  return ops;
}

}  // namespace detail

struct GapExperimentOptions {
  int dense_cap = 2000;    // full Jacobi below, deflated Lanczos above
  double eig_tol = 1e-13;  // Jacobi off-diagonal target on the dense path
  LanczosOptions lanczos{};
};

// Dense forms of the experiment operators, for direct inspection and for
// feeding the spectral-projection machinery.
inline Mat gap_averaging_dense(std::int64_t q, const StandIn& u = StandIn::trivial()) {
  return detail::build_gap_operators(q, u).s_dense();
}
inline Mat gap_total_dense(std::int64_t q, const StandIn& u = StandIn::trivial()) {
  return detail::build_gap_operators(q, u).r_dense();
}

struct GapExperimentResult {
  std::int64_t q = 0;
  std::string stand_in;
  int dimension = 0;
  bool dense_path = false;
  std::vector<double> top_eigenvalues;  // descending; full spectrum top on the dense path
  double min_eigenvalue = 0;
  int two_multiplicity = 0;
  int k1_dimension = 0;
  double gap_below_two = 0;   // 2 - largest eigenvalue below the 2-cluster
  double epsilon_emp = 0;     // gap of s below its fixed-space eigenvalue 1
  double threshold = 0;       // 2 - 1e-4 * epsilon_emp
  bool pass = false;
};

// Spectrum shape of r = s + t: eigenvalue 2 with multiplicity dim K_1, the
// rest at most 2 - 1e-4 * epsilon, everything at least -1.
inline GapExperimentResult gap_experiment(std::int64_t q, const StandIn& u = StandIn::trivial(),
                                          const GapExperimentOptions& opt = {}) {
  const detail::GapOperators ops = detail::build_gap_operators(q, u);

  GapExperimentResult res;
  res.q = q;
  res.stand_in = u.str();
  res.dimension = ops.dim;
  res.k1_dimension = ops.k1_dimension;
  res.dense_path = ops.dim <= opt.dense_cap;

  const double cluster_tol = 1e-8;
  double s_top = 0, s_next = 0, r_top = 0, r_next = 0;
  int s_top_mult = 0;

  if (res.dense_path) {
    const Spectrum s_spec = symmetric_spectrum(ops.s_dense(), opt.eig_tol);
    const Spectrum r_spec = symmetric_spectrum(ops.r_dense(), opt.eig_tol);
    s_top = s_spec.top();
    s_top_mult = s_spec.top_multiplicity();
    s_next = s_spec.second_distinct();
    r_top = r_spec.top();
    res.two_multiplicity = r_spec.multiplicity_of(2.0);
    r_next = 2.0;
    for (const double v : r_spec.eigenvalues)
      if (2.0 - v > cluster_tol) r_next = v;  // ascending scan keeps the largest below the cluster
      else break;
    res.min_eigenvalue = r_spec.bottom();
    const auto top_begin = r_spec.eigenvalues.end() - std::min<std::size_t>(r_spec.eigenvalues.size(), 8);
    res.top_eigenvalues.assign(top_begin, r_spec.eigenvalues.end());
    std::reverse(res.top_eigenvalues.begin(), res.top_eigenvalues.end());
  } else {
    const LinearOperator s = ops.s_op();
    const LinearOperator r = ops.r_op();
    const auto s_pairs = top_eigenpairs(s, std::min(ops.dim, ops.s_fixed_dimension + 2), opt.lanczos);
    s_top = s_pairs.front().value;
    for (const auto& pr : s_pairs)
      if (s_top - pr.value <= cluster_tol) ++s_top_mult;
    s_next = s_top;
    for (const auto& pr : s_pairs)
      if (s_top - pr.value > cluster_tol) {
        s_next = pr.value;
        break;
      }
    const auto r_pairs = top_eigenpairs(r, std::min(ops.dim, ops.k1_dimension + 2), opt.lanczos);
    r_top = r_pairs.front().value;
    r_next = r_top;
    for (const auto& pr : r_pairs) {
      res.top_eigenvalues.push_back(pr.value);
      if (std::abs(pr.value - 2.0) <= cluster_tol) ++res.two_multiplicity;
      else if (r_next == r_top && 2.0 - pr.value > cluster_tol) r_next = pr.value;
    }
    res.min_eigenvalue = bottom_eigenpairs(r, 1, opt.lanczos).front().value;
  }

  if (s_top_mult != ops.s_fixed_dimension)
    throw consistency_error("gap_experiment: multiplicity of 1 in spec(s) != orbit count " +
                            std::to_string(ops.s_fixed_dimension));

  res.epsilon_emp = 1.0 - s_next;
  res.gap_below_two = 2.0 - r_next;
  res.threshold = 2.0 - 1e-4 * res.epsilon_emp;
  res.pass = std::abs(s_top - 1.0) <= 1e-9 && std::abs(r_top - 2.0) <= 1e-9 &&
             res.two_multiplicity == res.k1_dimension && res.epsilon_emp > 0 &&
             res.gap_below_two >= 1e-4 * res.epsilon_emp && res.min_eigenvalue >= -1.0 - 1e-8;
  return res;
}

struct SpectralProjectionTrace {
  std::int64_t q = 0;
  std::string stand_in;
  int dimension = 0;
  int rank = 0;
  double tau = 0;               // normalized trace of the projection
  double projection_defect = 0; // max norm of d^2 - d (dense) or Gram error (iterative)
};

// Spectral projection d of r at the isolated eigenvalue 2, with its
// normalized trace; requires the gap experiment to pass first.
inline SpectralProjectionTrace spectral_projection_trace(std::int64_t q, const StandIn& u = StandIn::trivial(),
                                                         const GapExperimentOptions& opt = {}) {
  const GapExperimentResult gap = gap_experiment(q, u, opt);
  if (!gap.pass) throw std::domain_error("spectral_projection_trace: gap experiment failed, no isolated eigenvalue");
  const detail::GapOperators ops = detail::build_gap_operators(q, u);

  SpectralProjectionTrace out;
  out.q = q;
  out.stand_in = u.str();
  out.dimension = ops.dim;

  if (gap.dense_path) {
    const double isolation = std::max(1e-6, 0.5 * gap.gap_below_two);
    const Mat d = spectral_projection(ops.r_dense(), 2.0, isolation);
    const double tr = d.trace();
    out.rank = static_cast<int>(std::lround(tr));
    if (std::abs(tr - out.rank) > 1e-9) throw numerical_error("spectral_projection_trace: non-integral trace");
    out.tau = tr / ops.dim;
    out.projection_defect = max_abs(d * d - d);
  } else {
    const auto pairs = top_eigenpairs(ops.r_op(), std::min(ops.dim, ops.k1_dimension + 1), opt.lanczos);
    std::vector<std::vector<double>> vecs;
    for (const auto& pr : pairs)
      if (std::abs(pr.value - 2.0) <= 1e-8) vecs.push_back(pr.vector);
    out.rank = static_cast<int>(vecs.size());
    // orthonormality of the eigenvectors is the projection law for sum v v^T
    double defect = 0;
    for (std::size_t i = 0; i < vecs.size(); ++i)
      for (std::size_t j = 0; j < vecs.size(); ++j) {
        double dot = 0;
        for (std::size_t l = 0; l < vecs[i].size(); ++l) dot += vecs[i][l] * vecs[j][l];
        defect = std::max(defect, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    out.projection_defect = defect;
    if (defect > 1e-8) throw numerical_error("spectral_projection_trace: eigenvectors not orthonormal");
    out.tau = static_cast<double>(out.rank) / ops.dim;
  }
  if (out.rank != gap.k1_dimension)
    throw consistency_error("spectral_projection_trace: rank != dim K_1");
  return out;
}

// ---------------------------------------------------------------------------
// the second half: cut-down norm on a neighbour component

struct TqPrimeBoundResult {
  std::int64_t q = 0, p = 0;
  Rational exact;           // from the four indicator counts
  double matrix_value = 0;  // entrywise Hilbert-Schmidt computation
  Rational intermediate;    // 1 - (1/3) |X_q|/n_q
  bool pass = false;        // exact <= intermediate <= 8/9 and routes agree
};

// || e_p T e_q + (1-e_p) T (1-e_q) ||_HS^2 for the normalized all-ones
// intertwiner T between l2(L_q) and l2(L_p); the unique invariant T up to
// scale because the product action on L_p x L_q is transitive.
inline TqPrimeBoundResult tq_prime_bound(std::int64_t q, std::int64_t p) {
  detail::require_distinct_chain_pair(p, q);
  const auto space_q = ProjectiveSpace::enumerate(q, 2);
  const auto space_p = ProjectiveSpace::enumerate(p, 2);
  const CharacteristicSet xq = x_set(space_q);
  const CharacteristicSet xp = x_set(space_p);

  // the invariant intertwiner is unique: one diagonal orbit on L_p x L_q
  {
    std::vector<Permutation> pairs;
    for (const auto& g : sl3_symmetric_set().elements)
      pairs.push_back(tensor_permutation(permutation_of(g.matrix, space_p), permutation_of(g.matrix, space_q)));
    const int orbits = orbit_count(pairs, space_p.size() * space_q.size());
    if (orbits != 1)
      throw consistency_error("tq_prime_bound: invariant space is not one dimensional");
  }

  const Rational np(space_p.size()), nq(space_q.size());
  const Rational cp(xp.size), cq(xq.size);
  TqPrimeBoundResult out;
  out.q = q;
  out.p = p;
  out.exact = (cp * cq + (np - cp) * (nq - cq)) / (np * nq);

  // entrywise: T has all entries (n_p n_q)^{-1/2}; the cut-down keeps (y,x)
  // with y in X_p, x in X_q or y outside, x outside
  const double cell = 1.0 / (static_cast<double>(space_p.size()) * space_q.size());
  std::int64_t kept = 0;
  for (int y = 0; y < space_p.size(); ++y)
    for (int x = 0; x < space_q.size(); ++x)
      if (xp.contains(y) == xq.contains(x)) ++kept;
  out.matrix_value = static_cast<double>(kept) * cell;

  out.intermediate = Rational(1) - cq / (Rational(3) * nq);
  out.pass = std::abs(to_double(out.exact) - out.matrix_value) <= 1e-12 &&
             out.exact <= out.intermediate && out.intermediate <= Rational(8, 9);
  return out;
}

// ---------------------------------------------------------------------------
// Kazhdan-style gap survey for the SL3 family

struct KazhdanGapRecord {
  std::int64_t q = 0;
  int n = 0;
  int dimension = 0;
  double top_value = 0;
  int top_multiplicity = 0;  // must be 2: the orbital count of a 2-transitive action
  double epsilon = 0;        // 1 - largest eigenvalue below the fixed space
  bool pass = false;
};

// Classification used by the survey; exposed so degenerate spectra (e.g. a
// trivial stand-in representation where s = 1) can be fed in directly.
inline KazhdanGapRecord classify_kazhdan_spectrum(std::int64_t q, int n, int dimension,
                                                  const Spectrum& spec, int expected_multiplicity = 2) {
  KazhdanGapRecord rec;
  rec.q = q;
  rec.n = n;
  rec.dimension = dimension;
  rec.top_value = spec.top();
  rec.top_multiplicity = spec.top_multiplicity();
  rec.epsilon = rec.top_value - spec.second_distinct();
  rec.pass = std::abs(rec.top_value - 1.0) <= 1e-9 &&
             rec.top_multiplicity == expected_multiplicity && rec.epsilon > 0;
  return rec;
}

inline KazhdanGapRecord sl3_kazhdan_record(std::int64_t q, const GapExperimentOptions& opt = {}) {
  const detail::GapOperators ops = detail::build_gap_operators(q, StandIn::trivial());
  if (ops.s_fixed_dimension != 2)
    throw consistency_error("sl3_kazhdan_record: orbital count is not 2");
  if (ops.dim <= opt.dense_cap) {
    const Spectrum spec = symmetric_spectrum(ops.s_dense(), opt.eig_tol);
    return classify_kazhdan_spectrum(q, ops.nq, ops.dim, spec);
  }
  const auto pairs = top_eigenpairs(ops.s_op(), 4, opt.lanczos);
  std::vector<double> values;
  for (const auto& pr : pairs) values.push_back(pr.value);
  return classify_kazhdan_spectrum(q, ops.nq, ops.dim, spectrum_from_values(values, 1.0));
}

inline std::vector<KazhdanGapRecord> sl3_kazhdan_survey(const std::vector<std::int64_t>& primes,
                                                        const GapExperimentOptions& opt = {},
                                                        int threads = 1) {
  std::vector<KazhdanGapRecord> out(primes.size());
  parallel_for(static_cast<int>(primes.size()), threads,
               [&](int i) { out[static_cast<std::size_t>(i)] = sl3_kazhdan_record(primes[static_cast<std::size_t>(i)], opt); });
  return out;
}

}  // namespace explab
