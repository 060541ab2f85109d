#pragma once

// SL(2,Z) experiments: per-prime expander gaps of the projective-line
// representations, the norm-4 witness operator built from a sign unitary,
// and the quantitative near-fixed-vector bound behind all the gap
// arguments.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "explab/errors.hpp"
#include "explab/parallel.hpp"
#include "explab/representation.hpp"
#include "explab/spectral.hpp"

namespace explab {

// Diagonal +-1 unitary with equally many signs of each kind, so that
// <v chi, chi> = 0 exactly.  Needs even dimension, i.e. odd p.
struct SignDiagonal {
  std::vector<double> signs;

  static SignDiagonal balanced(int n) {
    if (n <= 0 || n % 2 != 0) throw std::domain_error("SignDiagonal: dimension must be even");
    SignDiagonal d;
    d.signs.assign(static_cast<std::size_t>(n), 1.0);
    for (int i = n / 2; i < n; ++i) d.signs[static_cast<std::size_t>(i)] = -1.0;
    return d;
  }

  Mat matrix() const {
    Mat m(static_cast<int>(signs.size()), static_cast<int>(signs.size()));
    for (std::size_t i = 0; i < signs.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = signs[i];
    return m;
  }
};

// Arithmetic mean of a family of operators; the family must be closed under
// transpose so the mean is symmetric.
inline Mat averaging_operator(const std::vector<Mat>& ops) {
  if (ops.empty()) throw std::domain_error("averaging_operator: empty list");
  Mat s = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) s = s + ops[i];
  s = s.scaled(1.0 / static_cast<double>(ops.size()));
  if (max_asymmetry(s) > 1e-12)
    throw std::domain_error("averaging_operator: list is not closed under transpose");
  return s;
}

enum class SigmaVariant {
  Symmetric,  // {h, h^-1, k}: self-adjoint mean, eigenvalue gap
  IHK,        // {I, h, k}: non-normal mean, singular-value gap
};

inline std::string to_string(SigmaVariant v) { return v == SigmaVariant::Symmetric ? "symmetric" : "ihk"; }

struct SelbergGapRecord {
  std::int64_t p = 0;
  int n = 0;
  double second_eigenvalue = 0;  // top of the mean-zero restriction
  double gap = 0;                // 1 - second_eigenvalue
};

// Gap of the averaging operator of pi_p on the mean-zero subspace, one
// record per odd prime.  Transitivity makes 1 a simple eigenvalue on the
// full space, so the restriction's top is the true second value.
inline SelbergGapRecord sl2_gap_record(std::int64_t p, SigmaVariant variant = SigmaVariant::Symmetric,
                                       double eig_tol = 1e-13) {
  if (!is_prime(p) || p == 2) throw std::domain_error("sl2_gap_record: odd prime required");
  if (eig_tol <= 0) throw std::domain_error("sl2_gap_record: tolerance must be positive");
  const auto space = ProjectiveSpace::enumerate(p, 1);
  const auto gens = variant == SigmaVariant::Symmetric ? sl2_symmetric_set() : sl2_generating_set();
  std::vector<Mat> ops;
  for (const auto& g : gens.elements) ops.push_back(perm_matrix<double>(permutation_of(g.matrix, space)));

  SelbergGapRecord rec;
  rec.p = p;
  rec.n = space.size();
  if (variant == SigmaVariant::Symmetric) {
    const Mat restricted = meanzero_restriction(averaging_operator(ops));
    rec.second_eigenvalue = symmetric_spectrum(restricted, eig_tol).top();
  } else {
    Mat s = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) s = s + ops[i];
    s = s.scaled(1.0 / static_cast<double>(ops.size()));
    rec.second_eigenvalue = operator_norm(meanzero_restriction(s)).value;
  }
  rec.gap = 1.0 - rec.second_eigenvalue;
  return rec;
}

inline std::vector<SelbergGapRecord> sl2_gap_survey(const std::vector<std::int64_t>& primes,
                                                    SigmaVariant variant = SigmaVariant::Symmetric,
                                                    int threads = 1, double eig_tol = 1e-13) {
  std::vector<SelbergGapRecord> out(primes.size());
  parallel_for(static_cast<int>(primes.size()), threads, [&](int i) {
    out[static_cast<std::size_t>(i)] = sl2_gap_record(primes[static_cast<std::size_t>(i)], variant, eig_tol);
  });
  return out;
}

// v_bar (x) v + sum over {I,h,k} of pi_bar(g) (x) pi(g); everything is real,
// so the conjugate factors are the same matrices on a relabelled index set.
inline Mat witness_operator(std::int64_t q) {
  if (!is_prime(q) || q == 2) throw std::domain_error("witness_operator: odd prime required");
  const auto space = ProjectiveSpace::enumerate(q, 1);
  const Mat upsilon = SignDiagonal::balanced(space.size()).matrix();
  Mat w = tensor(upsilon, upsilon);
  w.basis_tag = "conj(L_q)(x)L_q";
  for (const auto& g : sl2_generating_set().elements) {
    const Mat pg = perm_matrix<double>(permutation_of(g.matrix, space));
    w = w + tensor(pg, pg);
  }
  return w;
}

inline Mat witness_generator_sum(std::int64_t q) {
  if (!is_prime(q)) throw std::domain_error("witness_generator_sum: prime required");
  const auto space = ProjectiveSpace::enumerate(q, 1);
  Mat w(space.size() * space.size(), space.size() * space.size());
  for (const auto& g : sl2_generating_set().elements) {
    const Mat pg = perm_matrix<double>(permutation_of(g.matrix, space));
    w = w + tensor(pg, pg);
  }
  return w;
}

// Largest singular value of the witness operator; the diagonal vector
// sum_x delta_x (x) delta_x is fixed by all four terms, so the value is 4.
inline double witness_norm(std::int64_t q) { return operator_norm(witness_operator(q)).value; }

// || chi - v chi ||: forced to sqrt(2) by <v chi, chi> = 0.
inline double chi_orthogonal_displacement(std::int64_t q) {
  if (!is_prime(q) || q == 2) throw std::domain_error("chi_orthogonal_displacement: odd prime required");
  const std::int64_t n = q + 1;
  const SignDiagonal d = SignDiagonal::balanced(static_cast<int>(n));
  double s = 0;
  for (const double sign : d.signs) s += (1.0 - sign) * (1.0 - sign) / static_cast<double>(n);
  return std::sqrt(s);
}

struct NearFixedVectorResult {
  std::vector<double> xi;       // unit vector with small displacement under every operator
  double epsilon = 0;           // the epsilon the precondition was checked against
  double achieved_norm = 0;     // ||sum u_i xi||
  std::vector<double> defects;  // ||u_i xi - xi||
  double max_defect = 0;
  double defect_bound = 0;      // 2 sqrt(2 n epsilon)
};

// If ||sum u_i xi|| > n(1-eps) for a unit xi and contractions u_i, set
// eta = (sum u_i xi)/||sum u_i xi||.  Then sum_i <u_i xi, eta> > n(1-eps)
// with each term at most 1, so every term exceeds 1 - n eps, hence
// ||u_i xi - eta||^2 <= 2 n eps; with u_1 = 1 the triangle inequality
// through eta gives ||u_i xi - xi|| <= 2 sqrt(2 n eps).
inline NearFixedVectorResult near_fixed_vector(const std::vector<Mat>& contractions, double epsilon) {
  if (contractions.empty()) throw std::domain_error("near_fixed_vector: empty list");
  if (epsilon < 0) throw std::domain_error("near_fixed_vector: negative epsilon");
  const int dim = contractions.front().rows();
  if (max_abs(contractions.front() - Mat::identity(dim)) > 1e-12)
    throw std::domain_error("near_fixed_vector: first operator must be the identity");
  const int n = static_cast<int>(contractions.size());
  for (const auto& u : contractions) {
    if (u.rows() != dim || u.cols() != dim) throw std::domain_error("near_fixed_vector: mixed dimensions");
    if (operator_norm_lanczos(u).value > 1 + 1e-8)
      throw std::domain_error("near_fixed_vector: operator is not a contraction");
  }

  // Lanczos-based norm: families of near-identity contractions have tightly
  // clustered top singular values, where power iteration stalls.
  Mat sum = contractions.front();
  for (int i = 1; i < n; ++i) sum = sum + contractions[static_cast<std::size_t>(i)];
  const OperatorNormResult nr = operator_norm_lanczos(sum);
  if (nr.value <= n * (1.0 - epsilon))
    throw std::domain_error("near_fixed_vector: ||sum u_i|| <= n(1-eps), precondition fails");

  NearFixedVectorResult out;
  out.xi = nr.right_singular_vector;
  out.epsilon = epsilon;
  const std::vector<double> sx = sum.apply(out.xi);
  double a2 = 0;
  for (const double x : sx) a2 += x * x;
  out.achieved_norm = std::sqrt(a2);
  if (out.achieved_norm <= n * (1.0 - epsilon))
    throw numerical_error("near_fixed_vector: singular vector did not certify the precondition");
  for (const auto& u : contractions) {
    const std::vector<double> ux = u.apply(out.xi);
    double d2 = 0;
    for (std::size_t i = 0; i < ux.size(); ++i) {
      const double diff = ux[i] - out.xi[i];
      d2 += diff * diff;
    }
    out.defects.push_back(std::sqrt(d2));
    out.max_defect = std::max(out.max_defect, out.defects.back());
  }
  out.defect_bound = 2.0 * std::sqrt(2.0 * n * epsilon);
  return out;
}

struct BetaSuiteResult {
  int samples = 0;
  int violations = 0;
  double max_ratio = 0;  // worst defect / bound over the suite
};

// Sampled check of the defect bound: families of rotation contractions with
// epsilon measured from the norm of their sum.
inline BetaSuiteResult beta_defect_suite(int samples, int dim, std::uint64_t seed) {
  if (dim < 2) throw std::domain_error("beta_defect_suite: dimension must be at least 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-0.25, 0.25);
  const auto rotation = [&](int i, int j, double a) {
    Mat r = Mat::identity(dim);
    r(i, i) = std::cos(a);
    r(j, j) = std::cos(a);
    r(i, j) = -std::sin(a);
    r(j, i) = std::sin(a);
    return r;
  };
  BetaSuiteResult res;
  for (int sample = 0; sample < samples; ++sample) {
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<Mat> ops{Mat::identity(dim)};
    for (int i = 1; i < n; ++i) {
      Mat u = Mat::identity(dim);
      for (int rot = 0; rot < 2; ++rot) {
        const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
        if (a == b) b = (b + 1) % dim;
        u = u * rotation(a, b, angle(rng));
      }
      ops.push_back(u);
    }
    Mat sum = ops.front();
    for (int i = 1; i < n; ++i) sum = sum + ops[static_cast<std::size_t>(i)];
    const double eps = 1.0 - operator_norm_lanczos(sum).value / n + 1e-12;
    const NearFixedVectorResult r = near_fixed_vector(ops, eps);
    res.max_ratio = std::max(res.max_ratio, r.max_defect / r.defect_bound);
    if (r.max_defect > r.defect_bound + 1e-12) ++res.violations;
    ++res.samples;
  }
  return res;
}

}  // namespace explab
