#pragma once

// Self-contained symmetric eigensolving: cyclic Jacobi for dense matrices,
// deflated Lanczos with full reorthogonalization for large operators, power
// iteration on the Gram operator for norms of non-symmetric sums, and
// spectral projections for isolated eigenvalues.  Implemented in-repo so
// every numerical claim in the experiment suites is auditable end to end.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "explab/errors.hpp"
#include "explab/matrix.hpp"

namespace explab {

// ---------------------------------------------------------------------------
// spectra and gap reports

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  double multiplicity_tol = 1e-9;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  double top() const { return eigenvalues.back(); }
  double bottom() const { return eigenvalues.front(); }

  int top_multiplicity() const {
    int count = 0;
    for (auto it = eigenvalues.rbegin(); it != eigenvalues.rend() && top() - *it <= multiplicity_tol; ++it) ++count;
    return count;
  }

  int multiplicity_of(double lambda) const {
    int count = 0;
    for (const double v : eigenvalues)
      if (std::abs(v - lambda) <= multiplicity_tol) ++count;
    return count;
  }

  // largest eigenvalue strictly below the top cluster; equals top() when the
  // whole spectrum is one cluster (zero gap)
  double second_distinct() const {
    for (auto it = eigenvalues.rbegin(); it != eigenvalues.rend(); ++it)
      if (top() - *it > multiplicity_tol) return *it;
    return top();
  }
};

inline Spectrum spectrum_from_values(std::vector<double> values, double scale_hint = 1.0) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  const double scale = std::max({1.0, scale_hint, values.empty() ? 0.0 : std::abs(values.back()),
                                 values.empty() ? 0.0 : std::abs(values.front())});
  s.multiplicity_tol = 1e-9 * scale;
  s.eigenvalues = std::move(values);
  return s;
}

struct GapReport {
  double top_value = 0;
  int top_multiplicity = 0;
  double second_value = 0;
  double gap = 0;
  bool pass = false;
};

// Verifies the top eigenvalue and classifies the gap below it against a
// threshold.  A wrong top value yields a failing report, not an exception.
inline GapReport classify_gap(const Spectrum& spec, double expected_top, double threshold) {
  if (spec.eigenvalues.empty()) throw std::domain_error("classify_gap: empty spectrum");
  GapReport r;
  r.top_value = spec.top();
  r.top_multiplicity = spec.top_multiplicity();
  r.second_value = spec.second_distinct();
  r.gap = r.top_value - r.second_value;
  r.pass = std::abs(r.top_value - expected_top) <= 1e-9 && r.gap >= threshold;
  return r;
}

// ---------------------------------------------------------------------------
// dense path: cyclic Jacobi

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column i pairs with values[i]

  Spectrum spectrum() const {
    Spectrum s = spectrum_from_values(values);
    return s;
  }
};

// Cyclic Jacobi with the standard stable rotation choice.  Requires
// symmetry up to 1e-12 in max norm; sweeps until the off-diagonal Frobenius
// mass falls below tol * ||m||_F.
inline EigenDecomposition jacobi_eigendecomposition(const Mat& input, double tol = 1e-13, int max_sweeps = 64) {
  if (!input.is_square()) throw std::domain_error("jacobi: non-square matrix");
  const int n = input.rows();
  if (n > kDenseDimCap) throw resource_error("jacobi: dimension exceeds dense cap");
  if (n && max_asymmetry(input) >= 1e-12)
    throw std::domain_error("jacobi: matrix is not symmetric to 1e-12");

  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  Mat v = Mat::identity(n);

  EigenDecomposition out;
  if (n == 0) {
    out.vectors = v;
    return out;
  }

  const double fro = frobenius_norm(a);
  const double target = std::max(tol * fro, 1e-300);

  const auto offdiag = [&]() {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    const double off = offdiag();
    if (off <= target) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-3 * target / n) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1);
        const double s = t * c;
        const double tau = s / (1 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0;
        a(q, p) = 0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(p, i) = a(i, p);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(q, i) = a(i, q);
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  if (sweep == max_sweeps && offdiag() > target)
    throw numerical_error("jacobi: no convergence after " + std::to_string(max_sweeps) + " sweeps");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors = Mat(n, n);
  for (int col = 0; col < n; ++col) {
    out.values[static_cast<std::size_t>(col)] = a(order[static_cast<std::size_t>(col)], order[static_cast<std::size_t>(col)]);
    for (int i = 0; i < n; ++i) out.vectors(i, col) = v(i, order[static_cast<std::size_t>(col)]);
  }
  return out;
}

inline Spectrum symmetric_spectrum(const Mat& m, double tol = 1e-13) {
  return jacobi_eigendecomposition(m, tol).spectrum();
}

// ---------------------------------------------------------------------------
// matrix-free operators

struct LinearOperator {
  int n = 0;
  std::function<void(const double*, double*)> apply_fn;

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n));
    apply_fn(x.data(), y.data());
    return y;
  }

  static LinearOperator dense(Mat m) {
    auto held = std::make_shared<Mat>(std::move(m));
    LinearOperator op;
    op.n = held->rows();
    op.apply_fn = [held](const double* x, double* y) {
      const int n = held->rows();
      for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += (*held)(i, j) * x[j];
        y[i] = s;
      }
    };
    return op;
  }
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline std::vector<double> random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = g(rng);
  const double nv = norm(v);
  for (auto& x : v) x /= nv;
  return v;
}

inline void orthogonalize_against(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) axpy(-dot(v, b), b, v);
}

}  // namespace detail

struct EigenPair {
  double value = 0;
  std::vector<double> vector;
};

struct LanczosOptions {
  int max_basis = 320;        // Krylov budget per eigenpair
  double residual_tol = 1e-8; // relative to max(1, |theta|)
  int max_restarts = 5;
  int check_every = 10;
  std::uint64_t seed = 0x1f2e3d4c5b6a7988ULL;
};

// Largest k eigenpairs by Lanczos with full reorthogonalization; converged
// pairs are deflated so repeated eigenvalues are found copy by copy.  Every
// accepted pair satisfies ||A v - theta v|| <= residual_tol * max(1,|theta|).
inline std::vector<EigenPair> top_eigenpairs(const LinearOperator& op, int k, LanczosOptions opt = {}) {
  const int n = op.n;
  if (k < 1) throw std::domain_error("top_eigenpairs: k must be positive");
  if (k > n) throw std::domain_error("top_eigenpairs: k exceeds dimension");
  std::mt19937_64 rng(opt.seed);

  std::vector<EigenPair> found;

  const auto apply_deflated = [&](const std::vector<double>& x) {
    std::vector<double> xp = x;
    for (const auto& f : found) detail::axpy(-detail::dot(xp, f.vector), f.vector, xp);
    std::vector<double> y = op.apply(xp);
    for (const auto& f : found) detail::axpy(-detail::dot(y, f.vector), f.vector, y);
    return y;
  };

  for (int target = 0; target < k; ++target) {
    bool accepted = false;
    for (int attempt = 0; attempt < opt.max_restarts && !accepted; ++attempt) {
      std::vector<std::vector<double>> basis;
      std::vector<double> alpha, beta;  // beta[i] couples basis[i] and basis[i+1]

      std::vector<double> v = detail::random_unit(n, rng);
      for (const auto& f : found) detail::axpy(-detail::dot(v, f.vector), f.vector, v);
      const double nv = detail::norm(v);
      if (nv < 1e-8) continue;  // nothing left outside the found span
      for (auto& x : v) x /= nv;
      basis.push_back(v);

      const int budget = std::min(opt.max_basis, n - target);
      bool exhausted = false;
      for (int it = 0; it < budget && !accepted; ++it) {
        std::vector<double> w = apply_deflated(basis.back());
        if (it > 0) detail::axpy(-beta.back(), basis[basis.size() - 2], w);
        const double a = detail::dot(w, basis.back());
        alpha.push_back(a);
        detail::axpy(-a, basis.back(), w);
        // full reorthogonalization, twice for safety
        detail::orthogonalize_against(w, basis);
        detail::orthogonalize_against(w, basis);
        const double b = detail::norm(w);

        const int m = static_cast<int>(alpha.size());
        const bool breakdown = b < 1e-13;
        if (!breakdown && it + 1 < budget) {
          for (auto& x : w) x /= b;
          basis.push_back(w);
          beta.push_back(b);
        }

        const bool check = breakdown || it + 1 == budget || (m >= 2 && m % opt.check_every == 0);
        if (!check) continue;

        // Ritz step: top eigenpair of the tridiagonal section
        Mat t(m, m);
        for (int i = 0; i < m; ++i) {
          t(i, i) = alpha[static_cast<std::size_t>(i)];
          if (i + 1 < m) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
          }
        }
        const EigenDecomposition ed = jacobi_eigendecomposition(t);
        const double theta = ed.values.back();
        const double s_last = ed.vectors(m - 1, m - 1);
        const double bound = breakdown ? 0.0 : b * std::abs(s_last);
        const double scale = std::max(1.0, std::abs(theta));
        if (!breakdown && bound > opt.residual_tol * scale * 0.1 && it + 1 < budget) continue;

        std::vector<double> y(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < m; ++i) detail::axpy(ed.vectors(i, m - 1), basis[static_cast<std::size_t>(i)], y);
        const double ny = detail::norm(y);
        if (ny < 1e-12) break;
        for (auto& x : y) x /= ny;
        std::vector<double> res = apply_deflated(y);
        detail::axpy(-theta, y, res);
        if (detail::norm(res) <= opt.residual_tol * scale) {
          found.push_back({theta, std::move(y)});
          accepted = true;
        } else if (breakdown || it + 1 == budget) {
          exhausted = true;
          break;
        }
      }
      if (exhausted) continue;
    }
    if (!accepted)
      throw numerical_error("top_eigenpairs: no convergence for eigenpair " + std::to_string(target + 1));
  }

  std::sort(found.begin(), found.end(), [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
  return found;
}

inline std::vector<EigenPair> bottom_eigenpairs(const LinearOperator& op, int k, LanczosOptions opt = {}) {
  LinearOperator neg;
  neg.n = op.n;
  const auto inner = op.apply_fn;
  neg.apply_fn = [inner, n = op.n](const double* x, double* y) {
    inner(x, y);
    for (int i = 0; i < n; ++i) y[i] = -y[i];
  };
  std::vector<EigenPair> pairs = top_eigenpairs(neg, k, opt);
  for (auto& p : pairs) p.value = -p.value;
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return pairs;
}

// ---------------------------------------------------------------------------
// operator norm via power iteration on the Gram operator

struct OperatorNormResult {
  double value = 0;
  std::vector<double> right_singular_vector;
  int iterations = 0;
};

struct PowerOptions {
  double tol = 1e-12;       // on successive norm estimates
  int stable_checks = 3;    // consecutive small deltas required
  int max_iter = 200000;
  std::uint64_t seed = 0xabcdef12;
};

inline OperatorNormResult operator_norm_power(const LinearOperator& a, const LinearOperator& at,
                                              PowerOptions opt = {}) {
  if (a.n != at.n) throw std::domain_error("operator_norm_power: shape mismatch");
  std::mt19937_64 rng(opt.seed);
  std::vector<double> x = detail::random_unit(a.n, rng);
  double prev = -1;
  int stable = 0;
  OperatorNormResult out;
  for (int it = 1; it <= opt.max_iter; ++it) {
    std::vector<double> y = a.apply(x);
    const double est = detail::norm(y);
    std::vector<double> g = at.apply(y);
    const double ng = detail::norm(g);
    if (ng < 1e-300) {  // x in the kernel of the Gram operator
      out.value = 0;
      out.right_singular_vector = x;
      out.iterations = it;
      return out;
    }
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = g[i] / ng;
    if (std::abs(est - prev) <= opt.tol * std::max(1.0, est)) {
      if (++stable >= opt.stable_checks) {
        out.value = est;
        out.right_singular_vector = x;
        out.iterations = it;
        return out;
      }
    } else {
      stable = 0;
    }
    prev = est;
  }
  throw numerical_error("operator_norm_power: no convergence");
}

inline OperatorNormResult operator_norm(const Mat& m, PowerOptions opt = {}) {
  return operator_norm_power(LinearOperator::dense(m), LinearOperator::dense(m.transpose()), opt);
}

// Largest singular value via Lanczos on the Gram operator.  Power iteration
// stalls when the top of the Gram spectrum is a tight cluster; Lanczos
// converges at the cluster level, so this is the right tool when nearby
// singular values are expected.
inline OperatorNormResult operator_norm_lanczos(const Mat& m, LanczosOptions opt = {}) {
  const Mat gram = m.transpose() * m;
  const std::vector<EigenPair> top = top_eigenpairs(LinearOperator::dense(gram), 1, opt);
  OperatorNormResult out;
  out.value = std::sqrt(std::max(0.0, top.front().value));
  out.right_singular_vector = top.front().vector;
  return out;
}

// ---------------------------------------------------------------------------
// spectral projection for an isolated eigenvalue

// Orthogonal projection onto the lambda-eigenspace of a symmetric matrix.
// The isolation hypothesis (no other eigenvalue within `isolation` of
// lambda) is verified from the computed spectrum before projecting.
inline Mat spectral_projection(const Mat& m, double lambda, double isolation) {
  if (isolation <= 0) throw std::domain_error("spectral_projection: isolation must be positive");
  const EigenDecomposition ed = jacobi_eigendecomposition(m);
  const Spectrum spec = ed.spectrum();
  const int n = m.rows();

  std::vector<int> cluster;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(ed.values[static_cast<std::size_t>(i)] - lambda);
    if (d <= spec.multiplicity_tol)
      cluster.push_back(i);
    else if (d < isolation)
      throw std::domain_error("spectral_projection: eigenvalue " + std::to_string(ed.values[static_cast<std::size_t>(i)]) +
                              " violates the isolation hypothesis");
  }
  if (cluster.empty()) throw std::domain_error("spectral_projection: lambda is not in the spectrum");

  Mat d(n, n);
  for (const int c : cluster)
    for (int i = 0; i < n; ++i) {
      const double vic = ed.vectors(i, c);
      if (vic == 0) continue;
      for (int j = 0; j < n; ++j) d(i, j) += vic * ed.vectors(j, c);
    }

  const Mat dd = d * d;
  if (max_abs(dd - d) > 1e-9 || max_asymmetry(d) > 1e-9)
    throw numerical_error("spectral_projection: projection law violated");
  const Mat md = m * d;
  if (max_abs(md - d.scaled(lambda)) > 1e-8 * std::max(1.0, std::abs(lambda)))
    throw numerical_error("spectral_projection: m d != lambda d");
  return d;
}

}  // namespace explab
