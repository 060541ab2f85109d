#include <algorithm>
#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "explab/representation.hpp"
#include "explab/spectral.hpp"

using namespace explab;

namespace {

// ---------------------------------------------------------------------------
// independent oracle: closed-form roots of the characteristic polynomial for
// symmetric matrices of size <= 4 (all roots real)

using ld = long double;

// coefficients of det(xI - m): x^n + c[n-1] x^(n-1) + ... + c[0]
std::vector<ld> charpoly(const Mat& m) {
  const int n = m.rows();
  std::vector<std::vector<ld>> a(static_cast<std::size_t>(n), std::vector<ld>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  // Faddeev-LeVerrier
  std::vector<std::vector<ld>> mk(static_cast<std::size_t>(n), std::vector<ld>(static_cast<std::size_t>(n), 0));
  std::vector<ld> c(static_cast<std::size_t>(n) + 1, 0);
  c[static_cast<std::size_t>(n)] = 1;
  for (int k = 1; k <= n; ++k) {
    // mk = a * mk + c[n-k+1] * I
    std::vector<std::vector<ld>> next(static_cast<std::size_t>(n), std::vector<ld>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ld s = k == 1 ? 0 : 0;
        for (int l = 0; l < n; ++l) s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] * mk[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        if (i == j && k > 1) s += c[static_cast<std::size_t>(n - k + 1)];
        if (k == 1) s = (i == j) ? 1 : 0;
        next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
      }
    mk = next;
    ld tr = 0;
    for (int i = 0; i < n; ++i) {
      ld s = 0;
      for (int l = 0; l < n; ++l) s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] * mk[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
      tr += s;
    }
    c[static_cast<std::size_t>(n - k)] = -tr / k;
  }
  return c;
}

// all-real cubic x^3 + a x^2 + b x + c by the trigonometric method
std::vector<ld> cubic_roots(ld a, ld b, ld c) {
  const ld p = b - a * a / 3;
  const ld q = 2 * a * a * a / 27 - a * b / 3 + c;
  std::vector<ld> t;
  if (p > -1e-30L) {
    // triple (or nearly triple) root
    t = {0, 0, 0};
    if (std::abs((double)q) > 1e-30) t = {std::cbrt((ld)-q), std::cbrt((ld)-q), std::cbrt((ld)-q)};
  } else {
    const ld mp3 = std::sqrt(-p / 3);
    ld arg = 3 * q / (2 * p * mp3);
    arg = std::min((ld)1, std::max((ld)-1, arg));
    const ld theta = std::acos(arg);
    for (int k = 0; k < 3; ++k) t.push_back(2 * mp3 * std::cos(theta / 3 - 2 * M_PIl * k / 3));
  }
  for (auto& x : t) x -= a / 3;
  std::sort(t.begin(), t.end());
  return t;
}

// roots of x^n + c[n-1] x^(n-1) + ... + c[0], n <= 4, all real
std::vector<double> closed_form_roots(const std::vector<ld>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<ld> roots;
  if (n == 1) {
    roots = {-c[0]};
  } else if (n == 2) {
    const ld b = c[1], cc = c[0];
    const ld disc = std::sqrt(std::max((ld)0, b * b - 4 * cc));
    const ld r1 = (-b - (b >= 0 ? disc : -disc)) / 2;
    roots = {r1, r1 == 0 ? -b : cc / r1};
  } else if (n == 3) {
    roots = cubic_roots(c[2], c[1], c[0]);
  } else {
    // depress: x = y - c3/4, then use the resolvent cubic
    const ld b3 = c[3], b2 = c[2], b1 = c[1], b0 = c[0];
    const ld sh = b3 / 4;
    const ld p = b2 - 3 * b3 * b3 / 8;
    const ld q = b1 - b2 * b3 / 2 + b3 * b3 * b3 / 8;
    const ld r = b0 - b1 * b3 / 4 + b2 * b3 * b3 / 16 - 3 * b3 * b3 * b3 * b3 / 256;
    // u^3 + 2p u^2 + (p^2-4r) u - q^2, roots (y_i + y_j)^2 >= 0
    std::vector<ld> u = cubic_roots(2 * p, p * p - 4 * r, -q * q);
    ld s1 = std::sqrt(std::max((ld)0, u[0]));
    const ld s2 = std::sqrt(std::max((ld)0, u[1]));
    const ld s3 = std::sqrt(std::max((ld)0, u[2]));
    if (q > 0) s1 = -s1;  // fix sign so s1*s2*s3 = -q
    roots = {(s1 + s2 + s3) / 2 - sh, (s1 - s2 - s3) / 2 - sh, (-s1 + s2 - s3) / 2 - sh, (-s1 - s2 + s3) / 2 - sh};
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (const ld x : roots) out.push_back(static_cast<double>(x));
  return out;
}

Mat random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

}  // namespace

TEST_CASE("jacobi on tiny fixed matrices") {
  Mat d(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 3;
  const Spectrum s = symmetric_spectrum(d);
  CHECK(s.eigenvalues == std::vector<double>{1, 2, 3});

  Mat f(2, 2);
  f(0, 1) = f(1, 0) = 1;
  const Spectrum s2 = symmetric_spectrum(f);
  CHECK(std::abs(s2.eigenvalues[0] + 1) < 1e-14);
  CHECK(std::abs(s2.eigenvalues[1] - 1) < 1e-14);
}

TEST_CASE("averaging a trivial representation has spectrum {1}") {
  // all generators act as the identity
  const Mat s = Mat::identity(5);
  const Spectrum spec = symmetric_spectrum(s);
  CHECK(spec.top_multiplicity() == 5);
  CHECK(spec.top() == 1.0);
}

TEST_CASE("jacobi rejects non-symmetric input") {
  Mat m(2, 2);
  m(0, 1) = 1e-6;
  CHECK_THROWS_AS(symmetric_spectrum(m), std::domain_error);
}

TEST_CASE("jacobi matches closed-form characteristic polynomial roots up to degree 4") {
  std::mt19937_64 rng(2024);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const Mat m = random_symmetric(n, rng);
      const auto oracle = closed_form_roots(charpoly(m));
      const Spectrum s = symmetric_spectrum(m);
      REQUIRE(static_cast<int>(oracle.size()) == n);
      for (int i = 0; i < n; ++i) {
        INFO("n=" << n << " trial=" << trial << " i=" << i);
        CHECK(std::abs(s.eigenvalues[static_cast<std::size_t>(i)] - oracle[static_cast<std::size_t>(i)]) < 1e-10);
      }
    }
  }
}

TEST_CASE("eigenvalue sums reproduce trace and Frobenius norm") {
  std::mt19937_64 rng(99);
  for (const int n : {5, 17, 40}) {
    const Mat m = random_symmetric(n, rng);
    const Spectrum s = symmetric_spectrum(m);
    double sum = 0, sum2 = 0;
    for (const double v : s.eigenvalues) {
      sum += v;
      sum2 += v * v;
    }
    const double fro = frobenius_norm(m);
    CHECK(std::abs(sum - m.trace()) < 1e-9 * std::max(1.0, fro));
    CHECK(std::abs(sum2 - fro * fro) < 1e-9 * std::max(1.0, fro * fro));
  }
}

TEST_CASE("lanczos agrees with the dense path") {
  // the symmetric averaging operator of pi_bar_5 (x) pi_5 on 36 dimensions
  const auto sp = ProjectiveSpace::enumerate(5, 1);
  const auto gens = sl2_symmetric_set();
  Mat s(36, 36);
  for (const auto& g : gens.elements) {
    const Mat pg = perm_matrix<double>(permutation_of(g.matrix, sp));
    s = s + tensor(pg, pg);
  }
  s = s.scaled(1.0 / 3.0);

  const Spectrum dense = symmetric_spectrum(s);
  const auto pairs = top_eigenpairs(LinearOperator::dense(s), 5);
  for (int i = 0; i < 5; ++i) {
    const double expected = dense.eigenvalues[static_cast<std::size_t>(35 - i)];
    CHECK(std::abs(pairs[static_cast<std::size_t>(i)].value - expected) < 1e-8);
  }
  // residual guarantee against the original operator
  for (const auto& pr : pairs) {
    std::vector<double> res = s.apply(pr.vector);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] -= pr.value * pr.vector[i];
    double nrm = 0;
    for (const double x : res) nrm += x * x;
    CHECK(std::sqrt(nrm) < 1e-7);
  }

  std::mt19937_64 rng(5150);
  const Mat r = random_symmetric(60, rng);
  const Spectrum dr = symmetric_spectrum(r);
  const auto tp = top_eigenpairs(LinearOperator::dense(r), 3);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(tp[static_cast<std::size_t>(i)].value - dr.eigenvalues[static_cast<std::size_t>(59 - i)]) < 1e-8);
  const auto bt = bottom_eigenpairs(LinearOperator::dense(r), 2);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(bt[static_cast<std::size_t>(i)].value - dr.eigenvalues[static_cast<std::size_t>(i)]) < 1e-8);
}

TEST_CASE("lanczos recovers multiplicities via deflation") {
  Mat m(7, 7);
  for (int i = 0; i < 7; ++i) m(i, i) = (i < 3) ? 2.0 : 0.5;
  const auto pairs = top_eigenpairs(LinearOperator::dense(m), 4);
  CHECK(std::abs(pairs[0].value - 2) < 1e-10);
  CHECK(std::abs(pairs[1].value - 2) < 1e-10);
  CHECK(std::abs(pairs[2].value - 2) < 1e-10);
  CHECK(std::abs(pairs[3].value - 0.5) < 1e-10);
  CHECK_THROWS_AS(top_eigenpairs(LinearOperator::dense(m), 8), std::domain_error);
}

TEST_CASE("top_eigenpairs trivial examples") {
  const auto idpairs = top_eigenpairs(LinearOperator::dense(Mat::identity(6)), 1);
  CHECK(std::abs(idpairs[0].value - 1) < 1e-12);

  const Mat z = to_double(mean_projection_exact(5));
  const auto zp = top_eigenpairs(LinearOperator::dense(z), 2);
  CHECK(std::abs(zp[0].value - 1) < 1e-10);
  CHECK(std::abs(zp[1].value) < 1e-10);
}

TEST_CASE("operator norm by power iteration") {
  Mat a(2, 2);
  a(0, 0) = 3;
  a(1, 1) = -4;  // non-symmetric sign pattern is irrelevant for the norm
  a(0, 1) = 0;
  CHECK(std::abs(operator_norm(a).value - 4) < 1e-9);

  std::mt19937_64 rng(321);
  const Mat m = random_symmetric(25, rng);
  const Spectrum s = symmetric_spectrum(m);
  const double expected = std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
  CHECK(std::abs(operator_norm(m).value - expected) < 1e-8);
}

TEST_CASE("spectral projection on isolated eigenvalues") {
  Mat d(3, 3);
  d(0, 0) = 2;
  const Mat proj = spectral_projection(d, 2.0, 1.0);
  Mat expected(3, 3);
  expected(0, 0) = 1;
  CHECK(max_abs(proj - expected) < 1e-12);

  const Mat z = to_double(mean_projection_exact(6));
  CHECK(max_abs(spectral_projection(z, 1.0, 0.5) - z) < 1e-10);

  // isolation hypothesis violated
  Mat close(2, 2);
  close(0, 0) = 2;
  close(1, 1) = 2 - 1e-3;
  CHECK_THROWS_AS(spectral_projection(close, 2.0, 1e-2), std::domain_error);
  // lambda not in the spectrum
  CHECK_THROWS_AS(spectral_projection(d, 5.0, 0.5), std::domain_error);
}

TEST_CASE("classify_gap") {
  const Spectrum a = spectrum_from_values({-1.0, 0.5, 1.0});
  const GapReport ra = classify_gap(a, 1.0, 0.4);
  CHECK(ra.pass);
  CHECK(std::abs(ra.gap - 0.5) < 1e-12);
  CHECK(ra.top_multiplicity == 1);

  const Spectrum b = spectrum_from_values({0.99, 1.0, 1.0});
  const GapReport rb = classify_gap(b, 1.0, 0.05);
  CHECK_FALSE(rb.pass);
  CHECK(rb.top_multiplicity == 2);
  CHECK(std::abs(rb.gap - 0.01) < 1e-12);

  const GapReport rc = classify_gap(a, 2.0, 0.0);  // wrong expected top
  CHECK_FALSE(rc.pass);
}
