#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "explab/sl2_lab.hpp"

using namespace explab;

TEST_CASE("averaging_operator basics") {
  CHECK(averaging_operator({Mat::identity(4)}) == Mat::identity(4));

  // cyclic shift plus its transpose: a circulant symmetric mean
  const Permutation shift({1, 2, 3, 0});
  const Mat p = perm_matrix<double>(shift);
  const Mat avg = averaging_operator({p, p.transpose()});
  CHECK(max_asymmetry(avg) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(avg(i, (i + 1) % 4) == 0.5);

  CHECK_THROWS_AS(averaging_operator({p}), std::domain_error);  // not closed under transpose
}

TEST_CASE("sl2 gap record at p = 5 matches the exact characteristic polynomial") {
  // The 6x6 averaging operator of {h, h^-1, k} on P^1(F_5) has characteristic
  // polynomial (x-1)(3x-1)(3x^2-x-1)(9x^2+3x-1)/81; its second largest root
  // is (1+sqrt(13))/6.
  const SelbergGapRecord rec = sl2_gap_record(5);
  CHECK(rec.n == 6);
  const double expected_second = (1.0 + std::sqrt(13.0)) / 6.0;
  CHECK(std::abs(rec.second_eigenvalue - expected_second) < 1e-9);
  CHECK(std::abs(rec.gap - (1.0 - expected_second)) < 1e-9);

  // exact route: 1 is a simple eigenvalue of s, i.e. the kernel of (s - 1)
  // over the rationals is one dimensional
  const auto space = ProjectiveSpace::enumerate(5, 1);
  MatQ s(6, 6);
  for (const auto& g : sl2_symmetric_set().elements) {
    const MatQ pg = perm_matrix<Rational>(permutation_of(g.matrix, space));
    s = s + pg;
  }
  s = s.scaled(Rational(1, 3));
  CHECK(fixed_space(std::vector<MatQ>{s}).dimension == 1);

  // on the full space the operator is doubly stochastic with top eigenvalue
  // 1 of multiplicity exactly 1
  const Spectrum full = symmetric_spectrum(to_double(s));
  CHECK(std::abs(full.top() - 1.0) < 1e-12);
  CHECK(full.top_multiplicity() == 1);
  for (int i = 0; i < 6; ++i) {
    Rational row = 0, col = 0;
    for (int j = 0; j < 6; ++j) {
      row += s(i, j);
      col += s(j, i);
    }
    CHECK(row == Rational(1));
    CHECK(col == Rational(1));
  }
}

TEST_CASE("sl2 gap survey has strictly positive gaps") {
  const auto records = sl2_gap_survey({3, 7, 13}, SigmaVariant::Symmetric, 2);
  REQUIRE(records.size() == 3);
  CHECK(records[0].p == 3);
  CHECK(records[2].p == 13);
  for (const auto& r : records) {
    CHECK(r.n == r.p + 1);
    CHECK(r.gap > 1e-3);
  }
  // p = 3: the mean-zero top eigenvalue is 2/3 exactly
  CHECK(std::abs(records[0].second_eigenvalue - 2.0 / 3.0) < 1e-10);

  CHECK_THROWS_AS(sl2_gap_record(2), std::domain_error);
}

TEST_CASE("the {I,h,k} variant reports a singular-value gap") {
  const SelbergGapRecord rec = sl2_gap_record(3, SigmaVariant::IHK);
  CHECK(std::abs(rec.second_eigenvalue - 0.804737854124) < 1e-8);
  CHECK(rec.gap > 0);
}

TEST_CASE("balanced sign diagonals") {
  const SignDiagonal d = SignDiagonal::balanced(6);
  double sum = 0;
  for (const double s : d.signs) sum += s;
  CHECK(sum == 0.0);  // <v chi, chi> = 0 exactly
  CHECK_THROWS_AS(SignDiagonal::balanced(5), std::domain_error);
}

TEST_CASE("witness operator has norm exactly 4") {
  for (const std::int64_t q : {3, 5, 7}) {
    INFO("q = " << q);
    CHECK(std::abs(witness_norm(q) - 4.0) < 1e-9);
  }
  CHECK(std::abs(operator_norm(witness_generator_sum(5)).value - 3.0) < 1e-9);
  CHECK_THROWS_AS(witness_norm(2), std::domain_error);
}

TEST_CASE("chi displacement under the sign unitary is sqrt(2)") {
  for (const std::int64_t q : {3, 5, 13}) {
    INFO("q = " << q);
    CHECK(std::abs(chi_orthogonal_displacement(q) - std::sqrt(2.0)) < 1e-12);
  }
  // replacing the sign unitary by the identity gives zero displacement
  const int n = 6;
  const auto chi = constant_unit_vector(n);
  double s = 0;
  for (const double c : chi) s += (c - c) * (c - c);
  CHECK(s == 0.0);
}

namespace {

Mat rotation(int n, int i, int j, double angle) {
  Mat r = Mat::identity(n);
  r(i, i) = std::cos(angle);
  r(j, j) = std::cos(angle);
  r(i, j) = -std::sin(angle);
  r(j, i) = std::sin(angle);
  return r;
}

}  // namespace

TEST_CASE("near_fixed_vector: identity family has zero defect") {
  const std::vector<Mat> ops(4, Mat::identity(3));
  const auto res = near_fixed_vector(ops, 1e-6);
  CHECK(res.max_defect < 1e-12);
  CHECK(res.defect_bound > 0);
}

TEST_CASE("near_fixed_vector: planar rotation closed form") {
  const double theta = 0.2;
  const std::vector<Mat> ops{Mat::identity(2), rotation(2, 0, 1, theta)};
  // ||1 + R_theta|| = 2 cos(theta/2), so epsilon slightly above 1 - cos(theta/2) works
  const double eps = 1.0 - std::cos(theta / 2) + 1e-12;
  const auto res = near_fixed_vector(ops, eps);
  // every unit vector moves by exactly 2 sin(theta/2)
  CHECK(std::abs(res.max_defect - 2.0 * std::sin(theta / 2)) < 1e-9);
  CHECK(res.max_defect <= res.defect_bound);

  // rotation by pi: the sum has norm 0, the precondition must fail
  const std::vector<Mat> bad{Mat::identity(2), rotation(2, 0, 1, M_PI)};
  CHECK_THROWS_AS(near_fixed_vector(bad, 0.1), std::domain_error);
  // first operator must be the identity
  CHECK_THROWS_AS(near_fixed_vector({rotation(2, 0, 1, 0.1), Mat::identity(2)}, 0.9), std::domain_error);
}

TEST_CASE("near_fixed_vector: sampled defect bound 2 sqrt(2 n eps)") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> angle(-0.25, 0.25);
  std::uniform_int_distribution<int> pick(0, 5);
  int checked = 0;
  for (int sample = 0; sample < 1000; ++sample) {
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<Mat> ops{Mat::identity(6)};
    for (int i = 1; i < n; ++i) {
      Mat u = Mat::identity(6);
      for (int rot = 0; rot < 2; ++rot) {
        int a = pick(rng), b = pick(rng);
        if (a == b) b = (b + 1) % 6;
        u = u * rotation(6, a, b, angle(rng));
      }
      ops.push_back(u);
    }
    Mat sum = ops[0];
    for (int i = 1; i < n; ++i) sum = sum + ops[static_cast<std::size_t>(i)];
    const double eps = 1.0 - operator_norm_lanczos(sum).value / n + 1e-12;
    REQUIRE(eps > 0);
    const auto res = near_fixed_vector(ops, eps);
    CHECK(res.max_defect <= res.defect_bound + 1e-12);
    ++checked;
  }
  CHECK(checked == 1000);
}
