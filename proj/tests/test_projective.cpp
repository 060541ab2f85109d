#include <array>
#include <random>
#include <span>

#include <catch2/catch_amalgamated.hpp>

#include "explab/projective.hpp"

using namespace explab;

namespace {

ProjectivePoint pt2(std::int64_t a, std::int64_t b, std::int64_t p) {
  const std::array<std::int64_t, 2> v{a, b};
  return canonicalize(std::span<const std::int64_t>(v.data(), v.size()), p);
}

}  // namespace

TEST_CASE("canonicalize picks the representative with last nonzero coordinate 1") {
  CHECK(pt2(2, 1, 5) == pt2(2, 1, 5));
  CHECK(pt2(4, 2, 5) == pt2(2, 1, 5));  // scaling by 2^-1 = 3
  const ProjectivePoint inf = pt2(1, 0, 5);
  CHECK(inf[0] == 1);
  CHECK(inf[1] == 0);
}

TEST_CASE("canonicalize rejects the zero vector and composite moduli") {
  const std::array<std::int64_t, 2> zero{0, 0};
  CHECK_THROWS_AS(canonicalize(std::span<const std::int64_t>(zero.data(), 2), 5), std::domain_error);
  const std::array<std::int64_t, 2> v{1, 2};
  CHECK_THROWS_AS(canonicalize(std::span<const std::int64_t>(v.data(), 2), 6), std::domain_error);
}

TEST_CASE("canonicalize is idempotent and constant on scalar orbits") {
  std::mt19937_64 rng(7);
  for (const std::int64_t p : {3, 5, 13, 101}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::array<std::int64_t, 3> v{};
      do {
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
      } while (v[0] == 0 && v[1] == 0 && v[2] == 0);
      const auto base = canonicalize(std::span<const std::int64_t>(v.data(), 3), p);
      for (std::int64_t lambda = 1; lambda < p; ++lambda) {
        std::array<std::int64_t, 3> w{v[0] * lambda, v[1] * lambda, v[2] * lambda};
        CHECK(canonicalize(std::span<const std::int64_t>(w.data(), 3), p) == base);
      }
      std::array<std::int64_t, 3> again{base[0], base[1], base[2]};
      CHECK(canonicalize(std::span<const std::int64_t>(again.data(), 3), p) == base);
    }
  }
}

TEST_CASE("enumerate_space sizes match the closed forms") {
  CHECK(ProjectiveSpace::enumerate(5, 1).size() == 6);
  CHECK(ProjectiveSpace::enumerate(3, 2).size() == 13);
  CHECK(ProjectiveSpace::enumerate(2, 1).size() == 3);
  for (const std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    CHECK(ProjectiveSpace::enumerate(p, 1).size() == p + 1);
    CHECK(ProjectiveSpace::enumerate(p, 2).size() == p * p + p + 1);
  }
  CHECK_THROWS_AS(ProjectiveSpace::enumerate(6, 1), std::domain_error);
  CHECK_THROWS_AS(ProjectiveSpace::enumerate(5, 3), std::domain_error);
}

TEST_CASE("P^1(F_2) consists of (0,1), (1,0), (1,1) in lexicographic order") {
  const auto sp = ProjectiveSpace::enumerate(2, 1);
  REQUIRE(sp.size() == 3);
  CHECK(sp.point(0) == pt2(0, 1, 2));
  CHECK(sp.point(1) == pt2(1, 0, 2));
  CHECK(sp.point(2) == pt2(1, 1, 2));
}

TEST_CASE("index lookup inverts the point list") {
  for (const std::int64_t p : {5, 7}) {
    for (const int dim : {1, 2}) {
      const auto sp = ProjectiveSpace::enumerate(p, dim);
      for (int i = 0; i < sp.size(); ++i) CHECK(sp.index_of(sp.point(i)) == i);
    }
  }
}

TEST_CASE("apply_matrix on named points") {
  IntMat k(2);
  k.at(0, 1) = 1;
  k.at(1, 0) = -1;
  IntMat h = IntMat::identity(2);
  h.at(0, 1) = 1;

  for (const std::int64_t p : {3, 5, 7, 11}) {
    CHECK(apply_matrix(k, pt2(0, 1, p)) == pt2(1, 0, p));  // k [0] = [inf]
    CHECK(apply_matrix(h, pt2(1, 0, p)) == pt2(1, 0, p));  // h fixes [inf]
  }
  CHECK(apply_matrix(k, pt2(2, 1, 5)) == pt2(2, 1, 5));  // -1/2 = 2 mod 5
}

TEST_CASE("apply_matrix validates the determinant and the dimensions") {
  IntMat m = IntMat::identity(2);
  m.at(0, 0) = 2;  // det 2
  CHECK_THROWS_AS(apply_matrix(m, pt2(1, 1, 5)), std::domain_error);
  IntMat id3 = IntMat::identity(3);
  CHECK_THROWS_AS(apply_matrix(id3, pt2(1, 1, 5)), std::domain_error);
}

TEST_CASE("matrix action is a homomorphism and kills scalars") {
  std::mt19937_64 rng(11);
  for (const std::int64_t p : {5, 13}) {
    const auto sp = ProjectiveSpace::enumerate(p, 1);
    IntMat h = IntMat::identity(2);
    h.at(0, 1) = 1;
    IntMat k(2);
    k.at(0, 1) = 1;
    k.at(1, 0) = -1;
    for (int trial = 0; trial < 20; ++trial) {
      // random words in h, k have determinant 1 automatically
      IntMat m1 = IntMat::identity(2).mod(p), m2 = IntMat::identity(2).mod(p);
      for (int step = 0; step < 6; ++step) {
        m1 = m1.mul_mod((rng() & 1 ? h : k).mod(p), p);
        m2 = m2.mul_mod((rng() & 1 ? h : k).mod(p), p);
      }
      const auto x = sp.point(static_cast<int>(rng() % static_cast<std::uint64_t>(sp.size())));
      CHECK(apply_matrix(m1, apply_matrix(m2, x)) == apply_matrix(m1.mul_mod(m2, p), x));
    }
    IntMat neg = IntMat::identity(2);
    neg.at(0, 0) = -1;
    neg.at(1, 1) = -1;
    for (int i = 0; i < sp.size(); ++i) CHECK(apply_matrix(neg, sp.point(i)) == sp.point(i));
  }
}
