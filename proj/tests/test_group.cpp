#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "explab/group.hpp"

using namespace explab;

TEST_CASE("generator matrices are the standard ones") {
  const IntMat h = generator_matrix("h", Group::SL2);
  CHECK(h.at(0, 0) == 1);
  CHECK(h.at(0, 1) == 1);
  CHECK(h.at(1, 0) == 0);
  CHECK(h.at(1, 1) == 1);

  const IntMat k = generator_matrix("k", Group::SL2);
  CHECK(k.at(0, 0) == 0);
  CHECK(k.at(0, 1) == 1);
  CHECK(k.at(1, 0) == -1);
  CHECK(k.at(1, 1) == 0);

  const IntMat h3 = generator_matrix("h", Group::SL3);
  CHECK(h3 == IntMat::elementary(3, 1, 0, 1));  // I + e21

  CHECK_THROWS_AS(generator_matrix("nope", Group::SL2), std::domain_error);
  CHECK_THROWS_AS(generator_matrix("e11+", Group::SL3), std::domain_error);
}

TEST_CASE("the SL3 generating set is symmetric and contains the identity") {
  const GeneratorSet s = sl3_symmetric_set();
  CHECK(s.elements.size() == 13);
  CHECK(s.contains_identity);
  CHECK(s.symmetric);
  for (const auto& g : s.elements) {
    REQUIRE(g.matrix.det_mod(101) == 1);
    // inverse of each element is again in the set
    const IntMat inv = g.matrix.inverse_mod(101);
    bool found = false;
    for (const auto& other : s.elements) found = found || other.matrix.mod(101) == inv;
    CHECK(found);
  }
}

TEST_CASE("sigma_5(h) is the affine 5-cycle fixing infinity") {
  const auto sp = ProjectiveSpace::enumerate(5, 1);
  const auto perm = permutation_of(GroupWord{Group::SL2, {{"h", 1}}}, sp);
  // lexicographic order: [0], [inf], [1], [2], [3], [4]
  CHECK(perm.images() == std::vector<std::int32_t>{2, 1, 3, 4, 5, 0});
  const auto cycles = perm.cycles();
  REQUIRE(cycles.size() == 2);
  CHECK((cycles[0].size() == 5 || cycles[1].size() == 5));
  CHECK((cycles[0].size() == 1 || cycles[1].size() == 1));
}

TEST_CASE("empty word gives the identity permutation") {
  const auto sp = ProjectiveSpace::enumerate(7, 1);
  CHECK(permutation_of(GroupWord{Group::SL2, {}}, sp).is_identity());
}

TEST_CASE("k^2 = -I acts trivially on projective space") {
  for (const std::int64_t p : {3, 5, 13}) {
    const auto sp = ProjectiveSpace::enumerate(p, 1);
    CHECK(permutation_of(GroupWord{Group::SL2, {{"k", 2}}}, sp).is_identity());
  }
}

TEST_CASE("word evaluation is a homomorphism into the symmetric group") {
  std::mt19937_64 rng(23);
  const std::vector<std::string> labels{"h", "k"};
  const auto sp = ProjectiveSpace::enumerate(11, 1);
  for (int trial = 0; trial < 25; ++trial) {
    GroupWord w1{Group::SL2, {}}, w2{Group::SL2, {}};
    for (int step = 0; step < 4; ++step) {
      w1.factors.push_back({labels[rng() % 2], static_cast<std::int64_t>(rng() % 7) - 3});
      w2.factors.push_back({labels[rng() % 2], static_cast<std::int64_t>(rng() % 7) - 3});
    }
    std::erase_if(w1.factors, [](const auto& f) { return f.second == 0; });
    std::erase_if(w2.factors, [](const auto& f) { return f.second == 0; });
    GroupWord prod{Group::SL2, w1.factors};
    prod.factors.insert(prod.factors.end(), w2.factors.begin(), w2.factors.end());
    CHECK(permutation_of(prod, sp) == permutation_of(w1, sp) * permutation_of(w2, sp));
  }
}

TEST_CASE("the induced actions are transitive") {
  for (const std::int64_t p : {2, 3, 5, 7, 13}) {
    const auto sp = ProjectiveSpace::enumerate(p, 1);
    const std::vector<Permutation> gens{
        permutation_of(generator_matrix("h", Group::SL2), sp),
        permutation_of(generator_matrix("k", Group::SL2), sp)};
    CHECK(is_transitive(gens, sp.size()));
  }
  for (const std::int64_t p : {3, 5}) {
    const auto sp = ProjectiveSpace::enumerate(p, 2);
    std::vector<Permutation> gens;
    for (const auto& g : sl3_symmetric_set().elements) gens.push_back(permutation_of(g.matrix, sp));
    CHECK(is_transitive(gens, sp.size()));
  }
}

TEST_CASE("h^q collapses mod p when q = 1 mod p") {
  // q = 7, p = 3: sigma_3(h^7) = sigma_3(h)
  const auto sp = ProjectiveSpace::enumerate(3, 2);
  const auto h = generator_matrix("h", Group::SL3);
  CHECK(permutation_of(h.pow_mod(7, 3), sp) == permutation_of(h.pow_mod(1, 3), sp));
  // and big exponents match their reductions: sigma_43(h^(43+1)) = sigma_43(h)
  const auto sp43 = ProjectiveSpace::enumerate(43, 2);
  CHECK(permutation_of(h.pow_mod(44, 43), sp43) == permutation_of(h.pow_mod(1, 43), sp43));
}

TEST_CASE("verify_action_formulas passes for small primes") {
  for (const std::int64_t p : {3, 5, 7, 31}) {
    const auto rep = verify_action_formulas(p);
    INFO("p = " << p);
    CHECK(rep.pass());
    CHECK(rep.points_checked == 2 * (p + 1));
  }
  // spot value: sigma_7(k)[1] = [6] since -1/1 = 6 mod 7
  const auto sp = ProjectiveSpace::enumerate(7, 1);
  const auto sk = permutation_of(generator_matrix("k", Group::SL2), sp);
  CHECK(sk(sp.index_of_affine(1)) == sp.index_of_affine(6));
}

TEST_CASE("permutation class validates bijections and composes correctly") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::domain_error);
  const Permutation a({1, 2, 0});
  CHECK((a * a.inverse()).is_identity());
  const Permutation b({0, 2, 1});
  CHECK((a * b).images() == std::vector<std::int32_t>{1, 0, 2});  // a(b(x))
  const Permutation t = tensor_permutation(a, b);
  CHECK(t(0 * 3 + 1) == a(0) * 3 + b(1));
}
