// Classifier oracles: flags and residuals for hand-checked matrices and
// relations, then the property suite across the corpus.

#include <dispmap/properties.hpp>

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dispmap;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix M(2, 2);
  M << a, b, c, d;
  return M;
}

const Matrix kSwap = (Matrix(2, 2) << 0, 1, 1, 0).finished();

}  // namespace

TEST_CASE("classify on hand-checked matrices") {
  SECTION("Id - swap: monotone and cocoercive but not firmly nonexpansive") {
    Matrix M = Matrix::Identity(2, 2) - kSwap;
    auto r = classify(M);
    REQUIRE(r.monotone);
    REQUIRE(r.cocoercive_half);
    REQUIRE(r.paramonotone);
    REQUIRE_FALSE(r.firmly_nonexpansive);
    REQUIRE_FALSE(r.nonexpansive);  // norm is 2
    REQUIRE(r.residual_details.at("nonexpansive") == Catch::Approx(1.0));
    // ||2M - Id|| = ||Id - 2 swap|| = 3
    REQUIRE(r.residual_details.at("firmly_nonexpansive") ==
            Catch::Approx(2.0));
    REQUIRE_FALSE(r.strongly_monotone_modulus.has_value());
  }

  SECTION("halved displacement of the swap is firmly nonexpansive") {
    Matrix M = 0.5 * (Matrix::Identity(2, 2) - kSwap);
    auto r = classify(M);
    REQUIRE(r.firmly_nonexpansive);
    REQUIRE(r.nonexpansive);
    REQUIRE(r.monotone);
  }

  SECTION("zero matrix sits on every boundary") {
    auto r = classify(Matrix::Zero(2, 2));
    REQUIRE(r.monotone);
    REQUIRE(r.nonexpansive);
    REQUIRE(r.firmly_nonexpansive);
    REQUIRE(r.cocoercive_half);
    REQUIRE(r.paramonotone);
    REQUIRE_FALSE(r.strongly_monotone_modulus.has_value());
  }

  SECTION("identity is strongly monotone with modulus 1") {
    auto r = classify(Matrix::Identity(3, 3));
    REQUIRE(r.strongly_monotone_modulus);
    REQUIRE(*r.strongly_monotone_modulus == Catch::Approx(1.0));
  }

  SECTION("rotation displacement: strongly monotone, cocoercive, not firm") {
    Matrix R = mat2(0, -1, 1, 0);
    Matrix M = Matrix::Identity(2, 2) - R;
    auto r = classify(M);
    REQUIRE(r.monotone);
    REQUIRE(r.strongly_monotone_modulus);
    REQUIRE(*r.strongly_monotone_modulus == Catch::Approx(1.0));
    REQUIRE(r.cocoercive_half);
    REQUIRE_FALSE(r.firmly_nonexpansive);
    REQUIRE(r.paramonotone);  // vacuous: symmetric part is invertible
  }

  SECTION("a non-monotone operator") {
    auto r = classify(-Matrix::Identity(2, 2));
    REQUIRE_FALSE(r.monotone);
    REQUIRE(r.residual_details.at("monotone") == Catch::Approx(1.0));
  }

  SECTION("residual_details covers every flag") {
    auto r = classify(kSwap);
    for (const char* key :
         {"nonexpansive", "firmly_nonexpansive", "monotone", "cocoercive_half",
          "paramonotone", "strongly_monotone"})
      REQUIRE(r.residual_details.count(key) == 1);
  }
}

TEST_CASE("classify_relation") {
  SECTION("inverse displacement of the swap is 1/2-strongly monotone, "
          "with the form attaining zero") {
    auto inv = inverse(from_matrix(Matrix::Identity(2, 2) - kSwap));
    auto r = classify_relation(inv, 0.5);
    REQUIRE(r.monotone);
    REQUIRE(r.maximal);
    REQUIRE(r.strongly_monotone);
    REQUIRE(std::abs(r.strong_form_min) < 1e-12);  // tight bound
    REQUIRE(r.graph_dim == 2);
  }

  SECTION("identity graph is 1-strongly monotone, exactly") {
    auto r = classify_relation(from_matrix(Matrix::Identity(2, 2)), 1.0);
    REQUIRE(r.strongly_monotone);
    REQUIRE(std::abs(r.strong_form_min) < 1e-12);
  }

  SECTION("normal cone of a line: maximal, never strongly monotone") {
    Matrix e1(2, 1);
    e1 << 1, 0;
    auto N = normal_cone_of(Subspace(2, e1));
    auto weak = classify_relation(N, 0.0);
    REQUIRE(weak.monotone);
    REQUIRE(weak.maximal);
    auto strong = classify_relation(N, 0.5);
    REQUIRE_FALSE(strong.strongly_monotone);
    // The graph basis pairs (e1, 0) with (0, e2); the strong form subtracts
    // beta on the first coefficient only, so the minimum is exactly -beta.
    REQUIRE(strong.strong_form_min == Catch::Approx(-0.5));
  }

  SECTION("minus the identity is not monotone") {
    auto r = classify_relation(from_matrix(-Matrix::Identity(2, 2)));
    REQUIRE_FALSE(r.monotone);
    REQUIRE_FALSE(r.maximal);
    REQUIRE(r.form_min == Catch::Approx(-0.5));
  }

  SECTION("empty graph is vacuously monotone, never maximal") {
    auto r = classify_relation(LinearRelation(2, Subspace::zero(4)));
    REQUIRE(r.monotone);
    REQUIRE_FALSE(r.maximal);
  }

  SECTION("relation and matrix classifiers agree on single-valued operators") {
    NormalSampler rng(31);
    for (int s = 0; s < 4; ++s) {
      Matrix M = rng.gaussian(3, 3);
      Matrix sym_part = 0.5 * (M + M.transpose());
      // Shift far from the boundary to keep both verdicts unambiguous.
      Matrix clear_pos = sym_part + 4.0 * Matrix::Identity(3, 3);
      Matrix clear_neg = sym_part - 4.0 * Matrix::Identity(3, 3);
      REQUIRE(classify(clear_pos).monotone);
      REQUIRE(classify_relation(from_matrix(clear_pos)).monotone);
      REQUIRE_FALSE(classify(clear_neg).monotone);
      REQUIRE_FALSE(classify_relation(from_matrix(clear_neg)).monotone);
    }
  }

  REQUIRE_THROWS_AS(
      classify_relation(from_matrix(Matrix::Identity(2, 2)), -1.0),
      InputError);
}

TEST_CASE("property suite on hand-checked operators") {
  SECTION("swap passes everything") {
    auto checks = property_suite(analyze(kSwap));
    REQUIRE(checks.size() == 14);
    REQUIRE(all_pass(checks));
    for (size_t i = 1; i < checks.size(); ++i)
      REQUIRE(checks[i - 1].check_id < checks[i].check_id);
    for (const auto& c : checks) {
      REQUIRE_FALSE(c.check_id.empty());
      REQUIRE_FALSE(c.claim.empty());
      REQUIRE(c.pass == (c.residual <= c.tol));
    }
  }

  SECTION("identity passes everything") {
    REQUIRE(all_pass(property_suite(analyze(Matrix::Identity(3, 3)))));
  }
}

TEST_CASE("property suite across the corpus") {
  auto corpus = dispmap::testing::structured_corpus();
  for (auto& op : dispmap::testing::random_corpus(16, 2))
    corpus.push_back(op);
  for (const auto& op : corpus) {
    CAPTURE(op.name);
    auto checks = property_suite(analyze(op.R));
    for (const auto& c : checks) {
      CAPTURE(c.check_id, c.residual, c.tol);
      REQUIRE(c.pass);
    }
  }
}
