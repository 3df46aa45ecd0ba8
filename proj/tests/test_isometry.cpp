// Finite-order isometries: builders, order detection, and the finite power
// series that replace the SVD route. Series values for the 3-cycle and the
// quarter rotation are frozen from hand computation.

#include <dispmap/isometry.hpp>

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace dispmap;

TEST_CASE("builders produce the expected matrices and orders") {
  SECTION("cyclic shift on R^3") {
    auto iso = make_cyclic_shift(3);
    REQUIRE(iso.order == 3);
    Matrix expected(3, 3);
    expected << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    REQUIRE(operator_norm(iso.R - expected) == 0.0);
  }

  SECTION("quarter turn") {
    auto iso = make_block_rotation({{1, 4}});
    REQUIRE(iso.order == 4);
    Matrix expected(2, 2);
    expected << 0, -1, 1, 0;
    REQUIRE(operator_norm(iso.R - expected) < 1e-15);
  }

  SECTION("half turn is minus the identity") {
    auto iso = make_block_rotation({{1, 2}});
    REQUIRE(iso.order == 2);
    REQUIRE(operator_norm(iso.R + Matrix::Identity(2, 2)) < 1e-15);
  }

  SECTION("mixed blocks take the lcm of reduced denominators") {
    REQUIRE(make_block_rotation({{1, 3}, {1, 4}}).order == 12);
    REQUIRE(make_block_rotation({{2, 4}, {3, 9}}).order == 6);  // 1/2 and 1/3
    REQUIRE(make_block_rotation({{5, 3}, {-1, 4}}).order == 12);
  }

  SECTION("signed permutations") {
    auto neg = make_signed_permutation({0, 1}, {-1, -1});
    REQUIRE(neg.order == 2);
    REQUIRE(operator_norm(neg.R + Matrix::Identity(2, 2)) == 0.0);

    auto quarter = make_signed_permutation({1, 0}, {1, -1});
    REQUIRE(quarter.order == 4);
    Matrix expected(2, 2);
    expected << 0, -1, 1, 0;
    REQUIRE(operator_norm(quarter.R - expected) == 0.0);

    auto mixed = make_signed_permutation({1, 2, 0, 4, 3}, {1, 1, -1, 1, 1});
    REQUIRE(mixed.order == 6);  // lcm(2 * 3, 2)
  }

  SECTION("degenerate inputs are rejected") {
    REQUIRE_THROWS_AS(make_cyclic_shift(1), InputError);
    REQUIRE_THROWS_AS(make_block_rotation({}), InputError);
    REQUIRE_THROWS_AS(make_block_rotation({{0, 1}}), InputError);
    REQUIRE_THROWS_AS(make_block_rotation({{1, 0}}), InputError);
    REQUIRE_THROWS_AS(make_signed_permutation({0, 1}, {1, 1}), InputError);
    REQUIRE_THROWS_AS(make_signed_permutation({0, 0}, {1, 1}), InputError);
    REQUIRE_THROWS_AS(make_signed_permutation({0, 1}, {2, 1}), InputError);
    REQUIRE_THROWS_AS(make_signed_permutation({0, 1}, {1}), InputError);
  }
}

TEST_CASE("order detection") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  REQUIRE(order_of(swap, 24) == 2);
  REQUIRE(order_of(make_cyclic_shift(5).R, 24) == 5);
  REQUIRE(order_of(Matrix::Identity(3, 3), 24) == 1);
  REQUIRE_FALSE(order_of(0.5 * Matrix::Identity(2, 2), 24).has_value());
  // Order above the cap stays undetected.
  REQUIRE_FALSE(order_of(make_cyclic_shift(9).R, 8).has_value());
  REQUIRE_THROWS_AS(order_of(swap, 1), InputError);
}

TEST_CASE("FiniteOrderIsometry validates its claim") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  REQUIRE_NOTHROW(FiniteOrderIsometry(swap, 2));
  REQUIRE_THROWS_AS(FiniteOrderIsometry(swap, 4), InputError);  // not minimal
  REQUIRE_THROWS_AS(FiniteOrderIsometry(0.9 * swap, 2), InputError);
  REQUIRE_THROWS_AS(FiniteOrderIsometry(swap, 1), InputError);
}

TEST_CASE("projector series") {
  SECTION("swap averages to the projector onto the diagonal") {
    auto ps = projector_series(FiniteOrderIsometry(
        (Matrix(2, 2) << 0, 1, 1, 0).finished(), 2));
    REQUIRE(operator_norm(ps.series - 0.5 * Matrix::Ones(2, 2)) < 1e-15);
    REQUIRE(ps.r_projector < 1e-13);
    REQUIRE(ps.r_shift < 1e-15);
  }

  SECTION("quarter turn has no fixed directions") {
    auto ps = projector_series(make_block_rotation({{1, 4}}));
    REQUIRE(operator_norm(ps.series) < 1e-15);
    REQUIRE(ps.r_projector < 1e-13);
  }
}

TEST_CASE("selection series frozen values") {
  SECTION("3-cycle: S = (R - R^2)/6") {
    auto iso = make_cyclic_shift(3);
    auto a = analyze(iso.R);
    auto ss = selection_series(iso, a);
    Matrix expected(3, 3);
    expected << 0, -1, 1, 1, 0, -1, -1, 1, 0;
    expected /= 6.0;
    REQUIRE(operator_norm(ss.series - expected) < 1e-14);
    REQUIRE(ss.r_vs_selection < 1e-13);
    REQUIRE(ss.r_skew < 1e-14);
  }

  SECTION("quarter turn: S = R/2, cross-checked by direct inversion") {
    auto iso = make_block_rotation({{1, 4}});
    auto a = analyze(iso.R);
    auto ss = selection_series(iso, a);
    REQUIRE(operator_norm(ss.series - 0.5 * iso.R) < 1e-14);
    // Independent route: (Id - R) is invertible here, so the selection is the
    // plain inverse shifted by -Id/2.
    Matrix direct = (Matrix::Identity(2, 2) - iso.R).inverse() -
                    0.5 * Matrix::Identity(2, 2);
    REQUIRE(operator_norm(ss.series - direct) < 1e-14);
    REQUIRE(ss.r_vs_selection < 1e-13);
  }

  SECTION("swap: selection vanishes") {
    auto iso = FiniteOrderIsometry((Matrix(2, 2) << 0, 1, 1, 0).finished(), 2);
    auto a = analyze(iso.R);
    auto ss = selection_series(iso, a);
    REQUIRE(operator_norm(ss.series) < 1e-15);
    REQUIRE(ss.r_vs_selection < 1e-13);
  }
}

TEST_CASE("symmetric sandwich closed form") {
  SECTION("swap: both sides equal (R - Id)/2") {
    auto iso = FiniteOrderIsometry((Matrix(2, 2) << 0, 1, 1, 0).finished(), 2);
    auto a = analyze(iso.R);
    auto sw = symmetric_sandwich(iso, a);
    REQUIRE(sw.residual < 1e-14);
    REQUIRE(operator_norm(sw.rhs - 0.5 * (iso.R - Matrix::Identity(2, 2))) <
            1e-14);
  }

  SECTION("3-cycle: rhs = (-Id + (R + R^2)/2) / 3") {
    auto iso = make_cyclic_shift(3);
    auto a = analyze(iso.R);
    auto sw = symmetric_sandwich(iso, a);
    Matrix R2 = iso.R * iso.R;
    Matrix expected =
        (-Matrix::Identity(3, 3) + 0.5 * (iso.R + R2)) / 3.0;
    REQUIRE(operator_norm(sw.rhs - expected) < 1e-14);
    REQUIRE(sw.residual < 1e-13);
  }

  SECTION("quarter turn: both sides vanish") {
    auto iso = make_block_rotation({{1, 4}});
    auto a = analyze(iso.R);
    auto sw = symmetric_sandwich(iso, a);
    REQUIRE(operator_norm(sw.lhs) < 1e-14);
    REQUIRE(operator_norm(sw.rhs) < 1e-14);
  }
}

TEST_CASE("series identities across built isometries") {
  std::vector<FiniteOrderIsometry> isos;
  for (int m : {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})
    isos.push_back(make_cyclic_shift(m));
  isos.push_back(make_block_rotation({{1, 6}}));
  isos.push_back(make_block_rotation({{1, 3}, {1, 4}}));
  isos.push_back(make_block_rotation({{1, 2}, {5, 6}}));
  isos.push_back(make_signed_permutation({1, 2, 0, 4, 3}, {1, 1, -1, 1, 1}));
  isos.push_back(make_signed_permutation({2, 0, 1}, {-1, 1, 1}));

  for (const auto& iso : isos) {
    CAPTURE(iso.order, iso.R.rows());
    auto a = analyze(iso.R);
    REQUIRE(projector_series(iso).r_projector < 1e-12);
    REQUIRE(projector_series(iso).r_shift < 1e-12);
    auto ss = selection_series(iso, a);
    REQUIRE(ss.r_vs_selection < 1e-12);
    REQUIRE(ss.r_skew < 1e-12);
    REQUIRE(symmetric_sandwich(iso, a).residual < 1e-12);
    auto pw = power_sum_identities(iso);
    REQUIRE(std::max({pw.r_shift_up, pw.r_shift_down, pw.r_shift_all,
                      pw.r_pair}) < 1e-12);
  }
}

TEST_CASE("skewness witness separates shifts of order three and up") {
  for (int m : {3, 4, 5, 8, 12}) {
    auto a = analyze(make_cyclic_shift(m).R);
    CAPTURE(m);
    REQUIRE(operator_norm(a.selection - Matrix(a.selection.transpose())) >
            0.01);
  }
  auto a2 = analyze(make_cyclic_shift(2).R);
  REQUIRE(operator_norm(a2.selection - Matrix(a2.selection.transpose())) <
          1e-13);
}
