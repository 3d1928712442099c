#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "splitting/errors.hpp"
#include "splitting/methods.hpp"

using namespace splitting;

namespace {
const double y = (1.0 - std::cbrt(2.0) - 1.0 / std::cbrt(2.0)) / 6.0;
}

TEST_CASE("error coefficients vanish only for the fourth-order method") {
  const auto [alpha, beta] = error_coefficients(named_method("Yoshida").coeffs);
  CHECK(std::abs(alpha) < 1e-15);
  CHECK(std::abs(beta) < 1e-15);

  const auto s = error_coefficients({0.2, 0.3});
  CHECK((std::abs(s.alpha) > 1e-3 || std::abs(s.beta) > 1e-3));
}

TEST_CASE("error coefficients at reference points") {
  const auto e0 = error_coefficients({0.3, 0.0});
  CHECK(e0.alpha == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(e0.beta == doctest::Approx(-1.0 / 24.0).epsilon(1e-15));

  const auto e1 = error_coefficients({1.0 / 3.0, 1.0 / 3.0});
  CHECK(e1.alpha == doctest::Approx(1.0 / 9.0 - 1.0 / 27.0 - 1.0 / 12.0).epsilon(1e-14));
  CHECK(e1.beta == doctest::Approx(1.0 / 27.0 - 1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("error coefficients are not symmetric under a <-> b") {
  const auto p = error_coefficients({0.2, 0.3});
  const auto q = error_coefficients({0.3, 0.2});
  CHECK(std::abs(p.alpha - q.alpha) > 1e-3);
}

TEST_CASE("curve residuals at the named methods") {
  CHECK(curve_residuals({1.0 / 3.0, 1.0 / 3.0}).hyperbola == 0.0);
  CHECK(std::abs(curve_residuals(named_method("LoSaSk").coeffs).effective4) < 1e-14);
  CHECK(std::abs(2 * y * y * y - y * y + 1.0 / 24.0) < 1e-15);

  const auto yo = curve_residuals(named_method("Yoshida").coeffs);
  CHECK(std::abs(yo.effective4) < 1e-14);
  CHECK(std::abs(yo.energy) < 1e-14);

  const auto pr = curve_residuals(named_method("PrEtAl").coeffs);
  CHECK(std::abs(pr.hyperbola) < 1e-14);
  CHECK(std::abs(pr.energy) < 1e-14);
  // The three-decimal coordinates are within 1e-3 of the hyperbola.
  CHECK(std::abs(curve_residuals({0.290, 0.391}).hyperbola) < 1e-3);

  CHECK(std::abs(curve_residuals(named_method("BlCaSa").coeffs).hyperbola) < 1e-15);
}

TEST_CASE("energy curve is alpha = -beta and the effective-order curve is alpha = beta") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.5);
  for (int i = 0; i < 200; ++i) {
    const MethodCoefficients c{u(rng), u(rng)};
    const auto [alpha, beta] = error_coefficients(c);
    const auto r = curve_residuals(c);
    CHECK(r.energy == doctest::Approx(alpha + beta).epsilon(1e-12).scale(1.0));
    CHECK(r.effective4 == doctest::Approx(beta - alpha).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("named method coordinates") {
  const auto yo = named_method("Yoshida");
  CHECK(yo.coeffs.b == doctest::Approx(-0.1756036).epsilon(1e-6));
  CHECK(yo.coeffs.a == doctest::Approx(1.3512072).epsilon(1e-6));
  CHECK(yo.coeffs.a == doctest::Approx(1.0 - 2.0 * yo.coeffs.b).epsilon(1e-15));

  const auto lo = named_method("LoSaSk");
  CHECK(lo.coeffs.a == lo.coeffs.b);
  CHECK(lo.coeffs.a == doctest::Approx(-0.1756036).epsilon(1e-6));

  const auto bl = named_method("BlCaSa");
  CHECK(bl.coeffs.b == 0.381);
  CHECK(bl.coeffs.a == doctest::Approx(0.296).epsilon(2e-3));

  const auto pr = named_method("PrEtAl");
  CHECK(pr.coeffs.b == doctest::Approx(0.391).epsilon(1e-3));
  CHECK(pr.coeffs.a == doctest::Approx(0.290).epsilon(2e-3));

  CHECK(named_method("Strang").coeffs == MethodCoefficients{1.0 / 3.0, 1.0 / 3.0});
  CHECK(named_method("Verlet1Stage").coeffs == MethodCoefficients{0.5, 0.5});
}

TEST_CASE("named method lookup") {
  CHECK(named_method("strang").name == "Strang");
  CHECK(method_names().size() == 6);
  for (auto n : method_names()) CHECK(named_method(n).name == n);
  CHECK_THROWS_AS(named_method("Ruth"), UnknownName);
}

TEST_CASE("lambda is present exactly when alpha equals beta") {
  for (auto n : method_names()) {
    const auto m = named_method(n);
    CHECK(m.lambda.has_value() == (std::abs(m.alpha - m.beta) < 1e-12));
    const auto [alpha, beta] = error_coefficients(m.coeffs);
    CHECK(std::abs(m.alpha - alpha) <= 1e-15);
    CHECK(std::abs(m.beta - beta) <= 1e-15);
  }
  const auto lo = named_method("LoSaSk");
  REQUIRE(lo.lambda);
  CHECK(*lo.lambda == doctest::Approx(lo.alpha).epsilon(1e-12));
  CHECK(*lo.lambda == doctest::Approx(-0.047083).epsilon(1e-4));
  CHECK_FALSE(named_method("Strang").lambda);
}

TEST_CASE("degeneracy classification") {
  CHECK(classify_degeneracy({0.0, 0.42}) == DegeneracyKind::StrangEquivalent_aZero);
  CHECK(classify_degeneracy({0.3, 0.0}) == DegeneracyKind::StrangEquivalent_bZero);
  CHECK(classify_degeneracy({1.0 / 3.0, 1.0 / 3.0}) == DegeneracyKind::TripleStrang);
  CHECK(classify_degeneracy({0.2, 0.3}) == DegeneracyKind::ThreeStage);
  CHECK(classify_degeneracy({0.5, 0.5}) == DegeneracyKind::PositionVerlet_bothHalf);
  CHECK(classify_degeneracy({0.5, 0.25}) == DegeneracyKind::DoubleStrang);
  CHECK(classify_degeneracy({0.25, 0.5}) == DegeneracyKind::DoublePositionVerlet);
  CHECK(classify_degeneracy({0.5, 0.1}) == DegeneracyKind::TwoStage_aHalf);
  CHECK(classify_degeneracy({0.1, 0.5}) == DegeneracyKind::TwoStage_bHalf);
  CHECK(classify_degeneracy({0.2, 0.3 + 1e-9}, 1e-8) == DegeneracyKind::ThreeStage);
  CHECK(classify_degeneracy({1e-13, 0.3}) == DegeneracyKind::StrangEquivalent_aZero);
}

TEST_CASE("every point gets exactly one kind") {
  std::set<std::string_view> seen;
  for (double a : {0.0, 0.25, 1.0 / 3.0, 0.5, 0.7}) {
    for (double b : {0.0, 0.25, 1.0 / 3.0, 0.5, 0.7}) seen.insert(to_string(classify_degeneracy({a, b})));
  }
  CHECK(seen.size() == 9);
}

TEST_CASE("stage increments") {
  const auto s = stage_increments({1.0 / 3.0, 1.0 / 3.0});
  const double sixth = 1.0 / 6.0;
  const double third = 1.0 / 3.0;
  const std::array<double, 7> expect{sixth, third, third, third, third, third, sixth};
  for (std::size_t i = 0; i < 7; ++i) CHECK(s.fractions[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(s.all_positive);

  const auto yo = stage_increments(named_method("Yoshida").coeffs);
  bool neg_a = false;
  bool neg_b = false;
  for (std::size_t i = 0; i < 7; ++i) (i % 2 == 0 ? neg_b : neg_a) |= yo.fractions[i] < 0.0;
  CHECK(neg_a);
  CHECK(neg_b);
  CHECK_FALSE(yo.all_positive);

  CHECK(stage_increments({0.5, 0.25}).fractions[3] == 0.0);
}

TEST_CASE("stage increments of each flow sum to one") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const auto s = stage_increments({u(rng), u(rng)});
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < 7; ++k) (k % 2 == 0 ? sb : sa) += s.fractions[k];
    CHECK(sa == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sb == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("descriptor JSON") {
  const auto j = to_json(named_method("LoSaSk"));
  CHECK(j.at("name") == "LoSaSk");
  CHECK(j.contains("lambda"));
  CHECK_FALSE(to_json(named_method("Strang")).contains("lambda"));
  for (const char* key : {"a", "b", "alpha", "beta"}) CHECK(j.contains(key));
}
