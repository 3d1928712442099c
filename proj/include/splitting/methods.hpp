/**
 * @file methods.hpp
 * @brief Points of the (a,b) plane of palindromic three-stage splittings.
 *
 * One step of a method with coefficients (a,b) is
 *
 *   B((1/2-b)h) A(ah) B(bh) A((1-2a)h) B(bh) A(ah) B((1/2-b)h)
 *
 * where A(t), B(t) are the exact flows of the two split systems. The
 * second-order local error is h^2 (alpha [A,[A,B]] + beta [B,[A,B]]) with the
 * bracket [F,G] = F'G - G'F.
 */
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace splitting {

struct MethodCoefficients {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const MethodCoefficients&, const MethodCoefficients&) = default;
};

struct ErrorCoefficients {
  double alpha = 0.0;  ///< multiplies [A,[A,B]]
  double beta = 0.0;   ///< multiplies [B,[A,B]]
};

/// Leading error coefficients: alpha = ab - a^2 b - 1/12, beta = ab^2 - 1/24.
ErrorCoefficients error_coefficients(MethodCoefficients c);

/// Left-hand sides of the special curves of the (a,b) plane. A point is on a
/// curve when the residual is within the caller's tolerance.
struct CurveResiduals {
  double effective4 = 0.0;  ///< ab(a+b-1) + 1/24        (alpha == beta)
  double energy = 0.0;      ///< ab^2 - a^2 b + ab - 1/8  (alpha == -beta)
  double hyperbola = 0.0;   ///< a + b - 6ab
  double quartic = 0.0;     ///< -12a^2b^2 + 8a^2b + 8ab^2 - 6ab + 1/4
};

CurveResiduals curve_residuals(MethodCoefficients c);

/// Tolerance under which alpha and beta count as equal.
inline constexpr double kLambdaTolerance = 1e-12;

struct MethodDescriptor {
  std::string name;
  MethodCoefficients coeffs;
  double alpha = 0.0;
  double beta = 0.0;
  /// Processing parameter; present only when alpha == beta.
  std::optional<double> lambda;
  std::string description;
};

/// Builds a descriptor, deriving alpha, beta and lambda from the coefficients.
MethodDescriptor describe(std::string name, MethodCoefficients c, std::string description = {});

/// Registered names: Strang, Yoshida, LoSaSk, PrEtAl, BlCaSa, Verlet1Stage.
std::span<const std::string_view> method_names();

/// Looks up a named method (case-insensitive). Throws UnknownName.
MethodDescriptor named_method(std::string_view name);

/// The Yoshida/LoSaSk abscissa (1 - 2^{1/3} - 2^{-1/3}) / 6.
double yoshida_root();

enum class DegeneracyKind {
  ThreeStage,
  StrangEquivalent_aZero,
  StrangEquivalent_bZero,
  TwoStage_aHalf,
  TwoStage_bHalf,
  PositionVerlet_bothHalf,
  TripleStrang,
  DoubleStrang,
  DoublePositionVerlet,
};

std::string_view to_string(DegeneracyKind kind);

inline constexpr double kDegeneracyTolerance = 1e-12;

/// Identifies parameter values for which the method has fewer than three stages
/// or reproduces a one-stage method with a shorter step.
DegeneracyKind classify_degeneracy(MethodCoefficients c, double tol = kDegeneracyTolerance);

struct StageIncrements {
  /// (1/2-b, a, b, 1-2a, b, a, 1/2-b), as fractions of h; B-flows at even indices.
  std::array<double, 7> fractions{};
  /// True iff 0 < a < 1/2 and 0 < b < 1/2.
  bool all_positive = false;
};

StageIncrements stage_increments(MethodCoefficients c);

nlohmann::json to_json(const MethodDescriptor& m);

}  // namespace splitting
