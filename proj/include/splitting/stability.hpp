/**
 * @file stability.hpp
 * @brief Finite-h stability of the family on the harmonic oscillator.
 *
 * One step maps (q,p) by the amplification matrix [[A_h, B_h], [C_h, A_h]],
 * and A_h is a cubic in z = h^2:
 *
 *   A_h(z) = 1 - z/2 + ab(1-a-b) z^2 - 2 a^2 b^2 (1/2-a)(1/2-b) z^3.
 *
 * Powers of the matrix stay bounded while |A_h| < 1, and at double roots of
 * A_h = +-1 where the matrix is +-I.
 */
#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "splitting/integrator.hpp"
#include "splitting/methods.hpp"

namespace splitting {

/// Row-major 2x2 matrix.
struct Mat2 {
  double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

  static Mat2 identity() { return {}; }
  double trace() const { return m00 + m11; }
  double det() const { return m00 * m11 - m01 * m10; }
  double max_abs() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
            x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
  }
  std::array<double, 2> apply(double q, double p) const { return {m00 * q + m01 * p, m10 * q + m11 * p}; }
};

Mat2 pow(Mat2 m, unsigned n);

/// Product of the seven shear matrices of one step. T-as-A makes A the drift
/// q += t p and B the kick p -= t q; T-as-B swaps them.
Mat2 amplification_matrix(MethodCoefficients c, double h, Role role = Role::TAsA);

/// Coefficients of A_h as a polynomial in z, lowest degree first.
std::array<double, 4> ah_polynomial(MethodCoefficients c);

double ah_closed(MethodCoefficients c, double z);
double ah_derivative(MethodCoefficients c, double z);

enum class RootKind { Crossing, Tangency };

struct LevelRoot {
  double z = 0.0;
  int level = 1;  ///< +1 or -1
  RootKind kind = RootKind::Crossing;
  bool consistency = false;  ///< the root z = 0 of A_h = 1
  bool loss = false;         ///< the root where stability is lost
  /// For tangencies at z > 0: the amplification matrix equals +-I there.
  bool matrix_is_pm_identity = false;
};

struct StabilityReport {
  MethodCoefficients coeffs;
  std::vector<LevelRoot> z_roots_plus;   ///< z > 0 with A_h = 1
  std::vector<LevelRoot> z_roots_minus;  ///< z > 0 with A_h = -1
  /// Every real root of A_h = +-1 in increasing z; tangencies appear once.
  std::vector<LevelRoot> sign_sequence;
  double h_max = 0.0;
  int loss_level = 0;
  double loss_z = 0.0;
};

/// Critical-point threshold below which a touch of A_h = +-1 is a tangency.
inline constexpr double kTangencyTolerance = 1e-10;

StabilityReport stability_interval(MethodCoefficients c);

/// Factors of the discriminant of A_h(z) = -1. `discriminant` is the exact
/// value a^2 b^2 (a+b-6ab)^2 * quartic.
struct DiscriminantFactors {
  double ab = 0.0;
  double hyperbola = 0.0;
  double quartic = 0.0;
  double discriminant = 0.0;
};

DiscriminantFactors discriminant_factors(MethodCoefficients c);

/// Region of the (a,b) plane cut out by the quartic and the lines a,b in
/// {0, 1/2}, numbered 1..9 in the half plane a >= b (mirrored otherwise):
///   1: a,b < 0, quartic < 0           2: a,b < 0, quartic > 0
///   3: 0 < a < 1/2, b < 0             4: a > 1/2, b < 0, quartic > 0
///   5: a > 1/2, b < 0, quartic < 0    6: 0 < b < a < 1/2 (contains Strang)
///   7: a > 1/2, 0 < b < 1/2           8: a,b > 1/2, quartic > 0
///   9: a,b > 1/2, quartic < 0
/// Points on a boundary get region 0 and the matching flag.
struct RegionInfo {
  int region = 0;
  bool mirrored = false;
  bool on_quartic = false;
  bool on_a_zero = false;
  bool on_a_half = false;
  bool on_b_zero = false;
  bool on_b_half = false;
  bool on_diagonal = false;

  bool on_boundary() const { return on_quartic || on_a_zero || on_a_half || on_b_zero || on_b_half; }
};

RegionInfo classify_region(double a, double b, double tol = 1e-12);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return hi < lo; }
};

struct MapRow {
  double a = 0.0;
  double b = 0.0;
  double h_max = 0.0;
  int region = 0;
  CurveResiduals residuals;
};

/// Rasterizes h_max, region and curve residuals over a grid; rows vary b fastest.
std::vector<MapRow> stability_map(Range a_range, Range b_range, int res_a, int res_b);

inline constexpr const char* kStabilityMapHeader = "a,b,h_max,region,eff4_res,energy_res,hyp_res,quartic_res";

void write_stability_csv(std::ostream& os, const std::vector<MapRow>& rows);

nlohmann::json to_json(const StabilityReport& r);

}  // namespace splitting
