#include "splitting/methods.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "splitting/errors.hpp"

namespace splitting {

ErrorCoefficients error_coefficients(MethodCoefficients c) {
  const double a = c.a;
  const double b = c.b;
  return {a * b - a * a * b - 1.0 / 12.0, a * b * b - 1.0 / 24.0};
}

CurveResiduals curve_residuals(MethodCoefficients c) {
  const double a = c.a;
  const double b = c.b;
  const double ab = a * b;
  return {
      ab * (a + b - 1.0) + 1.0 / 24.0,
      ab * b - a * ab + ab - 1.0 / 8.0,
      a + b - 6.0 * ab,
      -12.0 * ab * ab + 8.0 * a * ab + 8.0 * ab * b - 6.0 * ab + 0.25,
  };
}

MethodDescriptor describe(std::string name, MethodCoefficients c, std::string description) {
  MethodDescriptor m;
  m.name = std::move(name);
  m.coeffs = c;
  const auto [alpha, beta] = error_coefficients(c);
  m.alpha = alpha;
  m.beta = beta;
  if (std::abs(alpha - beta) < kLambdaTolerance) m.lambda = alpha;
  m.description = std::move(description);
  return m;
}

double yoshida_root() {
  const double c = std::cbrt(2.0);
  return (1.0 - c - 1.0 / c) / 6.0;
}

namespace {

constexpr std::array<std::string_view, 6> kNames = {
    "Strang", "Yoshida", "LoSaSk", "PrEtAl", "BlCaSa", "Verlet1Stage"};

// Point of the hyperbola a + b = 6ab with b = s.
MethodCoefficients on_hyperbola(double s) { return {s / (6.0 * s - 1.0), s}; }

// Intersection of the hyperbola with the enhanced-energy curve near b = 0.391.
MethodCoefficients hyperbola_energy_intersection() {
  auto residual = [](double s) { return curve_residuals(on_hyperbola(s)).energy; };
  double lo = 0.385;
  double hi = 0.400;
  double flo = residual(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = residual(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return on_hyperbola(0.5 * (lo + hi));
}

bool iequals(std::string_view x, std::string_view y) {
  return std::ranges::equal(x, y, [](char p, char q) {
    return std::tolower(static_cast<unsigned char>(p)) == std::tolower(static_cast<unsigned char>(q));
  });
}

}  // namespace

std::span<const std::string_view> method_names() { return kNames; }

MethodDescriptor named_method(std::string_view name) {
  const double y = yoshida_root();
  if (iequals(name, "Strang")) {
    return describe("Strang", {1.0 / 3.0, 1.0 / 3.0}, "Strang splitting with step h/3");
  }
  if (iequals(name, "Yoshida")) {
    return describe("Yoshida", {1.0 - 2.0 * y, y}, "fourth-order triple jump");
  }
  if (iequals(name, "LoSaSk")) {
    return describe("LoSaSk", {y, y}, "effective order four with a = b");
  }
  if (iequals(name, "PrEtAl")) {
    return describe("PrEtAl", hyperbola_energy_intersection(), "hyperbola meets the enhanced-energy curve");
  }
  if (iequals(name, "BlCaSa")) {
    return describe("BlCaSa", on_hyperbola(0.381), "on the hyperbola through b = 0.381");
  }
  if (iequals(name, "Verlet1Stage")) {
    return describe("Verlet1Stage", {0.5, 0.5}, "position Verlet");
  }
  throw UnknownName("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(DegeneracyKind kind) {
  switch (kind) {
    case DegeneracyKind::ThreeStage: return "ThreeStage";
    case DegeneracyKind::StrangEquivalent_aZero: return "StrangEquivalent_aZero";
    case DegeneracyKind::StrangEquivalent_bZero: return "StrangEquivalent_bZero";
    case DegeneracyKind::TwoStage_aHalf: return "TwoStage_aHalf";
    case DegeneracyKind::TwoStage_bHalf: return "TwoStage_bHalf";
    case DegeneracyKind::PositionVerlet_bothHalf: return "PositionVerlet_bothHalf";
    case DegeneracyKind::TripleStrang: return "TripleStrang";
    case DegeneracyKind::DoubleStrang: return "DoubleStrang";
    case DegeneracyKind::DoublePositionVerlet: return "DoublePositionVerlet";
  }
  return "unknown";
}

DegeneracyKind classify_degeneracy(MethodCoefficients c, double tol) {
  auto near = [tol](double x, double target) { return std::abs(x - target) <= tol; };
  // Specific points first: (1/2,1/4) also lies on the line a = 1/2.
  if (near(c.a, 0.0)) return DegeneracyKind::StrangEquivalent_aZero;
  if (near(c.b, 0.0)) return DegeneracyKind::StrangEquivalent_bZero;
  if (near(c.a, 0.5) && near(c.b, 0.5)) return DegeneracyKind::PositionVerlet_bothHalf;
  if (near(c.a, 0.5) && near(c.b, 0.25)) return DegeneracyKind::DoubleStrang;
  if (near(c.a, 0.25) && near(c.b, 0.5)) return DegeneracyKind::DoublePositionVerlet;
  if (near(c.a, 0.5)) return DegeneracyKind::TwoStage_aHalf;
  if (near(c.b, 0.5)) return DegeneracyKind::TwoStage_bHalf;
  if (near(c.a, 1.0 / 3.0) && near(c.b, 1.0 / 3.0)) return DegeneracyKind::TripleStrang;
  return DegeneracyKind::ThreeStage;
}

StageIncrements stage_increments(MethodCoefficients c) {
  StageIncrements s;
  const double outer = 0.5 - c.b;
  s.fractions = {outer, c.a, c.b, 1.0 - 2.0 * c.a, c.b, c.a, outer};
  s.all_positive = c.a > 0.0 && c.a < 0.5 && c.b > 0.0 && c.b < 0.5;
  return s;
}

nlohmann::json to_json(const MethodDescriptor& m) {
  nlohmann::json j = {
      {"name", m.name}, {"a", m.coeffs.a}, {"b", m.coeffs.b},
      {"alpha", m.alpha}, {"beta", m.beta},
  };
  if (m.lambda) j["lambda"] = *m.lambda;
  if (!m.description.empty()) j["description"] = m.description;
  return j;
}

}  // namespace splitting
