#include "splitting/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace splitting {

double Mat2::max_abs() const {
  return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
}

Mat2 pow(Mat2 m, unsigned n) {
  Mat2 r = Mat2::identity();
  while (n > 0) {
    if (n & 1U) r = m * r;
    m = m * m;
    n >>= 1U;
  }
  return r;
}

Mat2 amplification_matrix(MethodCoefficients c, double h, Role role) {
  const auto inc = stage_increments(c);
  auto drift = [](double t) { return Mat2{1.0, t, 0.0, 1.0}; };
  auto kick = [](double t) { return Mat2{1.0, 0.0, -t, 1.0}; };
  Mat2 m = Mat2::identity();
  for (std::size_t i = 0; i < inc.fractions.size(); ++i) {
    const bool flow_b = i % 2 == 0;
    const bool is_drift = (role == Role::TAsA) != flow_b;
    const double t = inc.fractions[i] * h;
    m = (is_drift ? drift(t) : kick(t)) * m;
  }
  return m;
}

std::array<double, 4> ah_polynomial(MethodCoefficients c) {
  const double a = c.a;
  const double b = c.b;
  return {1.0, -0.5, a * b * (1.0 - a - b), -2.0 * a * a * b * b * (0.5 - a) * (0.5 - b)};
}

double ah_closed(MethodCoefficients c, double z) {
  const auto k = ah_polynomial(c);
  return k[0] + z * (k[1] + z * (k[2] + z * k[3]));
}

double ah_derivative(MethodCoefficients c, double z) {
  const auto k = ah_polynomial(c);
  return k[1] + z * (2.0 * k[2] + z * 3.0 * k[3]);
}

namespace {

struct Cubic {
  std::array<double, 4> k;  // lowest degree first

  double operator()(double z) const { return k[0] + z * (k[1] + z * (k[2] + z * k[3])); }
  double scale(double z) const {
    const double az = std::abs(z);
    return std::abs(k[0]) + az * (std::abs(k[1]) + az * (std::abs(k[2]) + az * std::abs(k[3])));
  }
};

// Real roots of c2 x^2 + c1 x + c0 with a flag for a double root.
struct QuadraticRoots {
  std::vector<double> roots;
  bool double_root = false;
};

QuadraticRoots solve_quadratic(double c2, double c1, double c0) {
  QuadraticRoots out;
  if (c2 == 0.0) {
    if (c1 != 0.0) out.roots.push_back(-c0 / c1);
    return out;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  const double scale = c1 * c1 + 4.0 * std::abs(c2 * c0);
  if (std::abs(disc) <= kTangencyTolerance * scale) {
    out.roots.push_back(-c1 / (2.0 * c2));
    out.double_root = true;
    return out;
  }
  if (disc < 0.0) return out;
  const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
  out.roots.push_back(q / c2);
  if (q != 0.0) out.roots.push_back(c0 / q);
  std::ranges::sort(out.roots);
  return out;
}

double bisect(const Cubic& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// A_h(z) = 1 factors as z (k1 + k2 z + k3 z^2): the consistency root plus a quadratic.
std::vector<LevelRoot> roots_plus_one(const std::array<double, 4>& k) {
  std::vector<LevelRoot> out;
  out.push_back({0.0, 1, RootKind::Crossing, true});
  const auto q = solve_quadratic(k[3], k[2], k[1]);
  for (double z : q.roots) {
    out.push_back({z, 1, q.double_root ? RootKind::Tangency : RootKind::Crossing});
  }
  return out;
}

// A_h(z) = -1: isolate the roots on the monotone pieces between critical points.
std::vector<LevelRoot> roots_minus_one(const std::array<double, 4>& k) {
  const Cubic p{{k[0] + 1.0, k[1], k[2], k[3]}};
  std::vector<LevelRoot> out;

  int degree = 3;
  while (degree > 0 && p.k[degree] == 0.0) --degree;
  if (degree == 0) return out;

  double bound = 0.0;
  for (int i = 0; i < degree; ++i) bound = std::max(bound, std::abs(p.k[i] / p.k[degree]));
  bound += 1.0;

  const auto crit = solve_quadratic(3.0 * p.k[3], 2.0 * p.k[2], p.k[1]);
  std::vector<double> breaks{-bound};
  std::vector<bool> tangent{false};
  for (double zc : crit.roots) {
    if (zc <= breaks.back()) continue;
    const bool touch = std::abs(p(zc)) <= kTangencyTolerance * p.scale(zc);
    breaks.push_back(zc);
    tangent.push_back(touch);
    if (touch) out.push_back({zc, -1, RootKind::Tangency});
  }
  breaks.push_back(std::max(bound, breaks.back() + 1.0));
  tangent.push_back(false);

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (tangent[i] || tangent[i + 1]) continue;
    const double fl = p(breaks[i]);
    const double fr = p(breaks[i + 1]);
    if (fl == 0.0 || fr == 0.0 || (fl < 0.0) == (fr < 0.0)) continue;
    out.push_back({bisect(p, breaks[i], breaks[i + 1]), -1, RootKind::Crossing});
  }
  std::ranges::sort(out, {}, &LevelRoot::z);
  return out;
}

}  // namespace

StabilityReport stability_interval(MethodCoefficients c) {
  StabilityReport rep;
  rep.coeffs = c;
  const auto k = ah_polynomial(c);

  std::vector<LevelRoot> all = roots_plus_one(k);
  const auto minus = roots_minus_one(k);
  all.insert(all.end(), minus.begin(), minus.end());
  std::ranges::sort(all, {}, &LevelRoot::z);

  rep.h_max = std::numeric_limits<double>::infinity();
  bool lost = false;
  for (LevelRoot& r : all) {
    if (r.consistency || r.z <= 0.0) continue;
    if (r.kind == RootKind::Tangency) {
      const Mat2 m = amplification_matrix(c, std::sqrt(r.z));
      const double off = std::max(std::abs(m.m01), std::abs(m.m10));
      r.matrix_is_pm_identity = off <= 1e-6 * (1.0 + r.z);
    } else if (!lost) {
      r.loss = true;
      lost = true;
      rep.h_max = std::sqrt(r.z);
      rep.loss_level = r.level;
      rep.loss_z = r.z;
    }
    (r.level > 0 ? rep.z_roots_plus : rep.z_roots_minus).push_back(r);
  }
  rep.sign_sequence = std::move(all);
  return rep;
}

DiscriminantFactors discriminant_factors(MethodCoefficients c) {
  const auto res = curve_residuals(c);
  DiscriminantFactors d;
  d.ab = c.a * c.b;
  d.hyperbola = res.hyperbola;
  d.quartic = res.quartic;
  d.discriminant = d.ab * d.ab * d.hyperbola * d.hyperbola * d.quartic;
  return d;
}

RegionInfo classify_region(double a, double b, double tol) {
  RegionInfo info;
  auto near = [tol](double x, double t) { return std::abs(x - t) <= tol; };
  info.on_a_zero = near(a, 0.0);
  info.on_a_half = near(a, 0.5);
  info.on_b_zero = near(b, 0.0);
  info.on_b_half = near(b, 0.5);
  info.on_diagonal = near(a, b);
  const double quartic = curve_residuals({a, b}).quartic;
  info.on_quartic = std::abs(quartic) <= tol;
  if (info.on_boundary()) return info;

  if (a < b) {
    std::swap(a, b);
    info.mirrored = true;
  }
  if (a < 0.0) {
    info.region = quartic < 0.0 ? 1 : 2;
  } else if (a < 0.5) {
    info.region = b < 0.0 ? 3 : 6;
  } else if (b < 0.0) {
    info.region = quartic > 0.0 ? 4 : 5;
  } else if (b < 0.5) {
    info.region = 7;
  } else {
    info.region = quartic > 0.0 ? 8 : 9;
  }
  return info;
}

std::vector<MapRow> stability_map(Range a_range, Range b_range, int res_a, int res_b) {
  if (res_a < 2 || res_b < 2) throw std::invalid_argument("stability map needs resolution >= 2 per axis");
  std::vector<MapRow> rows;
  if (a_range.empty() || b_range.empty()) return rows;
  rows.reserve(static_cast<std::size_t>(res_a) * static_cast<std::size_t>(res_b));
  for (int i = 0; i < res_a; ++i) {
    const double a = a_range.lo + (a_range.hi - a_range.lo) * i / (res_a - 1);
    for (int j = 0; j < res_b; ++j) {
      const double b = b_range.lo + (b_range.hi - b_range.lo) * j / (res_b - 1);
      const MethodCoefficients c{a, b};
      rows.push_back({a, b, stability_interval(c).h_max, classify_region(a, b).region, curve_residuals(c)});
    }
  }
  return rows;
}

void write_stability_csv(std::ostream& os, const std::vector<MapRow>& rows) {
  os << kStabilityMapHeader << '\n';
  const auto old = os.precision(12);
  for (const MapRow& r : rows) {
    os << r.a << ',' << r.b << ',' << r.h_max << ',' << r.region << ',' << r.residuals.effective4 << ','
       << r.residuals.energy << ',' << r.residuals.hyperbola << ',' << r.residuals.quartic << '\n';
  }
  os.precision(old);
}

namespace {

nlohmann::json root_json(const LevelRoot& r) {
  nlohmann::json j = {{"z", r.z},
                      {"level", r.level},
                      {"kind", r.kind == RootKind::Tangency ? "tangency" : "crossing"}};
  if (r.consistency) j["consistency"] = true;
  if (r.loss) j["loss"] = true;
  if (r.kind == RootKind::Tangency && r.z > 0.0) j["matrix_is_pm_identity"] = r.matrix_is_pm_identity;
  return j;
}

}  // namespace

nlohmann::json to_json(const StabilityReport& r) {
  nlohmann::json j;
  j["a"] = r.coeffs.a;
  j["b"] = r.coeffs.b;
  j["h_max"] = r.h_max;
  j["loss_level"] = r.loss_level;
  j["loss_z"] = r.loss_z;
  j["z_roots_plus"] = nlohmann::json::array();
  j["z_roots_minus"] = nlohmann::json::array();
  j["sign_sequence"] = nlohmann::json::array();
  for (const auto& x : r.z_roots_plus) j["z_roots_plus"].push_back(root_json(x));
  for (const auto& x : r.z_roots_minus) j["z_roots_minus"].push_back(root_json(x));
  for (const auto& x : r.sign_sequence) j["sign_sequence"].push_back(root_json(x));
  return j;
}

}  // namespace splitting
