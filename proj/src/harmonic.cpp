#include "splitting/harmonic.hpp"

#include <cmath>
#include <string>

#include "splitting/errors.hpp"

namespace splitting {

Mat2 rotation_exact(double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {c, s, -s, c};
}

HarmonicAnalysis analyze(MethodCoefficients c, double h, Role role, double omega) {
  const Mat2 m = amplification_matrix(c, omega * h, role);
  const double a = 0.5 * m.trace();
  if (!(std::abs(a) < 1.0)) {
    throw Unstable("|A_h| = " + std::to_string(std::abs(a)) + " >= 1 at h = " + std::to_string(h));
  }
  HarmonicAnalysis r;
  r.theta = std::acos(a);
  r.xi = m.m01 / std::sin(r.theta);
  r.valid = true;
  return r;
}

Mat2 n_step_matrix(MethodCoefficients c, double h, unsigned n, Role role, double omega) {
  const HarmonicAnalysis r = analyze(c, h, role, omega);
  const double cn = std::cos(n * r.theta);
  const double sn = std::sin(n * r.theta);
  return {cn, r.xi * sn, -sn / r.xi, cn};
}

double modified_hamiltonian(MethodCoefficients c, double h, double q, double p, Role role) {
  const HarmonicAnalysis r = analyze(c, h, role);
  return 0.5 * (r.theta / h) * (r.xi * p * p + q * q / r.xi);
}

double energy_error_step(MethodCoefficients c, double h, double q, double p, Role role) {
  const auto [q1, p1] = amplification_matrix(c, h, role).apply(q, p);
  // Difference of squares keeps the O(h^5) increments above round-off.
  return 0.5 * ((q1 - q) * (q1 + q) + (p1 - p) * (p1 + p));
}

}  // namespace splitting
