/**
 * @file harmonic.hpp
 * @brief Exact finite-h error theory on the unit harmonic oscillator.
 *
 * Inside the stability interval the amplification matrix is written as
 *
 *   [[cos th, xi sin th], [-sin th / xi, cos th]],
 *
 * so the numerical map is a rotation by th on the ellipse
 * xi p^2 + q^2 / xi = const. A mode q'' = -w^2 q is handled by h -> w h.
 */
#pragma once

#include "splitting/methods.hpp"
#include "splitting/stability.hpp"

namespace splitting {

struct HarmonicAnalysis {
  double theta = 0.0;  ///< rotation per step, in (0, pi)
  double xi = 1.0;
  bool valid = false;  ///< |A_h| < 1
};

/// [[cos t, sin t], [-sin t, cos t]]
Mat2 rotation_exact(double t);

/// Throws Unstable when |A_h| >= 1.
HarmonicAnalysis analyze(MethodCoefficients c, double h, Role role = Role::TAsA, double omega = 1.0);

/// M^n in closed form: cos(n th) I + sin(n th) [[0, xi], [-1/xi, 0]].
Mat2 n_step_matrix(MethodCoefficients c, double h, unsigned n, Role role = Role::TAsA, double omega = 1.0);

/// (1/2)(th/h)(xi p^2 + q^2 / xi); constant along numerical trajectories.
double modified_hamiltonian(MethodCoefficients c, double h, double q, double p, Role role = Role::TAsA);

/// H(psi_h(q,p)) - H(q,p) with H = (q^2 + p^2)/2.
double energy_error_step(MethodCoefficients c, double h, double q, double p, Role role = Role::TAsA);

}  // namespace splitting
