/**
 * @file processing.hpp
 * @brief Pre/post-processing for methods of effective order four.
 *
 * The processor is the h-flow of dx/dt = h lambda [A,B], replaced by its Euler
 * approximation: chi_h(x) = x + h^2 lambda [A,B](x) and
 * chi_h^{-1}(X) = X - h^2 lambda [A,B](X). For a method with alpha == beta and
 * lambda = alpha the processed map chi_h^{-1} psi_h chi_h has order four.
 *
 * The Euler maps are neither exactly symplectic nor reversible; the processed
 * integrator must not be used where exact reversibility is required (HMC).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "splitting/integrator.hpp"

namespace splitting {

struct Processor {
  double lambda = 0.0;

  /// Throws EffectiveOrderViolation unless the method has alpha == beta.
  static Processor from(const MethodDescriptor& m) {
    if (!m.lambda) {
      throw EffectiveOrderViolation("method '" + m.name + "' has alpha != beta; it cannot be processed");
    }
    return Processor{*m.lambda};
  }
};

namespace detail {

template <class State>
const std::function<State(const State&)>& commutator_of(const SplitSystem<State>& sys) {
  if (!sys.commutator) throw MissingCommutator("split system provides no commutator [A,B]");
  return sys.commutator;
}

}  // namespace detail

template <class State>
State preprocess(const Processor& proc, const SplitSystem<State>& sys, double h, State x) {
  const auto& comm = detail::commutator_of(sys);
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  const State c = comm(x);
  add_scaled(x, h * h * proc.lambda, c);
  return x;
}

template <class State>
State postprocess(const Processor& proc, const SplitSystem<State>& sys, double h, State x) {
  const auto& comm = detail::commutator_of(sys);
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  const State c = comm(x);
  add_scaled(x, -h * h * proc.lambda, c);
  return x;
}

/// Preprocesses x0 once, runs the raw method for n steps and postprocesses the
/// raw state at each requested step index (0..n). Outputs follow the sorted
/// order of the indices. Cost: 1 + |output_indices| commutator evaluations.
template <class State>
std::vector<State> processed_trajectory(const Processor& proc, MethodCoefficients c,
                                        const SplitSystem<State>& sys, double h, std::size_t n, State x0,
                                        std::span<const std::size_t> output_indices) {
  const auto [alpha, beta] = error_coefficients(c);
  if (std::abs(alpha - beta) >= kLambdaTolerance) {
    throw EffectiveOrderViolation("processing requires alpha == beta");
  }
  std::vector<std::size_t> wanted(output_indices.begin(), output_indices.end());
  std::ranges::sort(wanted);
  if (!wanted.empty() && wanted.back() > n) throw std::out_of_range("output index beyond the last step");

  const StageList stages = compile_stages(c);
  State x = preprocess(proc, sys, h, std::move(x0));
  std::vector<State> out;
  out.reserve(wanted.size());
  std::size_t done = 0;
  for (std::size_t idx : wanted) {
    for (; done < idx; ++done) apply_stages(stages, sys, h, x);
    out.push_back(postprocess(proc, sys, h, x));
  }
  return out;
}

/// One step of the processed map chi^{-1} psi chi.
template <class State>
State processed_step(const Processor& proc, MethodCoefficients c, const SplitSystem<State>& sys, double h,
                     State x) {
  x = preprocess(proc, sys, h, std::move(x));
  apply_stages(compile_stages(c), sys, h, x);
  return postprocess(proc, sys, h, std::move(x));
}

}  // namespace splitting
