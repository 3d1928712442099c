/**
 * @file integrator.hpp
 * @brief Composition of exact split flows into one step of a splitting method.
 *
 * A method is compiled once into a list of (flow, fraction) stages. Stages of
 * zero length are dropped and adjacent stages of the same flow are merged by
 * the group property, so degenerate members of the family run exactly as the
 * lower-stage method they reduce to.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "splitting/errors.hpp"
#include "splitting/methods.hpp"

namespace splitting {

enum class Flow : std::uint8_t { A, B };

struct Stage {
  Flow flow;
  double fraction;  ///< multiple of h

  friend bool operator==(const Stage&, const Stage&) = default;
};

using StageList = std::vector<Stage>;

/// Which split system holds the kinetic (or linear) part: T-as-A assigns it to
/// flow A, T-as-B to flow B.
enum class Role : std::uint8_t { TAsA, TAsB };

inline std::string_view to_string(Role r) { return r == Role::TAsA ? "T-as-A" : "T-as-B"; }

/// Accepts "T-as-A"/"T-as-B" and the short forms "A"/"B", case-insensitively.
inline Role parse_role(std::string_view s) {
  std::string t;
  for (char ch : s) {
    if (ch != '-' && ch != '_') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  if (t == "tasa" || t == "a") return Role::TAsA;
  if (t == "tasb" || t == "b") return Role::TAsB;
  throw UnknownName("unknown role '" + std::string(s) + "'");
}

/// Appends a stage, merging with the previous one when the flows match.
inline void push_stage(StageList& list, Stage s) {
  if (s.fraction == 0.0) return;
  if (!list.empty() && list.back().flow == s.flow) {
    list.back().fraction += s.fraction;
    if (list.back().fraction == 0.0) list.pop_back();
    return;
  }
  list.push_back(s);
}

inline StageList compile_stages(MethodCoefficients c) {
  const auto inc = stage_increments(c);
  StageList list;
  for (std::size_t i = 0; i < inc.fractions.size(); ++i) {
    push_stage(list, {i % 2 == 0 ? Flow::B : Flow::A, inc.fractions[i]});
  }
  return list;
}

/// B(h/2) A(h) B(h/2)
inline StageList strang_stages() { return {{Flow::B, 0.5}, {Flow::A, 1.0}, {Flow::B, 0.5}}; }

/// A(h/2) B(h) A(h/2)
inline StageList position_verlet_stages() { return {{Flow::A, 0.5}, {Flow::B, 1.0}, {Flow::A, 0.5}}; }

/// Pair of exactly solvable flows acting in place on a state.
template <class State>
struct SplitSystem {
  std::function<void(double, State&)> flow_a;
  std::function<void(double, State&)> flow_b;
  /// [A,B](x) = A'(x)B(x) - B'(x)A(x); optional, needed only for processing.
  std::function<State(const State&)> commutator;
  bool negative_time_a = true;
  bool negative_time_b = true;
};

namespace detail {

template <class State>
void check_stages(const StageList& stages, const SplitSystem<State>& sys, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  for (const Stage& s : stages) {
    if (s.fraction >= 0.0) continue;
    const bool ok = s.flow == Flow::A ? sys.negative_time_a : sys.negative_time_b;
    if (!ok) {
      throw NegativeTimeUnsupported(std::string("flow ") + (s.flow == Flow::A ? "A" : "B") +
                                    " cannot be integrated backward in time");
    }
  }
}

template <class State>
void run_flow(const SplitSystem<State>& sys, Flow f, double t, State& x) {
  if (f == Flow::A) {
    sys.flow_a(t, x);
  } else {
    sys.flow_b(t, x);
  }
}

}  // namespace detail

/// Applies one step of the given stage list in place.
template <class State>
void apply_stages(const StageList& stages, const SplitSystem<State>& sys, double h, State& x) {
  detail::check_stages(stages, sys, h);
  for (const Stage& s : stages) detail::run_flow(sys, s.flow, s.fraction * h, x);
}

template <class State>
State step(MethodCoefficients c, const SplitSystem<State>& sys, double h, State x) {
  apply_stages(compile_stages(c), sys, h, x);
  return x;
}

template <class State>
State strang_step(const SplitSystem<State>& sys, double h, State x) {
  apply_stages(strang_stages(), sys, h, x);
  return x;
}

template <class State>
State position_verlet_step(const SplitSystem<State>& sys, double h, State x) {
  apply_stages(position_verlet_stages(), sys, h, x);
  return x;
}

/// Advances n steps in place. With fuse set, the trailing stage of each step
/// is merged with the leading stage of the next when they use the same flow,
/// so a three-stage method costs 3n+1 evaluations of its outer flow.
template <class State>
void advance(const StageList& stages, const SplitSystem<State>& sys, double h, std::size_t n, State& x,
             bool fuse) {
  detail::check_stages(stages, sys, h);
  if (n == 0 || stages.empty()) return;
  const bool can_fuse = fuse && stages.size() >= 2 && stages.front().flow == stages.back().flow;
  if (!can_fuse) {
    for (std::size_t k = 0; k < n; ++k) {
      for (const Stage& s : stages) detail::run_flow(sys, s.flow, s.fraction * h, x);
    }
    return;
  }
  const Stage& first = stages.front();
  const Stage& last = stages.back();
  const double joined = (last.fraction + first.fraction) * h;
  detail::run_flow(sys, first.flow, first.fraction * h, x);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 1; i + 1 < stages.size(); ++i) {
      detail::run_flow(sys, stages[i].flow, stages[i].fraction * h, x);
    }
    if (k + 1 < n) detail::run_flow(sys, first.flow, joined, x);
  }
  detail::run_flow(sys, last.flow, last.fraction * h, x);
}

template <class State>
void advance(MethodCoefficients c, const SplitSystem<State>& sys, double h, std::size_t n, State& x,
             bool fuse) {
  advance(compile_stages(c), sys, h, n, x, fuse);
}

/// Returns x_1..x_n. With fuse set, each output is materialized by applying
/// the pending trailing stage to a copy, so every x_k is a completed step.
template <class State>
std::vector<State> trajectory(MethodCoefficients c, const SplitSystem<State>& sys, double h, std::size_t n,
                              State x0, bool fuse) {
  if (n == 0) throw std::invalid_argument("trajectory needs at least one step");
  const StageList stages = compile_stages(c);
  detail::check_stages(stages, sys, h);
  std::vector<State> out;
  out.reserve(n);
  const bool can_fuse = fuse && stages.size() >= 2 && stages.front().flow == stages.back().flow;
  if (!can_fuse) {
    for (std::size_t k = 0; k < n; ++k) {
      apply_stages(stages, sys, h, x0);
      out.push_back(x0);
    }
    return out;
  }
  const Stage& first = stages.front();
  const Stage& last = stages.back();
  State x = std::move(x0);
  detail::run_flow(sys, first.flow, first.fraction * h, x);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 1; i + 1 < stages.size(); ++i) {
      detail::run_flow(sys, stages[i].flow, stages[i].fraction * h, x);
    }
    State done = x;
    detail::run_flow(sys, last.flow, last.fraction * h, done);
    out.push_back(std::move(done));
    if (k + 1 < n) detail::run_flow(sys, first.flow, (last.fraction + first.fraction) * h, x);
  }
  return out;
}

// Element-wise helpers for vector-like states (std::vector, std::array of real
// or complex scalars).

template <class State>
void add_scaled(State& x, double s, const State& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * y[i];
}

/// max_i |x_i - ref_i| / (1 + |ref_i|)
template <class State>
double scaled_max_error(const State& x, const State& ref) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    e = std::max(e, static_cast<double>(std::abs(x[i] - ref[i])) / (1.0 + std::abs(ref[i])));
  }
  return e;
}

/// Norm of S(phi(S(phi(x)))) - x for an arbitrary one-step map phi.
template <class State, class StepFn, class Involution>
double reversibility_defect(StepFn&& phi, Involution&& s, const State& x) {
  State y = s(phi(x));
  y = s(phi(y));
  return scaled_max_error(y, x);
}

template <class State, class Involution>
double reversibility_check(MethodCoefficients c, const SplitSystem<State>& sys, Involution&& s, double h,
                           const State& x) {
  const StageList stages = compile_stages(c);
  auto phi = [&](State y) {
    apply_stages(stages, sys, h, y);
    return y;
  };
  return reversibility_defect<State>(phi, s, x);
}

}  // namespace splitting
