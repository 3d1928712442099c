/**
 * @file hmc.hpp
 * @brief Hybrid Monte Carlo with members of the family as proposal dynamics.
 *
 * A proposal draws p ~ N(0, M/beta), integrates Newton's equations with a
 * splitting method and accepts with probability min(1, exp(-beta * Delta)),
 * Delta = H(proposal) - H(current). Only exactly reversible, volume-preserving
 * maps are admitted, so processed integrators are refused.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "splitting/integrator.hpp"
#include "splitting/methods.hpp"

namespace splitting {

struct Target {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> potential;
  /// Writes grad V(q) into the second argument.
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::vector<double> mass;     ///< diagonal of M
  std::vector<double> initial;  ///< starting q of every chain
};

/// V = sum_i w_i^2 q_i^2 / 2 with unit masses.
Target gaussian_target(std::size_t d, std::vector<double> omegas);
/// d frequencies spaced geometrically from 0.1 to 1.
std::vector<double> spread_spectrum(std::size_t d);
/// V = (q^2 - 1)^2
Target double_well_target();
/// V = sum_i (q_{i+1} - q_i)^2 / 2 + sum_i q_i^4 / 4
Target quartic_chain_target(std::size_t d);

/// "gaussian(d)", "gaussian(d,spread)", "gaussian(d,unit)", "double_well_1d",
/// "quartic_chain(d)". Throws UnknownName otherwise.
Target builtin_target(std::string_view spec);

struct ChainConfig {
  double h = 0.06;
  std::size_t steps_per_trajectory = 8;
  std::size_t n_chains = 20;
  std::size_t burn_in = 200;
  std::size_t samples = 1000;
  double beta = 1.0;
  std::uint64_t seed = 20240101;
  Role role = Role::TAsB;  ///< kinetic energy as system B
  /// Record q every `thin` production proposals (0 records nothing).
  std::size_t thin = 0;
  /// A processed integrator was requested; always refused.
  bool processing = false;

  /// Throws std::invalid_argument when a count is zero or h <= 0.
  void validate() const;
};

ChainConfig chain_config_from_json(const nlohmann::json& j, ChainConfig base = {});

/// State layout [q_0..q_{d-1}, p_0..p_{d-1}].
using PhaseState = std::vector<double>;

double hamiltonian(const Target& t, const PhaseState& x);

/// Newton equations as drift (kinetic) and kick (potential) flows, placed as
/// A/B according to the role. Gradient calls are added to *counter if given.
SplitSystem<PhaseState> make_newton_system(const Target& t, Role role, std::size_t* counter = nullptr);

struct TrajectoryResult {
  PhaseState end;
  double delta = 0.0;  ///< H(end) - H(start)
  std::size_t gradient_calls = 0;
};

/// Integrates one trajectory with stage fusion. Throws NonFiniteEnergy.
TrajectoryResult integrate_trajectory(const Target& t, MethodCoefficients c, const ChainConfig& cfg,
                                      const PhaseState& start);

struct StepResult {
  bool accepted = false;
  double delta = 0.0;
  std::size_t gradient_calls = 0;
};

/// One HMC proposal from q (updated in place when accepted).
StepResult hmc_step(const Target& t, MethodCoefficients c, const ChainConfig& cfg, std::vector<double>& q,
                    std::mt19937_64& rng);

/// Generator of chain `index`: a substream keyed by (seed, index).
std::mt19937_64 chain_rng(std::uint64_t seed, std::size_t index);

struct ChainResult {
  double acceptance = 0.0;
  std::size_t accepted = 0;
  std::size_t gradient_calls = 0;
  std::vector<double> samples;  ///< recorded q, row-major
};

ChainResult run_chain(const Target& t, MethodCoefficients c, const ChainConfig& cfg, std::size_t index);

struct ChainStats {
  double acceptance_mean = 0.0;
  double acceptance_std = 0.0;  ///< sample standard deviation over chains
  std::vector<double> per_chain;
  std::size_t gradient_calls = 0;
  std::vector<ChainResult> chains;
};

/// Runs the chains concurrently; identical for a fixed seed regardless of
/// the number of worker threads.
ChainStats run_chains(const Target& t, MethodCoefficients c, const ChainConfig& cfg);

inline constexpr double kTargetAcceptance = 0.7;

nlohmann::json to_json(const ChainStats& s, std::string_view method, double h);

}  // namespace splitting
