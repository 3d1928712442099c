#include "splitting/hmc.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "splitting/errors.hpp"

namespace splitting {

Target gaussian_target(std::size_t d, std::vector<double> omegas) {
  if (d == 0) throw std::invalid_argument("gaussian target needs d >= 1");
  if (omegas.empty()) omegas.assign(d, 1.0);
  if (omegas.size() != d) throw std::invalid_argument("gaussian spectrum length must equal d");
  Target t;
  t.name = "gaussian(" + std::to_string(d) + ")";
  t.dimension = d;
  std::vector<double> w2(d);
  std::ranges::transform(omegas, w2.begin(), [](double w) { return w * w; });
  t.potential = [w2](std::span<const double> q) {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) v += 0.5 * w2[i] * q[i] * q[i];
    return v;
  };
  t.gradient = [w2](std::span<const double> q, std::span<double> g) {
    for (std::size_t i = 0; i < q.size(); ++i) g[i] = w2[i] * q[i];
  };
  t.mass.assign(d, 1.0);
  t.initial.assign(d, 0.0);
  return t;
}

std::vector<double> spread_spectrum(std::size_t d) {
  std::vector<double> w(d, 1.0);
  for (std::size_t i = 0; d > 1 && i < d; ++i) {
    w[i] = std::pow(10.0, -1.0 + static_cast<double>(i) / static_cast<double>(d - 1));
  }
  return w;
}

Target double_well_target() {
  Target t;
  t.name = "double_well_1d";
  t.dimension = 1;
  t.potential = [](std::span<const double> q) {
    const double s = q[0] * q[0] - 1.0;
    return s * s;
  };
  t.gradient = [](std::span<const double> q, std::span<double> g) { g[0] = 4.0 * q[0] * (q[0] * q[0] - 1.0); };
  t.mass = {1.0};
  t.initial = {1.0};
  return t;
}

Target quartic_chain_target(std::size_t d) {
  if (d == 0) throw std::invalid_argument("quartic chain needs d >= 1");
  Target t;
  t.name = "quartic_chain(" + std::to_string(d) + ")";
  t.dimension = d;
  t.potential = [](std::span<const double> q) {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double q2 = q[i] * q[i];
      v += 0.25 * q2 * q2;
      if (i + 1 < q.size()) {
        const double s = q[i + 1] - q[i];
        v += 0.5 * s * s;
      }
    }
    return v;
  };
  t.gradient = [](std::span<const double> q, std::span<double> g) {
    const std::size_t n = q.size();
    for (std::size_t i = 0; i < n; ++i) {
      double gi = q[i] * q[i] * q[i];
      if (i > 0) gi += q[i] - q[i - 1];
      if (i + 1 < n) gi -= q[i + 1] - q[i];
      g[i] = gi;
    }
  };
  t.mass.assign(d, 1.0);
  t.initial.assign(d, 0.0);
  return t;
}

namespace {

std::size_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    throw UnknownName("bad dimension '" + s + "'");
  }
  if (pos != s.size() || v == 0) throw UnknownName("bad dimension '" + s + "'");
  return v;
}

}  // namespace

Target builtin_target(std::string_view spec) {
  std::string s;
  for (char c : spec) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  std::string name = s;
  std::vector<std::string> args;
  if (const auto open = s.find('('); open != std::string::npos) {
    if (s.back() != ')') throw UnknownName("malformed target '" + std::string(spec) + "'");
    name = s.substr(0, open);
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    std::size_t start = 0;
    while (start <= inner.size()) {
      const auto comma = inner.find(',', start);
      args.push_back(inner.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (name == "gaussian" && (args.size() == 1 || args.size() == 2)) {
    const std::size_t d = parse_count(args[0]);
    const std::string kind = args.size() == 2 ? args[1] : "spread";
    if (kind == "spread") {
      Target t = gaussian_target(d, spread_spectrum(d));
      t.name = "gaussian(" + std::to_string(d) + ",spread)";
      return t;
    }
    if (kind == "unit") {
      Target t = gaussian_target(d, {});
      t.name = "gaussian(" + std::to_string(d) + ",unit)";
      return t;
    }
  }
  if ((name == "double_well_1d" || name == "double_well") && args.empty()) return double_well_target();
  if (name == "quartic_chain" && args.size() == 1) return quartic_chain_target(parse_count(args[0]));
  throw UnknownName("unknown target '" + std::string(spec) + "'");
}

void ChainConfig::validate() const {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (steps_per_trajectory == 0 || n_chains == 0 || burn_in == 0 || samples == 0) {
    throw std::invalid_argument("chain counts must be at least 1");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
}

ChainConfig chain_config_from_json(const nlohmann::json& j, ChainConfig base) {
  base.h = j.value("h", base.h);
  base.steps_per_trajectory = j.value("steps_per_trajectory", base.steps_per_trajectory);
  base.n_chains = j.value("n_chains", base.n_chains);
  base.burn_in = j.value("burn_in", base.burn_in);
  base.samples = j.value("samples", base.samples);
  base.beta = j.value("beta", base.beta);
  base.seed = j.value("seed", base.seed);
  base.thin = j.value("thin", base.thin);
  if (j.contains("role")) base.role = parse_role(j.at("role").get<std::string>());
  base.validate();
  return base;
}

double hamiltonian(const Target& t, const PhaseState& x) {
  const std::size_t d = t.dimension;
  double kin = 0.0;
  for (std::size_t i = 0; i < d; ++i) kin += 0.5 * x[d + i] * x[d + i] / t.mass[i];
  return t.potential(std::span<const double>(x.data(), d)) + kin;
}

SplitSystem<PhaseState> make_newton_system(const Target& t, Role role, std::size_t* counter) {
  const std::size_t d = t.dimension;
  auto drift = [&t, d](double s, PhaseState& x) {
    for (std::size_t i = 0; i < d; ++i) x[i] += s * x[d + i] / t.mass[i];
  };
  auto kick = [&t, d, counter, g = std::vector<double>(d)](double s, PhaseState& x) mutable {
    t.gradient(std::span<const double>(x.data(), d), g);
    if (counter != nullptr) ++*counter;
    for (std::size_t i = 0; i < d; ++i) x[d + i] -= s * g[i];
  };
  SplitSystem<PhaseState> sys;
  if (role == Role::TAsA) {
    sys.flow_a = drift;
    sys.flow_b = kick;
  } else {
    sys.flow_a = kick;
    sys.flow_b = drift;
  }
  return sys;
}

TrajectoryResult integrate_trajectory(const Target& t, MethodCoefficients c, const ChainConfig& cfg,
                                      const PhaseState& start) {
  if (cfg.processing) {
    throw ProcessedIntegratorForbidden("processed integrators are not reversible and cannot drive HMC");
  }
  TrajectoryResult r;
  const auto sys = make_newton_system(t, cfg.role, &r.gradient_calls);
  r.end = start;
  advance(c, sys, cfg.h, cfg.steps_per_trajectory, r.end, true);
  const double h0 = hamiltonian(t, start);
  const double h1 = hamiltonian(t, r.end);
  if (!std::isfinite(h0) || !std::isfinite(h1)) throw NonFiniteEnergy("non-finite energy along the trajectory");
  r.delta = h1 - h0;
  return r;
}

StepResult hmc_step(const Target& t, MethodCoefficients c, const ChainConfig& cfg, std::vector<double>& q,
                    std::mt19937_64& rng) {
  if (cfg.processing) {
    throw ProcessedIntegratorForbidden("processed integrators are not reversible and cannot drive HMC");
  }
  const std::size_t d = t.dimension;
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  PhaseState x(2 * d);
  std::ranges::copy(q, x.begin());
  for (std::size_t i = 0; i < d; ++i) x[d + i] = std::sqrt(t.mass[i] / cfg.beta) * normal(rng);
  const double u = uniform(rng);

  const TrajectoryResult traj = integrate_trajectory(t, c, cfg, x);
  StepResult r;
  r.delta = traj.delta;
  r.gradient_calls = traj.gradient_calls;
  r.accepted = traj.delta <= 0.0 || u < std::exp(-cfg.beta * traj.delta);
  if (r.accepted) std::copy_n(traj.end.begin(), d, q.begin());
  return r;
}

std::mt19937_64 chain_rng(std::uint64_t seed, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32U)};
  return std::mt19937_64(seq);
}

ChainResult run_chain(const Target& t, MethodCoefficients c, const ChainConfig& cfg, std::size_t index) {
  cfg.validate();
  auto rng = chain_rng(cfg.seed, index);
  std::vector<double> q = t.initial;
  ChainResult r;
  for (std::size_t k = 0; k < cfg.burn_in; ++k) r.gradient_calls += hmc_step(t, c, cfg, q, rng).gradient_calls;
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const StepResult s = hmc_step(t, c, cfg, q, rng);
    r.gradient_calls += s.gradient_calls;
    if (s.accepted) ++r.accepted;
    if (cfg.thin > 0 && (k + 1) % cfg.thin == 0) r.samples.insert(r.samples.end(), q.begin(), q.end());
  }
  r.acceptance = static_cast<double>(r.accepted) / static_cast<double>(cfg.samples);
  return r;
}

ChainStats run_chains(const Target& t, MethodCoefficients c, const ChainConfig& cfg) {
  cfg.validate();
  if (cfg.processing) {
    throw ProcessedIntegratorForbidden("processed integrators are not reversible and cannot drive HMC");
  }
  ChainStats stats;
  stats.chains.resize(cfg.n_chains);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.n_chains; i = next++) {
      try {
        stats.chains[i] = run_chain(t, c, cfg, i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, cfg.n_chains);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  for (const ChainResult& r : stats.chains) {
    stats.per_chain.push_back(r.acceptance);
    stats.gradient_calls += r.gradient_calls;
  }
  const double n = static_cast<double>(stats.per_chain.size());
  stats.acceptance_mean = std::accumulate(stats.per_chain.begin(), stats.per_chain.end(), 0.0) / n;
  if (stats.per_chain.size() > 1) {
    double ss = 0.0;
    for (double a : stats.per_chain) ss += (a - stats.acceptance_mean) * (a - stats.acceptance_mean);
    stats.acceptance_std = std::sqrt(ss / (n - 1.0));
  }
  return stats;
}

nlohmann::json to_json(const ChainStats& s, std::string_view method, double h) {
  return {{"method", method},
          {"h", h},
          {"acceptance_mean", s.acceptance_mean},
          {"acceptance_std", s.acceptance_std},
          {"per_chain", s.per_chain},
          {"target_acceptance", kTargetAcceptance},
          {"near_target", std::abs(s.acceptance_mean - kTargetAcceptance) <= 0.1}};
}

}  // namespace splitting
