// Command-line front end: every harness as a subcommand emitting CSV or JSON.
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage or invalid request, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitting/errors.hpp"
#include "splitting/harmonic.hpp"
#include "splitting/hmc.hpp"
#include "splitting/methods.hpp"
#include "splitting/nls.hpp"
#include "splitting/stability.hpp"

namespace fs = std::filesystem;
using namespace splitting;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --out wins; otherwise $SPLITTING_OUTPUT_DIR/<fallback>; otherwise stdout.
void emit(const std::string& out, const std::string& fallback, const std::string& payload) {
  fs::path path;
  if (!out.empty() && out != "-") {
    path = out;
  } else if (const char* dir = std::getenv("SPLITTING_OUTPUT_DIR"); out.empty() && dir != nullptr && *dir != '\0') {
    path = fs::path(dir) / fallback;
  } else {
    std::cout << payload;
    return;
  }
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << payload;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("invalid JSON in '" + path + "': " + e.what());
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Range parse_range(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw std::invalid_argument(std::string(flag) + " expects LO,HI");
  return {v[0], v[1]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-stage splitting integrators: stability, accuracy and sampling harnesses"};
  app.require_subcommand(1);
  std::string out;

  auto* methods_cmd = app.add_subcommand("methods-list", "Registry of named methods as JSON");
  methods_cmd->add_option("--out", out, "Output file (default stdout)");

  double a = 0.0;
  double b = 0.0;
  auto* stab_cmd = app.add_subcommand("stability", "Stability report for one (a,b) as JSON");
  stab_cmd->add_option("--a", a, "Coefficient a")->required();
  stab_cmd->add_option("--b", b, "Coefficient b")->required();
  stab_cmd->add_option("--out", out, "Output file (default stdout)");

  std::vector<double> a_range{-0.5, 1.5};
  std::vector<double> b_range{-0.5, 1.5};
  int res = 201;
  auto* map_cmd = app.add_subcommand("stability-map", "h_max, region and curve residuals over a grid as CSV");
  map_cmd->add_option("--a-range", a_range, "LO,HI for a")->delimiter(',')->capture_default_str();
  map_cmd->add_option("--b-range", b_range, "LO,HI for b")->delimiter(',')->capture_default_str();
  map_cmd->add_option("--res", res, "Points per axis (>= 2)")->capture_default_str();
  map_cmd->add_option("--out", out, "Output file (default stdout)");

  std::string method = "Strang";
  std::vector<double> h_list;
  std::string role_name;
  double probe_q = 0.6;
  double probe_p = 0.8;
  int ah_samples = 0;
  double z_max = 60.0;
  auto* sweep_cmd = app.add_subcommand("harmonic-sweep", "theta/h, xi and one-step energy error per h as CSV");
  sweep_cmd->add_option("--method", method, "Named method")->capture_default_str();
  sweep_cmd->add_option("--a", a, "Coefficient a (with --b, overrides --method)");
  sweep_cmd->add_option("--b", b, "Coefficient b");
  sweep_cmd->add_option("--h-list", h_list, "Step sizes (default 0.2,0.1,0.05,0.025)")->delimiter(',');
  sweep_cmd->add_option("--role", role_name, "T-as-A (default) or T-as-B");
  sweep_cmd->add_option("--q", probe_q, "Probe position for the energy error")->capture_default_str();
  sweep_cmd->add_option("--p", probe_p, "Probe momentum for the energy error")->capture_default_str();
  sweep_cmd->add_option("--ah-samples", ah_samples, "Instead emit z,A_h at this many points of [0, z-max]");
  sweep_cmd->add_option("--z-max", z_max, "Upper end of the A_h sampling")->capture_default_str();
  sweep_cmd->add_option("--out", out, "Output file (default stdout)");

  std::string problem_name = "breather";
  std::string disc_name = "spectral";
  std::vector<std::string> method_runs;
  std::size_t nodes = 0;
  std::string config_path;
  auto* nls_cmd = app.add_subcommand("nls-converge", "Error at the final time versus h for the cubic NLS as CSV");
  nls_cmd->add_option("--problem", problem_name, "breather or soliton")->capture_default_str();
  nls_cmd->add_option("--disc", disc_name, "spectral or fd")->capture_default_str();
  nls_cmd->add_option("--role", role_name, "T-as-A (default) or T-as-B");
  nls_cmd->add_option("--methods", method_runs, "Methods; suffix :processed to process")->delimiter(',');
  nls_cmd->add_option("--h-list", h_list, "Step sizes (default depends on --disc)")->delimiter(',');
  nls_cmd->add_option("--nodes", nodes, "Grid nodes (default 512 spectral, 2048 fd)");
  nls_cmd->add_option("--config", config_path, "JSON {problem, grid, role, methods[], h[]}; flags override");
  nls_cmd->add_option("--out", out, "Output file (default stdout)");

  std::string target_name = "gaussian(27)";
  ChainConfig chain;
  double h = chain.h;
  std::size_t steps = chain.steps_per_trajectory;
  std::size_t chains = chain.n_chains;
  std::size_t burn_in = chain.burn_in;
  std::size_t samples = chain.samples;
  std::uint64_t seed = chain.seed;
  auto* hmc_cmd = app.add_subcommand("hmc-run", "Acceptance statistics of HMC chains as JSON");
  hmc_cmd->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  hmc_cmd->add_option("--target", target_name, "gaussian(d[,spread|unit]), double_well_1d, quartic_chain(d)")
      ->capture_default_str();
  hmc_cmd->add_option("--method", method, "Named method; suffix :processed is refused")->capture_default_str();
  auto* h_opt = hmc_cmd->add_option("--h", h, "Step size")->capture_default_str();
  auto* steps_opt = hmc_cmd->add_option("--steps", steps, "Steps per trajectory")->capture_default_str();
  auto* chains_opt = hmc_cmd->add_option("--chains", chains, "Number of chains")->capture_default_str();
  auto* burn_opt = hmc_cmd->add_option("--burn-in", burn_in, "Burn-in proposals per chain")->capture_default_str();
  auto* samples_opt = hmc_cmd->add_option("--samples", samples, "Production proposals per chain")->capture_default_str();
  auto* seed_opt = hmc_cmd->add_option("--seed", seed, "Seed")->capture_default_str();
  hmc_cmd->add_option("--role", role_name, "T-as-B (default) or T-as-A");
  hmc_cmd->add_option("--config", config_path, "JSON mirroring the chain configuration; flags override");
  hmc_cmd->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*methods_cmd) {
      nlohmann::json list = nlohmann::json::array();
      for (auto name : method_names()) {
        const MethodDescriptor m = named_method(name);
        nlohmann::json j = to_json(m);
        j["h_max"] = stability_interval(m.coeffs).h_max;
        list.push_back(j);
      }
      emit(out, "methods.json", dump(list));
    } else if (*stab_cmd) {
      emit(out, "stability.json", dump(to_json(stability_interval({a, b}))));
    } else if (*map_cmd) {
      const auto rows = stability_map(parse_range(a_range, "--a-range"), parse_range(b_range, "--b-range"), res, res);
      std::ostringstream os;
      write_stability_csv(os, rows);
      emit(out, "stability_map.csv", os.str());
    } else if (*sweep_cmd) {
      MethodCoefficients c = named_method(method).coeffs;
      if (sweep_cmd->count("--a") + sweep_cmd->count("--b") == 2) {
        c = {a, b};
      } else if (sweep_cmd->count("--a") + sweep_cmd->count("--b") == 1) {
        throw std::invalid_argument("--a and --b must be given together");
      }
      const Role role = role_name.empty() ? Role::TAsA : parse_role(role_name);
      std::ostringstream os;
      os.precision(12);
      if (ah_samples > 0) {
        if (ah_samples < 2) throw std::invalid_argument("--ah-samples needs at least 2 points");
        os << "z,A_h\n";
        for (int i = 0; i < ah_samples; ++i) {
          const double z = z_max * i / (ah_samples - 1);
          os << z << ',' << ah_closed(c, z) << '\n';
        }
        emit(out, "ah_curve.csv", os.str());
      } else {
        if (h_list.empty()) h_list = {0.2, 0.1, 0.05, 0.025};
        os << "h,theta_over_h,xi,delta\n";
        for (double hv : h_list) {
          if (!(hv > 0.0)) throw std::invalid_argument("step sizes must be positive");
          const double delta = energy_error_step(c, hv, probe_q, probe_p, role);
          const double cos_theta = 0.5 * amplification_matrix(c, hv, role).trace();
          if (std::abs(cos_theta) < 1.0) {
            const HarmonicAnalysis r = analyze(c, hv, role);
            os << hv << ',' << r.theta / hv << ',' << r.xi << ',' << delta << '\n';
          } else {
            os << hv << ",nan,nan," << delta << '\n';
          }
        }
        emit(out, "harmonic_sweep.csv", os.str());
      }
    } else if (*nls_cmd) {
      nlohmann::json j = config_path.empty() ? nlohmann::json::object() : read_json_file(config_path);
      if (nls_cmd->count("--problem") || !j.contains("problem")) j["problem"] = problem_name;
      if (nls_cmd->count("--disc") || !j.contains("grid") || !j["grid"].contains("discretization")) {
        j["grid"]["discretization"] = std::string(to_string(parse_discretization(disc_name)));
      }
      if (nodes > 0) j["grid"]["nodes"] = nodes;
      if (!role_name.empty()) j["role"] = role_name;
      if (!method_runs.empty()) j["methods"] = method_runs;
      if (!h_list.empty()) j["h"] = h_list;
      const NlsRunConfig cfg = nls_config_from_json(j);
      const auto rows = run_config(cfg);
      std::ostringstream os;
      write_convergence_csv(os, rows);
      emit(out, "nls_convergence.csv", os.str());
      for (const auto& r : rows) {
        if (r.unstable) std::cerr << "warning: " << r.method << " unstable at h=" << r.h << '\n';
        if (r.shortened) std::cerr << "note: h=" << r.h << " does not divide T; last step shortened\n";
      }
    } else if (*hmc_cmd) {
      if (!config_path.empty()) chain = chain_config_from_json(read_json_file(config_path), chain);
      if (h_opt->count()) chain.h = h;
      if (steps_opt->count()) chain.steps_per_trajectory = steps;
      if (chains_opt->count()) chain.n_chains = chains;
      if (burn_opt->count()) chain.burn_in = burn_in;
      if (samples_opt->count()) chain.samples = samples;
      if (seed_opt->count()) chain.seed = seed;
      if (!role_name.empty()) chain.role = parse_role(role_name);
      chain.validate();
      const MethodRun run = parse_method_run(method);
      chain.processing = run.processing;
      const Target target = builtin_target(target_name);
      const ChainStats stats = run_chains(target, named_method(run.name).coeffs, chain);
      nlohmann::json j = to_json(stats, run.name, chain.h);
      j["target"] = target.name;
      j["steps_per_trajectory"] = chain.steps_per_trajectory;
      j["role"] = std::string(to_string(chain.role));
      j["seed"] = chain.seed;
      emit(out, "hmc.json", dump(j));
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Unstable& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NonFiniteEnergy& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
