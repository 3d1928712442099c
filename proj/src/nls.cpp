#include "splitting/nls.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "fft.hpp"
#include "splitting/errors.hpp"
#include "splitting/processing.hpp"

namespace splitting {

namespace {

using cplx = std::complex<double>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Discretization d) {
  return d == Discretization::Spectral ? "spectral" : "central_difference";
}

Discretization parse_discretization(std::string_view s) {
  const std::string t = lower(s);
  if (t == "spectral" || t == "ps") return Discretization::Spectral;
  if (t == "central_difference" || t == "fd" || t == "central-difference") return Discretization::CentralDifference;
  throw UnknownName("unknown discretization '" + std::string(s) + "'");
}

void GridSpec::validate() const {
  if (nodes < 8) throw std::invalid_argument("grid needs at least 8 nodes");
  if (!(x_right > x_left)) throw std::invalid_argument("grid needs x_right > x_left");
}

void nonlinear_flow(double t, WaveField& u) {
  for (cplx& v : u) v *= std::polar(1.0, t * std::norm(v));
}

NlsOperators::NlsOperators(GridSpec grid) : grid_(grid) {
  grid_.validate();
  const std::size_t n = grid_.nodes;
  const double dx = grid_.dx();
  const double base = 2.0 * std::numbers::pi / grid_.length();
  k_.resize(n);
  lambda_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double m = j < (n + 1) / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
    k_[j] = base * m;
    if (grid_.discretization == Discretization::Spectral) {
      lambda_[j] = k_[j] * k_[j];
    } else {
      const double s = std::sin(0.5 * k_[j] * dx);
      lambda_[j] = 4.0 / (dx * dx) * s * s;
    }
  }
  fft_ = std::make_unique<detail::Fft>(n);
}

NlsOperators::~NlsOperators() = default;

void NlsOperators::dispersion_flow(double t, WaveField& u) const {
  if (u.size() != grid_.nodes) throw std::invalid_argument("field size does not match the grid");
  fft_->forward(u.data());
  const double inv_n = 1.0 / static_cast<double>(grid_.nodes);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(inv_n, -lambda_[j] * t);
  fft_->backward(u.data());
}

WaveField NlsOperators::second_derivative(const WaveField& u) const {
  if (u.size() != grid_.nodes) throw std::invalid_argument("field size does not match the grid");
  WaveField w = u;
  fft_->forward(w.data());
  const double inv_n = 1.0 / static_cast<double>(grid_.nodes);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] *= -lambda_[j] * inv_n;
  fft_->backward(w.data());
  return w;
}

WaveField NlsOperators::commutator_TV(const WaveField& u) const {
  const WaveField uxx = second_derivative(u);
  WaveField ru(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ru[i] = std::norm(u[i]) * u[i];
  const WaveField w = second_derivative(ru);

  WaveField out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double q = u[i].real();
    const double p = u[i].imag();
    const double qxx = uxx[i].real();
    const double pxx = uxx[i].imag();
    const double re = (q * q + 3.0 * p * p) * qxx - 2.0 * q * p * pxx - w[i].real();
    const double im = -2.0 * q * p * qxx + (3.0 * q * q + p * p) * pxx - w[i].imag();
    out[i] = {re, im};
  }
  return out;
}

double NlsOperators::mass(const WaveField& u) const {
  double s = 0.0;
  for (const cplx& v : u) s += std::norm(v);
  return grid_.dx() * s;
}

double NlsOperators::l2_distance(const WaveField& u, const WaveField& v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(u[i] - v[i]);
  return std::sqrt(grid_.dx() * s);
}

SplitSystem<WaveField> make_split_system(std::shared_ptr<const NlsOperators> ops, Role role) {
  auto disp = [ops](double t, WaveField& u) { ops->dispersion_flow(t, u); };
  auto nonlin = [](double t, WaveField& u) { nonlinear_flow(t, u); };
  SplitSystem<WaveField> sys;
  if (role == Role::TAsA) {
    sys.flow_a = disp;
    sys.flow_b = nonlin;
    sys.commutator = [ops](const WaveField& u) { return ops->commutator_TV(u); };
  } else {
    sys.flow_a = nonlin;
    sys.flow_b = disp;
    sys.commutator = [ops](const WaveField& u) {
      WaveField c = ops->commutator_TV(u);
      for (cplx& v : c) v = -v;
      return c;
    };
  }
  return sys;
}

std::complex<double> breather(double x, double t, double a, double b) {
  if (!(b > 0.0 && b <= std::numbers::sqrt2)) throw std::invalid_argument("breather needs 0 < b <= sqrt(2)");
  const double r = std::sqrt(2.0 - b * b);
  const double th = a * a * b * r * t;
  const cplx num{b * b * std::cosh(th), b * r * std::sinh(th)};
  const double den = std::cosh(th) - r / std::numbers::sqrt2 * std::cos(a * b * x);
  return (num / den - 1.0) * a * std::polar(1.0, a * a * t);
}

std::complex<double> soliton(double x, double t, double a, double c) {
  if (!(a > 0.0)) throw std::invalid_argument("soliton needs a > 0");
  const double amp = std::sqrt(2.0 * a) / std::cosh(std::sqrt(a) * (x - c * t));
  return std::polar(amp, 0.5 * c * x - (0.25 * c * c - a) * t);
}

std::complex<double> periodic_soliton(double x, double t, double period, double a, double c, int images) {
  cplx s = 0.0;
  for (int m = -images; m <= images; ++m) s += soliton(x + m * period, t, a, c);
  return s;
}

std::string_view to_string(Problem p) { return p == Problem::Breather ? "breather" : "soliton"; }

Problem parse_problem(std::string_view s) {
  const std::string t = lower(s);
  if (t == "breather") return Problem::Breather;
  if (t == "soliton") return Problem::Soliton;
  throw UnknownName("unknown problem '" + std::string(s) + "'");
}

double final_time(Problem p) { return p == Problem::Breather ? 3.0 : 6.0; }

GridSpec default_grid(Problem p, Discretization d) {
  GridSpec g;
  if (p == Problem::Breather) {
    g.x_left = -std::numbers::pi;
    g.x_right = std::numbers::pi;
  } else {
    g.x_left = -20.0;
    g.x_right = 20.0;
  }
  g.nodes = d == Discretization::Spectral ? 512 : 2048;
  g.discretization = d;
  return g;
}

std::vector<double> default_h_list(Discretization d) {
  if (d == Discretization::Spectral) return {0.05, 0.04, 0.03, 0.02, 0.01, 0.0075, 0.006};
  return {0.1, 0.06, 0.05, 0.04, 0.03, 0.02, 0.01};
}

WaveField exact_solution(Problem p, const GridSpec& grid, double t) {
  WaveField u(grid.nodes);
  for (std::size_t i = 0; i < grid.nodes; ++i) {
    const double x = grid.x(i);
    u[i] = p == Problem::Breather ? breather(x, t) : periodic_soliton(x, t, grid.length());
  }
  return u;
}

std::vector<ConvergenceRow> convergence_run(const MethodDescriptor& method, bool processing, Problem problem,
                                            const GridSpec& grid, Role role, std::span<const double> h_list) {
  std::optional<Processor> proc;
  if (processing) proc = Processor::from(method);
  auto ops = std::make_shared<const NlsOperators>(grid);
  const SplitSystem<WaveField> sys = make_split_system(ops, role);
  const StageList stages = compile_stages(method.coeffs);
  const double T = final_time(problem);
  const WaveField u0 = exact_solution(problem, grid, 0.0);
  const WaveField uT = exact_solution(problem, grid, T);

  std::vector<ConvergenceRow> rows;
  for (double h : h_list) {
    if (!(h > 0.0)) throw std::invalid_argument("step sizes must be positive");
    ConvergenceRow row{method.name, role, processing, h};
    auto n = static_cast<std::size_t>(std::llround(T / h));
    double rest = 0.0;
    if (std::abs(static_cast<double>(n) * h - T) > 1e-9 * T) {
      n = static_cast<std::size_t>(std::floor(T / h));
      rest = T - static_cast<double>(n) * h;
      row.shortened = true;
    }
    row.steps = n + (row.shortened ? 1 : 0);

    WaveField u = u0;
    if (proc) u = preprocess(*proc, sys, h, std::move(u));
    advance(stages, sys, h, n, u, true);
    if (rest > 0.0) apply_stages(stages, sys, rest, u);
    if (proc) u = postprocess(*proc, sys, h, std::move(u));

    const bool finite = std::ranges::all_of(u, [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    row.unstable = !finite;
    row.error = finite ? ops->l2_distance(u, uT) : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

MethodRun parse_method_run(std::string_view s) {
  MethodRun r;
  const auto colon = s.find(':');
  std::string_view name = s.substr(0, colon);
  if (colon != std::string_view::npos) {
    const std::string flag = lower(s.substr(colon + 1));
    if (flag != "processed" && flag != "proc") throw UnknownName("unknown method suffix '" + flag + "'");
    r.processing = true;
  }
  r.name = named_method(name).name;
  return r;
}

std::vector<MethodRun> default_method_runs() {
  return {{"Strang", false}, {"PrEtAl", false}, {"BlCaSa", false}, {"Yoshida", false}, {"LoSaSk", true}};
}

NlsRunConfig nls_config_from_json(const nlohmann::json& j) {
  NlsRunConfig cfg;
  cfg.problem = parse_problem(j.value("problem", std::string("breather")));
  Discretization disc = Discretization::Spectral;
  const nlohmann::json grid = j.value("grid", nlohmann::json::object());
  if (grid.contains("discretization")) disc = parse_discretization(grid.at("discretization").get<std::string>());
  cfg.grid = default_grid(cfg.problem, disc);
  cfg.grid.x_left = grid.value("x_left", cfg.grid.x_left);
  cfg.grid.x_right = grid.value("x_right", cfg.grid.x_right);
  cfg.grid.nodes = grid.value("nodes", cfg.grid.nodes);
  cfg.grid.validate();
  cfg.role = parse_role(j.value("role", std::string("T-as-A")));
  if (j.contains("methods")) {
    for (const auto& m : j.at("methods")) {
      if (m.is_string()) {
        cfg.methods.push_back(parse_method_run(m.get<std::string>()));
      } else {
        MethodRun r{named_method(m.at("name").get<std::string>()).name, m.value("processing", false)};
        cfg.methods.push_back(r);
      }
    }
  } else {
    cfg.methods = default_method_runs();
  }
  cfg.h = j.contains("h") ? j.at("h").get<std::vector<double>>() : default_h_list(disc);
  return cfg;
}

std::vector<ConvergenceRow> run_config(const NlsRunConfig& cfg) {
  std::vector<ConvergenceRow> rows;
  for (const MethodRun& m : cfg.methods) {
    auto part = convergence_run(named_method(m.name), m.processing, cfg.problem, cfg.grid, cfg.role, cfg.h);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kConvergenceHeader << '\n';
  const auto old = os.precision(12);
  for (const ConvergenceRow& r : rows) {
    os << r.method << ',' << to_string(r.role) << ',' << (r.processing ? "true" : "false") << ',' << r.h << ','
       << r.error << '\n';
  }
  os.precision(old);
}

}  // namespace splitting
