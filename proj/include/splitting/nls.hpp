/**
 * @file nls.hpp
 * @brief Split-step solver for i u_t + u_xx + |u|^2 u = 0 on a periodic grid.
 *
 * The equation is split into the dispersive part T: u_t = i u_xx and the
 * nonlinear part V: u_t = i |u|^2 u. Both flows are exact: T is diagonal in
 * Fourier space for the spectral and for the periodic 3-point Laplacian, and V
 * is the pointwise phase rotation u exp(i t |u|^2).
 */
#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitting/integrator.hpp"
#include "splitting/methods.hpp"

namespace splitting {

namespace detail {
class Fft;
}

enum class Discretization { Spectral, CentralDifference };

std::string_view to_string(Discretization d);
Discretization parse_discretization(std::string_view s);

struct GridSpec {
  double x_left = -std::numbers::pi;
  double x_right = std::numbers::pi;
  std::size_t nodes = 512;
  Discretization discretization = Discretization::Spectral;

  double length() const { return x_right - x_left; }
  double dx() const { return length() / static_cast<double>(nodes); }
  double x(std::size_t i) const { return x_left + dx() * static_cast<double>(i); }
  /// Throws std::invalid_argument unless nodes >= 8 and x_right > x_left.
  void validate() const;
};

using WaveField = std::vector<std::complex<double>>;

/// Pointwise u -> exp(i t |u|^2) u.
void nonlinear_flow(double t, WaveField& u);

/// Linear operators of one grid. One instance may be shared between threads.
class NlsOperators {
 public:
  explicit NlsOperators(GridSpec grid);
  ~NlsOperators();
  NlsOperators(const NlsOperators&) = delete;
  NlsOperators& operator=(const NlsOperators&) = delete;

  const GridSpec& grid() const { return grid_; }
  /// Wavenumbers in FFT order.
  const std::vector<double>& wavenumbers() const { return k_; }
  /// Eigenvalues of -d_xx: k^2 or (4/dx^2) sin^2(k dx / 2).
  const std::vector<double>& symbol() const { return lambda_; }

  /// Exact flow of u_t = i d_xx u: mode k is multiplied by exp(-i lambda_k t).
  void dispersion_flow(double t, WaveField& u) const;
  WaveField second_derivative(const WaveField& u) const;
  /// [T,V](u) with u = q + ip, returned as a complex field.
  WaveField commutator_TV(const WaveField& u) const;

  /// dx * sum |u_i|^2
  double mass(const WaveField& u) const;
  /// sqrt(dx) * ||u - v||_2
  double l2_distance(const WaveField& u, const WaveField& v) const;

 private:
  GridSpec grid_;
  std::vector<double> k_;
  std::vector<double> lambda_;
  std::unique_ptr<detail::Fft> fft_;
};

/// T and V as flows A/B according to the role; the commutator is [A,B].
SplitSystem<WaveField> make_split_system(std::shared_ptr<const NlsOperators> ops, Role role);

/// Breather with limit amplitude a and modulation 0 < b <= sqrt(2).
std::complex<double> breather(double x, double t, double a = 1.0, double b = 1.0);
/// Soliton with amplitude parameter a > 0 and velocity c, on the whole line.
std::complex<double> soliton(double x, double t, double a = 2.0, double c = 3.0);
/// Soliton summed over the images x + m * period, |m| <= images.
std::complex<double> periodic_soliton(double x, double t, double period, double a = 2.0, double c = 3.0,
                                      int images = 2);

enum class Problem { Breather, Soliton };

std::string_view to_string(Problem p);
Problem parse_problem(std::string_view s);

double final_time(Problem p);
/// Domain of the problem with 512 spectral or 2048 finite-difference nodes.
GridSpec default_grid(Problem p, Discretization d);
std::vector<double> default_h_list(Discretization d);

/// Reference solution on the grid nodes; the soliton is periodized.
WaveField exact_solution(Problem p, const GridSpec& grid, double t);

struct ConvergenceRow {
  std::string method;
  Role role = Role::TAsA;
  bool processing = false;
  double h = 0.0;
  double error = 0.0;
  std::size_t steps = 0;
  bool shortened = false;  ///< h does not divide T; the last step was shortened
  bool unstable = false;   ///< the solution became non-finite
};

/// Integrates the problem to its final time for each h and reports the
/// discrete L2 error at T. Instability is reported per row, not thrown.
std::vector<ConvergenceRow> convergence_run(const MethodDescriptor& method, bool processing, Problem problem,
                                            const GridSpec& grid, Role role, std::span<const double> h_list);

struct MethodRun {
  std::string name;
  bool processing = false;
};

/// "LoSaSk:processed" -> {LoSaSk, true}; "Strang" -> {Strang, false}.
MethodRun parse_method_run(std::string_view s);

struct NlsRunConfig {
  Problem problem = Problem::Breather;
  GridSpec grid = default_grid(Problem::Breather, Discretization::Spectral);
  Role role = Role::TAsA;
  std::vector<MethodRun> methods;
  std::vector<double> h;
};

/// Five methods of the comparison: three second-order, Yoshida, processed LoSaSk.
std::vector<MethodRun> default_method_runs();

/// Parses {problem, grid, role, methods[], h[]}; missing keys take defaults.
NlsRunConfig nls_config_from_json(const nlohmann::json& j);

std::vector<ConvergenceRow> run_config(const NlsRunConfig& cfg);

inline constexpr const char* kConvergenceHeader = "method,role,processing,h,error";

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

}  // namespace splitting
