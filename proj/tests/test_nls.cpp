#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "splitting/errors.hpp"
#include "splitting/nls.hpp"
#include "support/oracles.hpp"

using namespace splitting;
using cplx = std::complex<double>;

namespace {

GridSpec small_grid(Discretization d, std::size_t n = 64) {
  GridSpec g;
  g.nodes = n;
  g.discretization = d;
  return g;
}

WaveField smooth_field(const GridSpec& g) {
  WaveField u(g.nodes);
  for (std::size_t i = 0; i < g.nodes; ++i) {
    const double x = g.x(i);
    u[i] = cplx{0.8 + 0.3 * std::cos(x), 0.5 * std::sin(2 * x) - 0.2};
  }
  return u;
}

double max_abs_diff(const WaveField& u, const WaveField& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

double max_abs(const WaveField& u) {
  double m = 0.0;
  for (const cplx& v : u) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("grid spec") {
  GridSpec g = default_grid(Problem::Soliton, Discretization::CentralDifference);
  CHECK(g.nodes == 2048);
  CHECK(g.dx() == doctest::Approx(0.0195).epsilon(0.01));
  CHECK(default_grid(Problem::Breather, Discretization::CentralDifference).dx() ==
        doctest::Approx(0.003).epsilon(0.03));
  g.nodes = 4;
  CHECK_THROWS_AS(NlsOperators{g}, std::invalid_argument);
}

TEST_CASE("dispersion flow") {
  for (auto d : {Discretization::Spectral, Discretization::CentralDifference}) {
    const NlsOperators ops(small_grid(d));
    const WaveField u0 = smooth_field(ops.grid());
    WaveField u = u0;
    ops.dispersion_flow(0.0, u);
    CHECK(max_abs_diff(u, u0) < 1e-15);
    ops.dispersion_flow(0.37, u);
    CHECK(std::abs(ops.mass(u) - ops.mass(u0)) < 1e-13 * ops.mass(u0));
    ops.dispersion_flow(-0.37, u);
    CHECK(max_abs_diff(u, u0) < 1e-14);
  }
}

TEST_CASE("dispersion of a plane wave") {
  const GridSpec g = small_grid(Discretization::Spectral);
  const NlsOperators ops(g);
  const double t = 0.3;
  for (int k : {0, 1, 3, -5}) {
    WaveField u(g.nodes);
    WaveField expect(g.nodes);
    for (std::size_t i = 0; i < g.nodes; ++i) {
      u[i] = std::polar(1.0, k * g.x(i));
      expect[i] = std::polar(1.0, k * g.x(i) - k * k * t);
    }
    ops.dispersion_flow(t, u);
    CHECK(max_abs_diff(u, expect) < 1e-13);
  }

  const GridSpec f = small_grid(Discretization::CentralDifference);
  const NlsOperators fd(f);
  const int k = 3;
  const double lam = 4.0 / (f.dx() * f.dx()) * std::pow(std::sin(k * f.dx() / 2), 2);
  WaveField u(f.nodes);
  WaveField expect(f.nodes);
  for (std::size_t i = 0; i < f.nodes; ++i) {
    u[i] = std::polar(1.0, k * f.x(i));
    expect[i] = std::polar(1.0, k * f.x(i) - lam * t);
  }
  fd.dispersion_flow(t, u);
  CHECK(max_abs_diff(u, expect) < 1e-13);
}

TEST_CASE("finite-difference symbol is the 3-point Laplacian") {
  const GridSpec g = small_grid(Discretization::CentralDifference, 32);
  const NlsOperators ops(g);
  const WaveField u = smooth_field(g);
  const WaveField d2 = ops.second_derivative(u);
  const double dx2 = g.dx() * g.dx();
  for (std::size_t i = 0; i < g.nodes; ++i) {
    const cplx stencil = (u[(i + 1) % g.nodes] - 2.0 * u[i] + u[(i + g.nodes - 1) % g.nodes]) / dx2;
    CHECK(std::abs(d2[i] - stencil) < 1e-11);
  }
}

TEST_CASE("nonlinear flow") {
  const GridSpec g = small_grid(Discretization::Spectral);
  const WaveField u0 = smooth_field(g);
  WaveField u = u0;
  nonlinear_flow(0.0, u);
  CHECK(u == u0);
  nonlinear_flow(1.7, u);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(std::abs(u[i]) - std::abs(u0[i])) < 1e-15);
  WaveField c(8, cplx{0.6, -0.3});
  nonlinear_flow(2.0, c);
  const cplx expect = std::polar(1.0, 2.0 * std::norm(cplx{0.6, -0.3})) * cplx{0.6, -0.3};
  CHECK(std::abs(c[3] - expect) < 1e-15);
}

TEST_CASE("commutator trivial cases") {
  const NlsOperators ops(small_grid(Discretization::Spectral));
  CHECK(max_abs(ops.commutator_TV(WaveField(64, 0.0))) == 0.0);
  CHECK(max_abs(ops.commutator_TV(WaveField(64, cplx{0.7, 0.0}))) < 1e-13);
}

TEST_CASE("commutator matches flow compositions") {
  for (auto d : {Discretization::Spectral, Discretization::CentralDifference}) {
    auto ops = std::make_shared<const NlsOperators>(small_grid(d, 32));
    const WaveField u = smooth_field(ops->grid());
    const WaveField c = ops->commutator_TV(u);
    // [T,V] ~ (phi^T_e phi^V_e - phi^V_e phi^T_e + same at -e) / (2 e^2), V applied first on the left term.
    auto diff = [&](double e) {
      WaveField y = u;
      nonlinear_flow(e, y);
      ops->dispersion_flow(e, y);
      WaveField z = u;
      ops->dispersion_flow(e, z);
      nonlinear_flow(e, z);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= z[i];
      return y;
    };
    std::vector<double> errs;
    for (double e : {2e-3, 1e-3}) {
      const WaveField p = diff(e);
      const WaveField m = diff(-e);
      WaveField approx(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) approx[i] = (p[i] + m[i]) / (2 * e * e);
      errs.push_back(max_abs_diff(approx, c) / max_abs(c));
    }
    CHECK(errs[1] < 1e-3);
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("split system roles") {
  auto ops = std::make_shared<const NlsOperators>(small_grid(Discretization::Spectral));
  const auto a = make_split_system(ops, Role::TAsA);
  const auto b = make_split_system(ops, Role::TAsB);
  const WaveField u = smooth_field(ops->grid());
  const WaveField ca = a.commutator(u);
  const WaveField cb = b.commutator(u);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(ca[i] + cb[i]) < 1e-15);
  WaveField x = u;
  WaveField y = u;
  a.flow_a(0.2, x);
  b.flow_b(0.2, y);
  CHECK(x == y);
}

TEST_CASE("analytic solutions") {
  CHECK(std::abs(soliton(0.0, 0.0, 2.0, 3.0) - 2.0) < 1e-15);
  for (double x : {-3.0, 0.5, 4.0}) {
    const double dt = 0.7;
    CHECK(std::abs(soliton(x, 1.0)) == doctest::Approx(std::abs(soliton(x - 3.0 * dt, 1.0 - dt))).epsilon(1e-14));
  }
  CHECK_THROWS_AS(breather(0.0, 0.0, 1.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(soliton(0.0, 0.0, -1.0, 3.0), std::invalid_argument);
  CHECK_NOTHROW(breather(0.0, 0.0, 1.0, std::numbers::sqrt2));
}

TEST_CASE("analytic solutions satisfy the equation") {
  auto residual = [](Problem p, std::size_t nodes, double t) {
    GridSpec g = default_grid(p, Discretization::Spectral);
    g.nodes = nodes;
    const NlsOperators ops(g);
    const double dt = 1e-4;
    const WaveField u = exact_solution(p, g, t);
    const WaveField up = exact_solution(p, g, t + dt);
    const WaveField um = exact_solution(p, g, t - dt);
    const WaveField uxx = ops.second_derivative(u);
    double r = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      const cplx ut = (up[i] - um[i]) / (2 * dt);
      r = std::max(r, std::abs(cplx{0.0, 1.0} * ut + uxx[i] + std::norm(u[i]) * u[i]));
    }
    return r;
  };
  CHECK(residual(Problem::Breather, 256, 1.3) < 1e-6);
  CHECK(residual(Problem::Breather, 16, 1.3) > residual(Problem::Breather, 256, 1.3));
  CHECK(residual(Problem::Soliton, 1024, 2.0) < 1e-6);
  CHECK(residual(Problem::Soliton, 128, 2.0) > residual(Problem::Soliton, 1024, 2.0));
}

TEST_CASE("soliton on the periodic domain") {
  const GridSpec g = default_grid(Problem::Soliton, Discretization::Spectral);
  CHECK(std::abs(soliton(g.x_left, 0.0)) < 1e-8);
  CHECK(std::abs(soliton(g.x_right, 0.0)) < 1e-8);
  const double T = final_time(Problem::Soliton);
  double overlap = 0.0;
  for (std::size_t i = 0; i < g.nodes; ++i) {
    const double x = g.x(i);
    overlap = std::max(overlap, std::min(std::abs(soliton(x, T)), std::abs(soliton(x + g.length(), T))));
    overlap = std::max(overlap, std::min(std::abs(soliton(x, T)), std::abs(soliton(x - g.length(), T))));
  }
  CHECK(overlap < 1e-8);
}

TEST_CASE("every split flow conserves mass") {
  auto ops = std::make_shared<const NlsOperators>(default_grid(Problem::Breather, Discretization::Spectral));
  WaveField u = exact_solution(Problem::Breather, ops->grid(), 0.0);
  const double m0 = ops->mass(u);
  const auto sys = make_split_system(ops, Role::TAsA);
  for (int k = 0; k < 50; ++k) {
    const double before = ops->mass(u);
    sys.flow_a(0.03, u);
    sys.flow_b(0.03, u);
    CHECK(std::abs(ops->mass(u) - before) < 1e-12 * before);
  }
  advance(named_method("Yoshida").coeffs, sys, 0.01, 100, u, true);
  CHECK(std::abs(ops->mass(u) - m0) < 1e-11 * m0);
}

TEST_CASE("convergence run bookkeeping") {
  const GridSpec g = default_grid(Problem::Breather, Discretization::Spectral);
  const std::vector<double> hs{0.1, 0.07};
  const auto rows = convergence_run(named_method("Strang"), false, Problem::Breather, g, Role::TAsA, hs);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].shortened);
  CHECK(rows[0].steps == 30);
  CHECK(rows[1].shortened);
  CHECK(rows[1].steps == 43);
  for (const auto& r : rows) {
    CHECK_FALSE(r.unstable);
    CHECK(std::isfinite(r.error));
  }
  CHECK_THROWS_AS(convergence_run(named_method("Strang"), true, Problem::Breather, g, Role::TAsA, hs),
                  EffectiveOrderViolation);
}

TEST_CASE("second-order slopes agree across roles") {
  const GridSpec g = default_grid(Problem::Breather, Discretization::Spectral);
  const std::vector<double> hs{0.02, 0.01, 0.0075};
  double slopes[2];
  int i = 0;
  for (Role role : {Role::TAsA, Role::TAsB}) {
    const auto rows = convergence_run(named_method("Strang"), false, Problem::Breather, g, role, hs);
    std::vector<double> e;
    for (const auto& r : rows) e.push_back(r.error);
    slopes[i++] = oracle::fit_slope(hs, e);
  }
  CHECK(slopes[0] == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::abs(slopes[0] - slopes[1]) < 0.2);
}

TEST_CASE("spectral spatial error is negligible") {
  GridSpec g = default_grid(Problem::Breather, Discretization::Spectral);
  const std::vector<double> hs{0.05};
  const double e512 = convergence_run(named_method("Strang"), false, Problem::Breather, g, Role::TAsA, hs)[0].error;
  g.nodes = 1024;
  const double e1024 = convergence_run(named_method("Strang"), false, Problem::Breather, g, Role::TAsA, hs)[0].error;
  CHECK(std::abs(e512 - e1024) < 1e-9);
}

TEST_CASE("run configuration from JSON") {
  const auto cfg = nls_config_from_json(nlohmann::json::parse(
      R"({"problem":"soliton","grid":{"discretization":"fd","nodes":256},"role":"T-as-B",
          "methods":["Strang","LoSaSk:processed",{"name":"Yoshida"}],"h":[0.1,0.05]})"));
  CHECK(cfg.problem == Problem::Soliton);
  CHECK(cfg.grid.nodes == 256);
  CHECK(cfg.grid.x_right == 20.0);
  CHECK(cfg.grid.discretization == Discretization::CentralDifference);
  CHECK(cfg.role == Role::TAsB);
  REQUIRE(cfg.methods.size() == 3);
  CHECK(cfg.methods[1].processing);
  CHECK(cfg.methods[2].name == "Yoshida");
  CHECK(cfg.h == std::vector<double>{0.1, 0.05});

  const auto def = nls_config_from_json(nlohmann::json::object());
  CHECK(def.h == std::vector<double>{0.05, 0.04, 0.03, 0.02, 0.01, 0.0075, 0.006});
  CHECK(def.methods.size() == 5);
  CHECK(default_h_list(Discretization::CentralDifference) ==
        std::vector<double>{0.1, 0.06, 0.05, 0.04, 0.03, 0.02, 0.01});
  CHECK_THROWS_AS(nls_config_from_json(nlohmann::json::parse(R"({"problem":"kdv"})")), UnknownName);
  CHECK_THROWS_AS(parse_method_run("LoSaSk:twice"), UnknownName);
}

TEST_CASE("convergence CSV") {
  std::ostringstream os;
  write_convergence_csv(os, {{"Strang", Role::TAsB, false, 0.05, 0.0123}});
  CHECK(os.str() == "method,role,processing,h,error\nStrang,T-as-B,false,0.05,0.0123\n");
}
