#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "chns/control.hpp"
#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/random_fields.hpp"
#include "chns/spectral.hpp"
#include "oracles.hpp"

using namespace chns;
using std::numbers::pi;

namespace {

OptimizerConfig small_budget(std::uint64_t seed = 0) {
  OptimizerConfig o;
  o.population = 16;
  o.elites = 4;
  o.iterations = 6;
  o.fd_passes = 1;
  o.intervals = 2;
  o.seed = seed;
  return o;
}

State smooth_state(const Grid& g, std::uint64_t seed) {
  State s = State::rest(g);
  s.phi = spinodal_field(g, 0.0, 0.3, 2.0, seed);
  s.u = 0.5 * normalized(FieldSampler(seed + 100).solenoidal(g, 2.0));
  return s;
}

}  // namespace

TEST_CASE("ball projection") {
  Grid g(8, 8, 2 * pi);
  const VelocityField v = 3.0 * normalized(FieldSampler(1).solenoidal(g, 2.0));
  CHECK(l2_norm(project_to_ball(v, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(oracle::max_abs_diff(project_to_ball(v, 5.0).x(), v.x()) == 0.0);
  CHECK(l2_norm(project_to_ball(v, 0.0)) == 0.0);
  CHECK_THROWS_AS(project_to_ball(v, -1.0), DomainError);
  std::vector<double> c = {3.0, 4.0};
  project_coefficients(c, 1.0);
  CHECK(c[0] == doctest::Approx(0.6));
  CHECK(c[1] == doctest::Approx(0.8));
}

TEST_CASE("control basis is orthonormal and solenoidal") {
  Grid g(16, 16, 3.0);
  ControlBasis b(g);
  REQUIRE(b.size() == 8);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(is_solenoidal(b.mode(i)));
    for (std::size_t j = 0; j < b.size(); ++j) {
      CHECK(inner(b.mode(i), b.mode(j)) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
  const std::vector<double> c = {0.1, -0.2, 0.3, 0.0, 0.5, -0.1, 0.2, 0.05};
  double n2 = 0;
  for (double x : c) n2 += x * x;
  CHECK(l2_norm(b.synthesize(c)) == doctest::Approx(std::sqrt(n2)).epsilon(1e-13));
  CHECK_THROWS_AS(b.synthesize(std::vector<double>(3)), DimensionError);
}

TEST_CASE("control signals") {
  Grid g(8, 8, 2 * pi);
  ControlBasis b(g);
  const auto bp = uniform_breakpoints(0.0, 1.0, 4);
  CHECK(bp == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  std::vector<std::vector<double>> modes;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> m(8, 0.0);
    m[static_cast<std::size_t>(i)] = 0.1 * (i + 1);
    modes.push_back(m);
  }
  const ControlSignal u = b.signal(bp, modes);
  CHECK(u.interval_at(0.0) == 0);
  CHECK(u.interval_at(0.25) == 1);
  CHECK(u.interval_at(0.9) == 3);
  CHECK(u.interval_at(1.0) == 3);
  CHECK(u.max_norm() == doctest::Approx(0.4));

  const ControlSignal head = u.restrict(0.0, 0.6);
  CHECK(head.breakpoints() == std::vector<double>{0.0, 0.25, 0.5, 0.6});
  const ControlSignal tail = u.restrict(0.6, 1.0);
  const ControlSignal whole = head.concat(tail);
  CHECK(whole.T() == 1.0);
  CHECK(oracle::max_abs_diff(whole.at(0.8).x(), u.at(0.8).x()) == 0.0);
  CHECK_THROWS_AS(head.concat(u.restrict(0.7, 1.0)), DomainError);
  CHECK_THROWS_AS(ControlSignal({0.0, 0.0}, {VelocityField(g)}), DomainError);
  VelocityField bad(g);
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) bad.x()(ix, iy) = std::sin(g.x(ix));
  CHECK_THROWS_AS(ControlSignal::constant(bad, 0.0, 1.0), DomainError);
}

TEST_CASE("cost of simple trajectories") {
  Grid g(8, 8, 2 * pi);
  Params p;
  CHECK(evaluate_cost(State::rest(g), ControlSignal::zero(g, 0.0, 0.5), p, SchemeConfig{}).total == 0.0);

  // Constant pure phase phi = 1 with U = 0 is stationary.
  State s = State::rest(g);
  s.phi = ScalarField(g, 1.0);
  const CostBreakdown c = evaluate_cost(s, ControlSignal::zero(g, 0.0, 0.5), p, SchemeConfig{});
  CHECK(c.running_state == doctest::Approx(0.5 * 0.5 * g.area()).epsilon(1e-12));
  CHECK(c.terminal == doctest::Approx(0.5 * g.area()).epsilon(1e-12));
  CHECK(c.running_control == 0.0);
  CHECK(c.total == (c.running_state + c.running_control) + c.terminal);

  // Control cost is exact for piecewise-constant U.
  ControlBasis b(g);
  std::vector<double> m(8, 0.0);
  m[0] = 0.5;
  const CostBreakdown cu = evaluate_cost(State::rest(g), b.signal({0.0, 0.3}, {m}), p, SchemeConfig{});
  CHECK(cu.running_control == doctest::Approx(0.5 * 0.3 * 0.25).epsilon(1e-14));
  CHECK_THROWS_AS(evaluate_cost(s, ControlSignal::zero(g, 0.1, 0.5), p, SchemeConfig{}), DomainError);
}

TEST_CASE("optimizer configuration is validated") {
  OptimizerConfig o;
  CHECK_NOTHROW(validate(o));
  o.elites = 100;
  CHECK_THROWS_AS(validate(o), DomainError);
  o = OptimizerConfig{};
  o.iterations = 0;
  o.fd_passes = 0;
  CHECK_NOTHROW(validate(o));
}

TEST_CASE("value estimate basics") {
  Grid g(8, 8, 2 * pi);
  Params p;
  SchemeConfig c;
  c.dt = 5e-3;
  const Window w{0.0, 0.2};

  SUBCASE("rest state has value zero") {
    const ValueEstimate v = value_estimate(State::rest(g), w, p, c, small_budget());
    CHECK(v.value == 0.0);
  }
  SUBCASE("R = 0 gives the uncontrolled cost and skips the search") {
    p.R = 0.0;
    const State s = smooth_state(g, 1);
    const ValueEstimate v = value_estimate(s, w, p, c, small_budget());
    CHECK(v.value == evaluate_cost(s, ControlSignal::zero(g, 0.0, 0.2), p, c).total);
    CHECK(v.evals == 1);
  }
  SUBCASE("never worse than U = 0, admissible, reproducible") {
    const State s = smooth_state(g, 2);
    const ValueEstimate v = value_estimate(s, w, p, c, small_budget(5));
    CHECK(v.value <= evaluate_cost(s, ControlSignal::zero(g, 0.0, 0.2), p, c).total);
    CHECK(v.best_control.max_norm() <= p.R * (1 + 1e-12));
    CHECK(evaluate_cost(s, v.best_control, p, c).total == v.value);
    const ValueEstimate again = value_estimate(s, w, p, c, small_budget(5));
    CHECK(again.value == v.value);
    CHECK(v.seed == 5);
    for (std::size_t i = 1; i < v.history.size(); ++i) CHECK(v.history[i] <= v.history[i - 1]);
  }
  SUBCASE("window must start at the state time") {
    CHECK_THROWS_AS(value_estimate(State::rest(g), {0.1, 0.2}, p, c, small_budget()), DomainError);
    CHECK_THROWS_AS(value_estimate(State::rest(g), {0.0, 0.0}, p, c, small_budget()), DomainError);
  }
}

TEST_CASE("serial and parallel optimizer runs agree") {
  Grid g(8, 8, 2 * pi);
  SchemeConfig c;
  c.dt = 5e-3;
  const State s = smooth_state(g, 3);
  setenv("CHNS_THREADS", "1", 1);
  const ValueEstimate a = value_estimate(s, {0.0, 0.1}, Params{}, c, small_budget(7));
  setenv("CHNS_THREADS", "4", 1);
  const ValueEstimate b = value_estimate(s, {0.0, 0.1}, Params{}, c, small_budget(7));
  unsetenv("CHNS_THREADS");
  CHECK(a.value == b.value);
  CHECK(a.best_control.modes() == b.best_control.modes());
}

TEST_CASE("larger control ball never raises the value beyond optimizer noise") {
  Grid g(8, 8, 2 * pi);
  SchemeConfig c;
  c.dt = 5e-3;
  const State s = smooth_state(g, 11);
  Params small, large;
  small.R = 0.2;
  large.R = 0.6;
  OptimizerConfig o = small_budget();
  o.population = 32;
  o.iterations = 12;
  std::vector<double> vs, vl;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    o.seed = seed;
    vs.push_back(value_estimate(s, {0.0, 0.2}, small, c, o).value);
    vl.push_back(value_estimate(s, {0.0, 0.2}, large, c, o).value);
  }
  // Tolerance: seed-to-seed spread of the estimates themselves.
  const double noise = (*std::max_element(vs.begin(), vs.end()) - *std::min_element(vs.begin(), vs.end())) +
                       (*std::max_element(vl.begin(), vl.end()) - *std::min_element(vl.begin(), vl.end()));
  for (std::size_t i = 0; i < vs.size(); ++i) CHECK(vl[i] <= vs[i] + noise);
  CHECK(*std::min_element(vl.begin(), vl.end()) < *std::min_element(vs.begin(), vs.end()));
}

TEST_CASE("shear-mode value matches the Riccati solution") {
  // phi = 0 and u = a e with e the unit shear (-sin y, 0): convection and
  // capillarity vanish, so the problem reduces to a' = -nu a + v with cost
  // 1/2 int (a^2 + v^2) + 1/2 a(T)^2 and value P(0) a0^2 / 2.
  Grid g(8, 8, 2 * pi);
  Params p;
  p.R = 5.0;
  SchemeConfig c;
  c.dt = 1e-3;
  const double T = 0.5;
  ControlBasis basis(g);
  State s = State::rest(g);
  for (int iy = 0; iy < 8; ++iy)
    for (int ix = 0; ix < 8; ++ix) s.u.x()(ix, iy) = -std::sin(g.y(iy));
  s.u = normalized(s.u);
  OptimizerConfig o;
  const ValueEstimate v = value_estimate(s, {0.0, T}, p, c, o);
  const double exact = 0.5 * oracle::riccati_p0(p.nu, T);
  // Piecewise-constant controls on 4 intervals and first-order time stepping
  // cost a little above the continuous optimum.
  CHECK(v.value >= exact * (1 - 2e-3));
  CHECK(v.value <= exact * (1 + 5e-3));
  CHECK(v.value < evaluate_cost(s, ControlSignal::zero(g, 0.0, T), p, c).total);
}

TEST_CASE("DPP residual") {
  Grid g(8, 8, 2 * pi);
  Params p;
  SchemeConfig c;
  c.dt = 5e-3;
  const State s = smooth_state(g, 20);
  const Window w{0.0, 0.1};

  SUBCASE("t_mid = tau is exact") {
    const DppReport r = dpp_residual(s, 0.0, w, p, c, small_budget());
    CHECK(r.residual == 0.0);
    CHECK(r.one_sided_slack == 0.0);
  }
  SUBCASE("t_mid = T uses the terminal cost") {
    const DppReport r = dpp_residual(s, 0.1, w, p, c, small_budget());
    REQUIRE(r.candidates.size() == 2);
    CHECK(r.candidates[0].concat_value == doctest::Approx(r.v_tau_optimizer).epsilon(1e-12));
    CHECK(r.one_sided_slack <= 1e-9);
  }
  SUBCASE("interior t_mid") {
    const DppReport r = dpp_residual(s, 0.05, w, p, c, small_budget());
    CHECK(r.one_sided_slack <= 1e-9);
    CHECK(r.v_tau <= r.v_tau_optimizer);
    for (const auto& cand : r.candidates) {
      CHECK(cand.concat_direct == doctest::Approx(cand.concat_value).epsilon(1e-12));
    }
  }
  SUBCASE("t_mid outside the window") {
    CHECK_THROWS_AS(dpp_residual(s, 0.2, w, p, c, small_budget()), DomainError);
  }
}

TEST_CASE("Hamiltonian closed form and feedback") {
  CHECK(hamiltonian_closed(0.0, 1.0) == 0.0);
  CHECK(hamiltonian_closed(0.5, 1.0) == -0.125);
  CHECK(hamiltonian_closed(1.0, 1.0) == -0.5);
  CHECK(hamiltonian_closed(3.0, 1.0) == -2.5);
  // continuous at |p| = R
  CHECK(hamiltonian_closed(1.0 + 1e-12, 1.0) == doctest::Approx(-0.5).epsilon(1e-11));
  CHECK_THROWS_AS(hamiltonian_closed(-1.0, 1.0), DomainError);

  Grid g(16, 16, 2 * pi);
  std::mt19937_64 rng(3);
  for (double ratio : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    const VelocityField p = ratio * normalized(FieldSampler(rng()).solenoidal(g, 4.0));
    const VelocityField sigma = feedback_sigma(p, 1.0);
    CHECK(l2_norm(sigma) <= 1.0 + 1e-14);
    CHECK(hamiltonian_objective(sigma, p) == doctest::Approx(hamiltonian_closed(ratio, 1.0)).epsilon(1e-12));
    const HamiltonianCheck h = hamiltonian_bruteforce(p, 1.0, 2000, 9);
    CHECK(h.samples == 2000);
    CHECK(std::abs(h.brute_force - h.closed) <= 1e-12);
    CHECK(h.monte_carlo >= h.closed - 1e-12);
  }
}

TEST_CASE("ball samples are admissible and reproducible") {
  Grid g(16, 16, 2 * pi);
  const VelocityField p = normalized(FieldSampler(4).solenoidal(g, 4.0));
  std::vector<double> first, second;
  for_each_ball_sample(p, 0.7, 500, 1, [&](const VelocityField& u) {
    CHECK(l2_norm(u) <= 0.7 * (1 + 1e-12));
    CHECK(is_solenoidal(u));
    first.push_back(inner(u, p));
  });
  for_each_ball_sample(p, 0.7, 500, 1, [&](const VelocityField& u) { second.push_back(inner(u, p)); });
  CHECK(first.size() == 500);
  CHECK(first == second);
}

TEST_CASE("value estimate JSON round trip is bit-exact") {
  Grid g(8, 8, 2 * pi);
  SchemeConfig c;
  c.dt = 5e-3;
  const State s = smooth_state(g, 30);
  const ValueEstimate v = value_estimate(s, {0.0, 0.1}, Params{}, c, small_budget(3));
  const auto text = dump(to_json(v));
  const ValueEstimate back = value_estimate_from_json(nlohmann::json::parse(text), g);
  CHECK(back.value == v.value);
  CHECK(back.evals == v.evals);
  CHECK(back.seed == v.seed);
  CHECK(back.window.T == v.window.T);
  CHECK(back.best_control.modes() == v.best_control.modes());
  CHECK(back.best_control.breakpoints() == v.best_control.breakpoints());
  CHECK(evaluate_cost(s, back.best_control, Params{}, c).total == v.value);
}
