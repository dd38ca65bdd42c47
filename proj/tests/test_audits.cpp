#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "chns/audits.hpp"
#include "chns/error.hpp"
#include "chns/random_fields.hpp"
#include "chns/spectral.hpp"

using namespace chns;
using std::numbers::pi;

namespace {

State smooth_state(const Grid& g, std::uint64_t seed) {
  State s = State::rest(g);
  s.phi = spinodal_field(g, 0.0, 0.3, 2.0, seed);
  s.u = 0.3 * normalized(FieldSampler(seed + 1).solenoidal(g, 2.0));
  return s;
}

}  // namespace

TEST_CASE("log-log slope and rank correlation") {
  const std::vector<double> x = {1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  CHECK(loglog_slope(x, y) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::isnan(loglog_slope(std::vector<double>{1.0}, std::vector<double>{1.0})));

  CHECK(spearman(x, y) == doctest::Approx(1.0));
  const std::vector<double> rev = {4.0, 3.0, 2.0, 1.0};
  CHECK(spearman(x, rev) == doctest::Approx(-1.0));
  // ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4): rho = 4.5 / sqrt(4.5 * 5)
  const std::vector<double> tied = {1.0, 2.0, 2.0, 3.0};
  CHECK(spearman(tied, x) == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)).epsilon(1e-12));
}

TEST_CASE("mass audit") {
  Grid g(16, 16, 2 * pi);
  const Trajectory t = simulate_uncontrolled(smooth_state(g, 1), 0.05, Params{}, SchemeConfig{});
  const AuditReport r = audit_mass_conservation(t);
  CHECK(r.pass);
  CHECK(r.fitted_constant <= 1e-12);
  CHECK(r.samples == 51);
  Trajectory bad = t;
  bad.diagnostics.back().mean_phi += 1e-9;
  CHECK_FALSE(audit_mass_conservation(bad).pass);
}

TEST_CASE("energy audit") {
  Grid g(16, 16, 2 * pi);
  SUBCASE("rest state keeps D at zero") {
    const AuditReport r = audit_energy_law(State::rest(g), Params{}, SchemeConfig{}, 0.02);
    CHECK(r.pass);
    CHECK(r.details[0].get("D0") == 0.0);
    CHECK(r.details[0].get("D_end") == 0.0);
  }
  SUBCASE("balance gap is first order in dt") {
    const State s = smooth_state(g, 2);
    std::vector<double> gaps;
    for (double dt : {2e-3, 1e-3, 5e-4}) {
      SchemeConfig c;
      c.dt = dt;
      const AuditReport r = audit_energy_law(s, Params{}, c, 0.1);
      CHECK(r.details[1].get("monotone") == 1.0);
      gaps.push_back(r.fitted_constant);
    }
    CHECK(gaps[0] / gaps[1] == doctest::Approx(2.0).epsilon(0.2));
    CHECK(gaps[1] / gaps[2] == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("continuous dependence audit") {
  Grid g(16, 16, 2 * pi);
  const State s = smooth_state(g, 3);
  const std::vector<double> deltas = {1e-2, 5e-3, 2.5e-3, 0.0};
  const AuditReport r = audit_continuous_dependence(s, deltas, Params{}, SchemeConfig{}, 0.05, 7);
  CHECK(r.pass);
  CHECK(r.fitted_order >= 0.9);
  // delta = 0 runs nothing and reports r = 0
  CHECK(r.details[3].get("r") == 0.0);
  const double ratio = r.details[0].get("r") / r.details[1].get("r");
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.0);
  CHECK_THROWS_AS(audit_continuous_dependence(s, std::vector<double>{1e-3, 1e-2}, Params{}, SchemeConfig{}, 0.05, 7),
                  DomainError);
}

TEST_CASE("time continuity audit") {
  Grid g(16, 16, 2 * pi);
  const std::vector<double> h = {1e-2, 5e-3, 2.5e-3};
  const AuditReport rest = audit_time_continuity(State::rest(g), h, Params{}, SchemeConfig{});
  CHECK(rest.pass);
  CHECK(rest.fitted_constant == 0.0);
  const AuditReport r = audit_time_continuity(smooth_state(g, 4), h, Params{}, SchemeConfig{});
  CHECK(r.pass);
  CHECK(r.details[3].get("q_monotone_in_h") == 1.0);
  CHECK(r.fitted_constant > 0.0);
}

TEST_CASE("functional inequality audit") {
  Grid g(16, 16, 2 * pi);
  const AuditReport r = audit_functional_inequalities(20, g, 5);
  CHECK(r.pass);
  CHECK(r.samples == 20);
  REQUIRE(r.details.size() == 3);
  // The lowest mode saturates Poincare-Wirtinger: L / (2 pi).
  for (const auto& d : r.details) CHECK(d.get("poincare") == doctest::Approx(1.0).epsilon(1e-12));
  Grid g2(16, 16, 3.0);
  const AuditReport r2 = audit_functional_inequalities(20, g2, 5);
  CHECK(r2.details[0].get("poincare") == doctest::Approx(3.0 / (2 * pi)).epsilon(1e-12));
  CHECK_THROWS_AS(audit_functional_inequalities(5, g, 5), DomainError);
}

TEST_CASE("value continuity audit") {
  Grid g(8, 8, 2 * pi);
  SchemeConfig c;
  c.dt = 5e-3;
  OptimizerConfig o;
  o.population = 16;
  o.elites = 4;
  o.iterations = 6;
  o.fd_passes = 1;
  o.intervals = 2;
  const State s = smooth_state(g, 6);

  SUBCASE("identical pair has zero difference") {
    const std::vector<std::pair<State, State>> pairs = {{s, s}};
    const AuditReport r = audit_value_continuity(pairs, {0.0, 0.1}, Params{}, c, o);
    CHECK(r.details[0].get("value_difference") == 0.0);
    CHECK(r.details[0].get("distance") == 0.0);
  }
  SUBCASE("differences shrink with the distance") {
    const auto pairs = value_continuity_pairs(s, 0.1, 3, 9);
    const AuditReport r = audit_value_continuity(pairs, {0.0, 0.1}, Params{}, c, o);
    CHECK(r.pass);
    CHECK(std::isfinite(r.fitted_constant));
    CHECK(r.details[1].get("value_difference") <= r.details[0].get("value_difference"));
    CHECK(r.details[2].get("value_difference") <= r.details[1].get("value_difference"));
  }
}

TEST_CASE("self-convergence audit") {
  Grid g(16, 16, 2 * pi);
  const std::vector<double> dts = {1e-3, 5e-4, 2.5e-4};
  const AuditReport r = audit_self_convergence(smooth_state(g, 7), Params{}, SchemeConfig{}, 0.1, dts);
  CHECK(r.pass);
  CHECK(r.fitted_order == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(audit_self_convergence(smooth_state(g, 7), Params{}, SchemeConfig{}, 0.1,
                                         std::vector<double>{1e-3, 5e-4}),
                  DomainError);
}
