#include "chns/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "chns/error.hpp"
#include "chns/parallel.hpp"
#include "chns/random_fields.hpp"
#include "chns/spectral.hpp"

namespace chns {

VelocityField project_to_ball(const VelocityField& v, double R) {
  if (R < 0.0) throw DomainError("project_to_ball: R must be >= 0");
  const double n = l2_norm(v);
  if (n <= R) return v;
  VelocityField out = v;
  out *= R / n;
  return out;
}

// ---------------------------------------------------------------------------

double terminal_cost(const State& s) {
  const double p = l2_norm(s.phi);
  const double u = l2_norm(s.u);
  return 0.5 * (p * p + u * u);
}

CostBreakdown cost_from_trajectory(const Trajectory& traj) {
  const auto& d = traj.diagnostics;
  if (d.size() != traj.steps.size() + 1) throw DomainError("cost: malformed trajectory");
  CostBreakdown c;
  double state = 0.0;
  double control = 0.0;
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const double h = traj.steps[n].t1 - traj.steps[n].t0;
    const double a0 = d[n].phi_L2sq + d[n].u_L2sq;
    const double a1 = d[n + 1].phi_L2sq + d[n + 1].u_L2sq;
    state += 0.5 * h * (a0 + a1);
    control += h * traj.steps[n].control_L2 * traj.steps[n].control_L2;
  }
  c.running_state = 0.5 * state;
  c.running_control = 0.5 * control;
  c.terminal = 0.5 * (d.back().phi_L2sq + d.back().u_L2sq);
  c.total = (c.running_state + c.running_control) + c.terminal;
  return c;
}

CostBreakdown evaluate_cost(const State& s0, const ControlSignal& U, const Params& p, const SchemeConfig& c) {
  if (U.tau() != s0.t) throw DomainError("evaluate_cost: control window must start at the initial time");
  SchemeConfig quiet = c;
  quiet.snapshot_every = 0;
  return cost_from_trajectory(simulate(s0, U, U.T(), p, quiet));
}

// ---------------------------------------------------------------------------

ControlBasis::ControlBasis(const Grid& grid) {
  const int waves[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (const auto& w : waves) {
    const double kx = grid.wavenumber(w[0]);
    const double ky = grid.wavenumber(w[1]);
    const double scale = 1.0 / (std::hypot(kx, ky) * std::sqrt(0.5 * grid.area()));
    for (int parity = 0; parity < 2; ++parity) {
      VelocityField u(grid);
      for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
          const double theta = kx * grid.x(ix) + ky * grid.y(iy);
          // psi = cos(theta) or sin(theta); u = (psi_y, -psi_x).
          const double dpsi = parity == 0 ? -std::sin(theta) : std::cos(theta);
          u.x()(ix, iy) = scale * ky * dpsi;
          u.y()(ix, iy) = -scale * kx * dpsi;
        }
      }
      modes_.push_back(std::move(u));
    }
  }
}

VelocityField ControlBasis::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() != modes_.size()) throw DimensionError("ControlBasis: coefficient count mismatch");
  VelocityField out(grid());
  auto ox = out.x().values();
  auto oy = out.y().values();
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const double a = coeffs[m];
    if (a == 0.0) continue;
    const auto mx = modes_[m].x().values();
    const auto my = modes_[m].y().values();
    for (std::size_t i = 0; i < ox.size(); ++i) {
      ox[i] += a * mx[i];
      oy[i] += a * my[i];
    }
  }
  return out;
}

ControlSignal ControlBasis::signal(std::vector<double> breakpoints,
                                   std::vector<std::vector<double>> modes) const {
  std::vector<VelocityField> values;
  values.reserve(modes.size());
  for (const auto& m : modes) values.push_back(synthesize(m));
  return ControlSignal(std::move(breakpoints), std::move(values), std::move(modes));
}

std::vector<double> uniform_breakpoints(double tau, double T, int intervals) {
  if (intervals < 1 || !(T > tau)) throw DomainError("uniform_breakpoints: bad window or interval count");
  std::vector<double> b(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) b[i] = tau + (T - tau) * i / intervals;
  b.back() = T;
  return b;
}

void project_coefficients(std::span<double> c, double R) {
  const double n = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
  if (n <= R) return;
  const double s = R / n;
  for (double& v : c) v *= s;
}

void validate(const OptimizerConfig& o) {
  if (o.population < 1 || o.elites < 1 || o.elites > o.population || o.iterations < 0 ||
      o.fd_passes < 0 || !(o.fd_step > 0.0) || !(o.fd_shrink > 0.0 && o.fd_shrink < 1.0) ||
      o.intervals < 1 || !(o.initial_spread >= 0.0) || !(o.smoothing > 0.0 && o.smoothing <= 1.0)) {
    throw DomainError("optimizer: invalid configuration");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, generation, candidate).
std::mt19937_64 candidate_stream(std::uint64_t seed, std::uint64_t gen, std::uint64_t idx) {
  return std::mt19937_64(splitmix64(splitmix64(splitmix64(seed) ^ gen) ^ idx));
}

class CostOracle {
 public:
  CostOracle(const State& s0, Window w, const Params& p, const SchemeConfig& c, int intervals)
      : s0_(s0), p_(p), c_(c), basis_(s0.phi.grid()),
        breakpoints_(uniform_breakpoints(w.tau, w.T, intervals)), intervals_(intervals) {}

  std::size_t dim() const { return static_cast<std::size_t>(intervals_) * basis_.size(); }

  // Projects each interval block onto the R-ball in place.
  void make_admissible(std::vector<double>& x) const {
    const std::size_t m = basis_.size();
    for (int i = 0; i < intervals_; ++i) project_coefficients(std::span(x).subspan(i * m, m), p_.R);
  }

  ControlSignal control(const std::vector<double>& x) const {
    const std::size_t m = basis_.size();
    std::vector<std::vector<double>> modes;
    for (int i = 0; i < intervals_; ++i) modes.emplace_back(x.begin() + i * m, x.begin() + (i + 1) * m);
    return basis_.signal(breakpoints_, std::move(modes));
  }

  double operator()(const std::vector<double>& x) const { return evaluate_cost(s0_, control(x), p_, c_).total; }

 private:
  const State& s0_;
  const Params& p_;
  const SchemeConfig& c_;
  ControlBasis basis_;
  std::vector<double> breakpoints_;
  int intervals_;
};

}  // namespace

ValueEstimate value_estimate(const State& s0, Window window, const Params& p, const SchemeConfig& c,
                             const OptimizerConfig& opt) {
  if (!(window.T > window.tau)) throw DomainError("value_estimate: degenerate window (T <= tau)");
  if (window.tau != s0.t) throw DomainError("value_estimate: window must start at the state's time");
  validate(p);
  validate(opt);

  const CostOracle cost(s0, window, p, c, opt.intervals);
  const std::size_t dim = cost.dim();
  std::vector<double> best(dim, 0.0);
  double best_value = cost(best);
  long evals = 1;
  std::vector<double> history;

  if (p.R > 0.0) {
    std::vector<double> mean(dim, 0.0);
    std::vector<double> spread(dim, opt.initial_spread * p.R);
    const auto pop = static_cast<std::size_t>(opt.population);
    for (int gen = 0; gen < opt.iterations; ++gen) {
      std::vector<std::vector<double>> xs(pop, std::vector<double>(dim));
      std::vector<double> values(pop);
      // Slot 0 carries the incumbent (U = 0 in the first generation), whose
      // cost is already known.
      xs[0] = best;
      values[0] = best_value;
      for (std::size_t k = 1; k < pop; ++k) {
        auto rng = candidate_stream(opt.seed, static_cast<std::uint64_t>(gen), k);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t j = 0; j < dim; ++j) xs[k][j] = mean[j] + spread[j] * normal(rng);
        cost.make_admissible(xs[k]);
      }
      parallel_for(pop - 1, [&](std::size_t k) { values[k + 1] = cost(xs[k + 1]); });
      evals += static_cast<long>(pop - 1);

      std::vector<std::size_t> order(pop);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      if (values[order[0]] < best_value) {
        best_value = values[order[0]];
        best = xs[order[0]];
      }
      const auto ne = static_cast<std::size_t>(opt.elites);
      for (std::size_t j = 0; j < dim; ++j) {
        double m = 0.0;
        for (std::size_t e = 0; e < ne; ++e) m += xs[order[e]][j];
        m /= static_cast<double>(ne);
        double v = 0.0;
        for (std::size_t e = 0; e < ne; ++e) v += (xs[order[e]][j] - m) * (xs[order[e]][j] - m);
        const double sd = std::sqrt(v / static_cast<double>(ne));
        mean[j] = opt.smoothing * m + (1.0 - opt.smoothing) * mean[j];
        spread[j] = opt.smoothing * sd + (1.0 - opt.smoothing) * spread[j];
      }
      history.push_back(best_value);
    }

    std::vector<double> step(dim, opt.fd_step);
    for (int pass = 0; pass < opt.fd_passes; ++pass) {
      for (std::size_t j = 0; j < dim; ++j) {
        bool improved = false;
        for (double sign : {1.0, -1.0}) {
          std::vector<double> trial = best;
          trial[j] += sign * step[j];
          cost.make_admissible(trial);
          const double v = cost(trial);
          ++evals;
          if (v < best_value) {
            best_value = v;
            best = std::move(trial);
            improved = true;
            break;
          }
        }
        if (!improved) step[j] *= opt.fd_shrink;
      }
      history.push_back(best_value);
    }
  } else {
    history.push_back(best_value);
  }

  return ValueEstimate{best_value, cost.control(best), evals, opt.seed, window, std::move(history)};
}

// ---------------------------------------------------------------------------

DppReport dpp_residual(const State& s0, double t_mid, Window window, const Params& p,
                       const SchemeConfig& c, const OptimizerConfig& opt) {
  if (!(t_mid >= window.tau && t_mid <= window.T)) {
    throw DomainError("dpp_residual: t_mid must lie in [tau, T]");
  }
  const ValueEstimate top = value_estimate(s0, window, p, c, opt);
  DppReport r;
  r.t_mid = t_mid;
  r.v_tau_optimizer = top.value;
  r.v_tau = top.value;
  r.evals = top.evals;

  if (t_mid == window.tau) {
    // Empty first leg: the nested problem is the original one.
    r.best_concat = top.value;
    return r;
  }

  std::vector<std::pair<std::string, ControlSignal>> legs;
  legs.emplace_back("optimal-first-leg", top.best_control.restrict(window.tau, t_mid));
  legs.emplace_back("zero", ControlSignal::zero(s0.phi.grid(), window.tau, t_mid));

  SchemeConfig quiet = c;
  quiet.snapshot_every = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [label, leg] : legs) {
    const Trajectory first = simulate(s0, leg, t_mid, p, quiet);
    const CostBreakdown leg_cost = cost_from_trajectory(first);
    const State& mid = first.final_state();
    DppCandidate cand;
    cand.label = label;
    cand.first_leg_cost = leg_cost.running_state + leg_cost.running_control;
    ControlSignal full = leg;
    if (t_mid == window.T) {
      cand.mid_value = leg_cost.terminal;
    } else {
      const ValueEstimate nested = value_estimate(mid, {t_mid, window.T}, p, c, opt);
      r.evals += nested.evals;
      cand.mid_value = nested.value;
      full = leg.concat(nested.best_control);
    }
    cand.concat_value = cand.first_leg_cost + cand.mid_value;
    cand.concat_direct = evaluate_cost(s0, full, p, c).total;
    ++r.evals;
    // Concatenations are admissible at tau, so they also bound V from above.
    r.v_tau = std::min(r.v_tau, cand.concat_direct);
    best = std::min(best, cand.concat_value);
    r.candidates.push_back(std::move(cand));
  }
  r.best_concat = best;
  r.residual = std::abs(r.v_tau - r.best_concat);
  r.one_sided_slack = std::max(0.0, r.v_tau - r.best_concat);
  return r;
}

// ---------------------------------------------------------------------------

double hamiltonian_closed(double p_norm, double R) {
  if (p_norm < 0.0 || R < 0.0) throw DomainError("hamiltonian_closed: arguments must be >= 0");
  if (p_norm == 0.0) return 0.0;
  if (p_norm <= R) return -0.5 * p_norm * p_norm;
  return -R * p_norm + 0.5 * R * R;
}

double hamiltonian_objective(const VelocityField& U, const VelocityField& p) {
  return inner(U, p) + 0.5 * inner(U, U);
}

VelocityField feedback_sigma(const VelocityField& p, double R) {
  if (R < 0.0) throw DomainError("feedback_sigma: R must be >= 0");
  const double n = l2_norm(p);
  VelocityField out = p;
  out *= (n <= R) ? -1.0 : -R / n;
  return out;
}

void for_each_ball_sample(const VelocityField& p, double R, long n, std::uint64_t seed,
                          const std::function<void(const VelocityField&)>& fn) {
  if (n < 1) throw DomainError("ball sampling: n must be >= 1");
  if (R < 0.0) throw DomainError("ball sampling: R must be >= 0");
  const Grid& g = p.grid();
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Orthonormal pair (e1, e2) spanning a plane through p.
  FieldSampler sampler(splitmix64(seed ^ 0x5a5a5a5aULL));
  const double kmax = std::max(1.0, g.nx() / 4.0);
  VelocityField e1 = l2_norm(p) > 0.0 ? normalized(p) : normalized(sampler.solenoidal(g, kmax));
  VelocityField e2 = sampler.solenoidal(g, kmax);
  VelocityField along = e1;
  along *= inner(e2, e1);
  e2 -= along;
  e2 = normalized(e2);

  auto emit = [&](double a, double b) {
    VelocityField U = e1;
    U *= a;
    VelocityField w = e2;
    w *= b;
    U += w;
    fn(project_to_ball(U, R));
  };

  const long n_circle = std::max(1L, n / 10);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  for (long i = 0; i < n_circle; ++i) {
    const double th = phase + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_circle);
    emit(R * std::cos(th), R * std::sin(th));
  }
  long emitted = n_circle;
  const long n_disc = n - n_circle;
  if (n_disc > 0 && R > 0.0) {
    // Slightly coarser than the nominal spacing so the clipped lattice never
    // holds more than n_disc points.
    const double h = 1.02 * R * std::sqrt(std::numbers::pi / static_cast<double>(n_disc));
    const double ox = h * unit(rng);
    const double oy = h * unit(rng);
    const long half = static_cast<long>(std::ceil(R / h)) + 1;
    for (long i = -half; i <= half && emitted < n; ++i) {
      for (long j = -half; j <= half && emitted < n; ++j) {
        const double a = ox + h * static_cast<double>(i);
        const double b = oy + h * static_cast<double>(j);
        if (a * a + b * b > R * R) continue;
        emit(a, b);
        ++emitted;
      }
    }
  }
  while (emitted < n) {
    const double r = R * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    emit(r * std::cos(th), r * std::sin(th));
    ++emitted;
  }
}

HamiltonianCheck hamiltonian_bruteforce(const VelocityField& p, double R, long n, std::uint64_t seed) {
  HamiltonianCheck h;
  h.closed = hamiltonian_closed(l2_norm(p), R);
  h.monte_carlo = std::numeric_limits<double>::infinity();
  for_each_ball_sample(p, R, n, seed, [&](const VelocityField& U) {
    h.monte_carlo = std::min(h.monte_carlo, hamiltonian_objective(U, p));
    ++h.samples;
  });
  const double at_zero = 0.0;
  const double at_sigma = hamiltonian_objective(feedback_sigma(p, R), p);
  h.brute_force = std::min({h.monte_carlo, at_zero, at_sigma});
  return h;
}

}  // namespace chns
