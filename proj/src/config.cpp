#include "chns/config.hpp"

#include <cstdio>
#include <set>

#include "chns/error.hpp"
#include "chns/io.hpp"
#include "chns/random_fields.hpp"

namespace chns {

using nlohmann::json;

namespace {

// Walks one object, rejecting keys that were not consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown key " + qualify(k));
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(qualify(key) + " must be a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(qualify(key) + " must be an integer");
      out = v->get<int>();
    }
  }

  void unsigned64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(qualify(key) + " must be a nonnegative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(qualify(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(qualify(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  std::string qualify(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "config" : path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <class Fn>
void section(Section& parent, const std::string& key, Fn fn) {
  if (const json* v = parent.find(key)) {
    Section s(*v, parent.qualify(key));
    fn(s);
    s.finish();
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (doc.is_object() && doc.contains("config") && doc.contains("config_hash")) return parse_config(doc.at("config"));

  RunConfig c;
  Section root(doc, "");
  section(root, "grid", [&](Section& s) {
    s.integer("nx", c.nx);
    s.integer("ny", c.ny);
    s.number("L", c.L);
  });
  section(root, "params", [&](Section& s) {
    s.number("nu", c.params.nu);
    s.number("mobility", c.params.mobility);
    s.number("capillary", c.params.capillary);
    s.number("R", c.params.R);
  });
  section(root, "time", [&](Section& s) {
    s.number("dt", c.scheme.dt);
    s.number("t_start", c.t_start);
    s.number("t_end", c.t_end);
    s.integer("snapshot_every", c.scheme.snapshot_every);
  });
  section(root, "scheme", [&](Section& s) {
    s.number("stabilization", c.scheme.stabilization);
    s.boolean("dealias", c.scheme.dealias);
    s.number("blowup_cap", c.scheme.blowup_cap);
  });
  section(root, "init", [&](Section& s) {
    s.string("kind", c.init.kind);
    s.number("mean", c.init.mean);
    s.number("amplitude", c.init.amplitude);
    s.number("kmax", c.init.kmax);
    s.unsigned64("seed", c.init.seed);
    s.string("path", c.init.path);
  });
  section(root, "control", [&](Section& s) {
    s.string("kind", c.control.kind);
    s.string("path", c.control.path);
  });
  section(root, "optimizer", [&](Section& s) {
    s.integer("population", c.optimizer.population);
    s.integer("elites", c.optimizer.elites);
    s.integer("iterations", c.optimizer.iterations);
    s.integer("fd_passes", c.optimizer.fd_passes);
    s.number("fd_step", c.optimizer.fd_step);
    s.integer("intervals", c.optimizer.intervals);
    s.unsigned64("seed", c.optimizer.seed);
  });
  section(root, "output", [&](Section& s) { s.string("dir", c.output_dir); });
  root.finish();

  require(c.nx >= 8 && c.nx % 2 == 0, "grid.nx must be an even integer >= 8");
  require(c.ny >= 8 && c.ny % 2 == 0, "grid.ny must be an even integer >= 8");
  require(c.L > 0.0, "grid.L must be > 0");
  require(c.scheme.dt > 0.0, "time.dt must be > 0");
  require(c.t_end > c.t_start, "time.t_end must be > time.t_start");
  require(c.scheme.snapshot_every >= 0, "time.snapshot_every must be >= 0");
  require(c.init.kind == "rest" || c.init.kind == "spinodal" || c.init.kind == "file",
          "init.kind must be one of rest, spinodal, file");
  require(c.init.kind != "file" || !c.init.path.empty(), "init.path is required when init.kind is file");
  require(c.init.amplitude >= 0.0, "init.amplitude must be >= 0");
  require(c.init.kmax >= 1.0, "init.kmax must be >= 1");
  require(c.control.kind == "zero" || c.control.kind == "file", "control.kind must be one of zero, file");
  require(c.control.kind != "file" || !c.control.path.empty(), "control.path is required when control.kind is file");
  try {
    validate(c.params);
    validate(c.scheme);
    validate(c.optimizer);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json canonical_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["grid"] = {{"nx", c.nx}, {"ny", c.ny}, {"L", c.L}};
  j["params"] = {{"nu", c.params.nu}, {"mobility", c.params.mobility}, {"capillary", c.params.capillary}, {"R", c.params.R}};
  j["time"] = {{"dt", c.scheme.dt}, {"t_start", c.t_start}, {"t_end", c.t_end}, {"snapshot_every", c.scheme.snapshot_every}};
  j["scheme"] = {{"stabilization", c.scheme.stabilization}, {"dealias", c.scheme.dealias}, {"blowup_cap", c.scheme.blowup_cap}};
  j["init"] = {{"kind", c.init.kind}, {"mean", c.init.mean}, {"amplitude", c.init.amplitude},
               {"kmax", c.init.kmax}, {"seed", c.init.seed}, {"path", c.init.path}};
  j["control"] = {{"kind", c.control.kind}, {"path", c.control.path}};
  j["optimizer"] = {{"population", c.optimizer.population}, {"elites", c.optimizer.elites},
                    {"iterations", c.optimizer.iterations}, {"fd_passes", c.optimizer.fd_passes},
                    {"fd_step", c.optimizer.fd_step}, {"intervals", c.optimizer.intervals},
                    {"seed", c.optimizer.seed}};
  return j;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void override_seed(RunConfig& c, std::uint64_t seed) {
  c.init.seed = seed;
  c.optimizer.seed = seed;
}

State initial_state(const RunConfig& c) {
  const Grid g = c.grid();
  if (c.init.kind == "rest") return State::rest(g, c.t_start);
  if (c.init.kind == "spinodal") {
    State s = State::rest(g, c.t_start);
    s.phi = spinodal_field(g, c.init.mean, c.init.amplitude, c.init.kmax, c.init.seed);
    return s;
  }
  State s = read_snapshot(c.init.path);
  if (!(s.phi.grid() == g)) throw ConfigError("init.path: snapshot grid does not match grid section");
  s.t = c.t_start;
  return s;
}

ControlSignal control_signal(const RunConfig& c) {
  const Grid g = c.grid();
  if (c.control.kind == "zero") return ControlSignal::zero(g, c.t_start, c.t_end);
  json j;
  try {
    j = json::parse(read_file(c.control.path));
  } catch (const json::parse_error& e) {
    throw ConfigError(c.control.path + ": " + e.what());
  }
  ControlSignal u = value_estimate_from_json(j, g).best_control;
  if (u.tau() > c.t_start || u.T() < c.t_end) {
    throw ConfigError("control.path: control window does not cover [t_start, t_end]");
  }
  return u;
}

}  // namespace chns
