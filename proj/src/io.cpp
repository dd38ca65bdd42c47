#include "chns/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "chns/error.hpp"

namespace chns {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

constexpr char kMagic[] = "CHNS1\n";
constexpr std::size_t kMagicLen = 6;
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "CHNS1 I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw IoError("CHNS1: truncated input");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string encode_snapshot(const State& s) {
  const Grid& g = s.phi.grid();
  std::string out(kMagic, kMagicLen);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
  put<double>(out, g.length());
  put<double>(out, s.t);
  for (const ScalarField* f : {&s.phi, &s.u.x(), &s.u.y()}) {
    for (double v : f->values()) put<double>(out, v);
  }
  return out;
}

State decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kMagicLen || bytes.compare(0, kMagicLen, kMagic) != 0) {
    throw IoError("CHNS1: bad magic");
  }
  std::size_t pos = kMagicLen;
  const auto version = take<std::uint32_t>(bytes, pos);
  if (version != kVersion) throw IoError("CHNS1: unsupported version " + std::to_string(version));
  const auto nx = take<std::uint32_t>(bytes, pos);
  const auto ny = take<std::uint32_t>(bytes, pos);
  const auto L = take<double>(bytes, pos);
  const auto t = take<double>(bytes, pos);
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  if (bytes.size() - pos != 3 * n * sizeof(double)) throw IoError("CHNS1: payload size mismatch");
  Grid g(static_cast<int>(nx), static_cast<int>(ny), L);
  State s = State::rest(g, t);
  for (ScalarField* f : {&s.phi, &s.u.x(), &s.u.y()}) {
    for (double& v : f->values()) v = take<double>(bytes, pos);
  }
  return s;
}

void write_snapshot(const fs::path& path, const State& s) { write_atomic(path, encode_snapshot(s)); }

State read_snapshot(const fs::path& path) { return decode_snapshot(read_file(path)); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string diagnostics_csv(const std::vector<Diagnostics>& rows) {
  std::string out = "t,mean_phi,E_phi,E_kin,E_total,u_L2,phi_H1,control_L2\n";
  for (const auto& d : rows) {
    const double cols[] = {d.t, d.mean_phi, d.E_phi, d.E_kin, d.E_total, d.u_L2, d.phi_H1, d.control_L2};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) out += ',';
      out += format_double(cols[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

nlohmann::ordered_json to_json(const ValueEstimate& v) {
  nlohmann::ordered_json j;
  j["value"] = number(v.value);
  j["evals"] = v.evals;
  j["seed"] = v.seed;
  j["window"] = {{"tau", v.window.tau}, {"T", v.window.T}};
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (const auto& m : v.best_control.modes()) modes.push_back(m);
  j["control"] = {{"breakpoints", v.best_control.breakpoints()}, {"modes", modes}};
  j["history"] = v.history;
  return j;
}

ValueEstimate value_estimate_from_json(const nlohmann::json& j, const Grid& grid) {
  try {
    const auto& c = j.at("control");
    auto breakpoints = c.at("breakpoints").get<std::vector<double>>();
    auto modes = c.at("modes").get<std::vector<std::vector<double>>>();
    ControlBasis basis(grid);
    ValueEstimate v{j.at("value").get<double>(), basis.signal(std::move(breakpoints), std::move(modes)),
                    j.at("evals").get<long>(), j.at("seed").get<std::uint64_t>(),
                    Window{j.at("window").at("tau").get<double>(), j.at("window").at("T").get<double>()},
                    {}};
    if (j.contains("history")) v.history = j.at("history").get<std::vector<double>>();
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("value estimate JSON: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["fitted_constant"] = number(r.fitted_constant);
  j["fitted_order"] = number(r.fitted_order);
  j["samples"] = r.samples;
  auto details = nlohmann::ordered_json::array();
  for (const auto& d : r.details) {
    nlohmann::ordered_json row;
    row["label"] = d.label;
    for (const auto& [k, v] : d.values) row[k] = number(v);
    details.push_back(std::move(row));
  }
  j["details"] = std::move(details);
  return j;
}

nlohmann::ordered_json to_json(const DppReport& r) {
  nlohmann::ordered_json j;
  j["t_mid"] = r.t_mid;
  j["v_tau_optimizer"] = number(r.v_tau_optimizer);
  j["v_tau"] = number(r.v_tau);
  j["best_concat"] = number(r.best_concat);
  j["residual"] = number(r.residual);
  j["relative_residual"] = number(r.v_tau != 0.0 ? r.residual / r.v_tau : 0.0);
  j["one_sided_slack"] = number(r.one_sided_slack);
  j["evals"] = r.evals;
  auto cands = nlohmann::ordered_json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"label", c.label},
                     {"first_leg_cost", number(c.first_leg_cost)},
                     {"mid_value", number(c.mid_value)},
                     {"concat_value", number(c.concat_value)},
                     {"concat_direct", number(c.concat_direct)}});
  }
  j["candidates"] = std::move(cands);
  return j;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace chns
