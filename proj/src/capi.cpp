#include "chns/chns.h"

#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "chns/commands.hpp"
#include "chns/config.hpp"
#include "chns/control.hpp"
#include "chns/error.hpp"

struct chns_session {
  chns::RunConfig config;
  std::string output_dir;
  std::string hash;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

chns_status fail(chns_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class Fn>
chns_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const chns::ConfigError& e) {
    return fail(CHNS_E_CONFIG, e.what());
  } catch (const chns::BlowUpError& e) {
    return fail(CHNS_E_NUMERIC, e.what());
  } catch (const chns::IoError& e) {
    return fail(CHNS_E_IO, e.what());
  } catch (const chns::Error& e) {
    return fail(CHNS_E_INVALID_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(CHNS_E_CONFIG, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(CHNS_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CHNS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CHNS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CHNS_E_INTERNAL, "unknown exception");
  }
}

chns_status make_session(chns::RunConfig cfg, chns_session** out) {
  auto* s = new chns_session{std::move(cfg), {}, {}, {}};
  s->output_dir = s->config.output_dir;
  s->hash = chns::config_hash(s->config);
  *out = s;
  return CHNS_OK;
}

template <class Cmd>
chns_status run(chns_session* s, chns::Invocation inv, Cmd cmd) {
  if (!s) return fail(CHNS_E_INVALID_ARGUMENT, "null session");
  return guarded([&] {
    inv.output_dir = s->output_dir;
    const chns::CommandResult r = cmd(s->config, inv);
    s->summary = r.summary;
    return r.pass ? CHNS_OK : CHNS_E_AUDIT_FAILED;
  });
}

}  // namespace

extern "C" {

const char* chns_version(void) { return chns::library_version(); }

const char* chns_status_string(chns_status status) {
  switch (status) {
    case CHNS_OK: return "ok";
    case CHNS_E_CONFIG: return "config error";
    case CHNS_E_NUMERIC: return "numerical failure";
    case CHNS_E_AUDIT_FAILED: return "check failed";
    case CHNS_E_IO: return "i/o error";
    case CHNS_E_INVALID_ARGUMENT: return "invalid argument";
    case CHNS_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* chns_last_error(void) { return g_last_error.c_str(); }

chns_status chns_session_create(const char* config_json, chns_session** out) {
  if (!out) return fail(CHNS_E_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  if (!config_json) return fail(CHNS_E_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw chns::ConfigError(e.what());
    }
    return make_session(chns::parse_config(j), out);
  });
}

chns_status chns_session_create_from_file(const char* path, chns_session** out) {
  if (!out) return fail(CHNS_E_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  if (!path) return fail(CHNS_E_INVALID_ARGUMENT, "null path");
  return guarded([&] { return make_session(chns::load_config(path), out); });
}

void chns_session_destroy(chns_session* session) { delete session; }

chns_status chns_session_set_seed(chns_session* session, uint64_t seed) {
  if (!session) return fail(CHNS_E_INVALID_ARGUMENT, "null session");
  chns::override_seed(session->config, seed);
  session->hash = chns::config_hash(session->config);
  return CHNS_OK;
}

chns_status chns_session_set_output_dir(chns_session* session, const char* dir) {
  if (!session || !dir || !*dir) return fail(CHNS_E_INVALID_ARGUMENT, "null session or empty directory");
  session->output_dir = dir;
  return CHNS_OK;
}

const char* chns_session_config_hash(const chns_session* session) { return session ? session->hash.c_str() : ""; }

const char* chns_session_summary(const chns_session* session) { return session ? session->summary.c_str() : ""; }

chns_status chns_simulate(chns_session* session) {
  return run(session, {"simulate", {}, {}, {}}, chns::cmd_simulate);
}

chns_status chns_optimize(chns_session* session) {
  return run(session, {"optimize", {}, {}, {}}, chns::cmd_optimize);
}

chns_status chns_dpp_check(chns_session* session, int use_t_mid, double t_mid) {
  chns::Invocation inv{"dpp-check", {}, {}, {}};
  if (use_t_mid) inv.t_mid = t_mid;
  return run(session, inv, chns::cmd_dpp_check);
}

chns_status chns_hjb_check(chns_session* session) {
  return run(session, {"hjb-check", {}, {}, {}}, chns::cmd_hjb_check);
}

chns_status chns_audit(chns_session* session, const char* name) {
  if (!name) return fail(CHNS_E_INVALID_ARGUMENT, "null audit name");
  return run(session, {"audit", name, {}, {}}, chns::cmd_audit);
}

chns_status chns_hamiltonian_closed(double p_norm, double radius, double* out) {
  if (!out) return fail(CHNS_E_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = chns::hamiltonian_closed(p_norm, radius);
    return CHNS_OK;
  });
}

}  // extern "C"
