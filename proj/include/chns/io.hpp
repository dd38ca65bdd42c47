#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chns/audits.hpp"
#include "chns/control.hpp"
#include "chns/integrator.hpp"

namespace chns {

// Writes `content` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// CHNS1 field snapshot: "CHNS1\n", u32 version (1), u32 nx, u32 ny, f64 L,
// f64 t, then phi, ux, uy as row-major little-endian f64.
std::string encode_snapshot(const State& s);
State decode_snapshot(const std::string& bytes);
void write_snapshot(const std::filesystem::path& path, const State& s);
State read_snapshot(const std::filesystem::path& path);

// Columns t, mean_phi, E_phi, E_kin, E_total, u_L2, phi_H1, control_L2.
std::string diagnostics_csv(const std::vector<Diagnostics>& rows);

// Doubles are printed with 17 significant digits so they parse back exactly.
std::string format_double(double x);

nlohmann::ordered_json to_json(const ValueEstimate& v);
// Rebuilds the estimate; best_control is resynthesized from the mode
// coefficients on `grid`.
ValueEstimate value_estimate_from_json(const nlohmann::json& j, const Grid& grid);

nlohmann::ordered_json to_json(const AuditReport& r);
nlohmann::ordered_json to_json(const DppReport& r);

// Serializes with the given indent; non-finite numbers become null.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace chns
