#include "spdc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spdc {

using nlohmann::json;

void SystemParams::validate() const {
  auto check_res = [](const ResonanceConfig& r, const char* name) {
    if (r.wavelength_nm <= 0) throw ConfigError(std::string(name) + ": wavelength must be positive");
    if (r.q_intrinsic <= 0) throw ConfigError(std::string(name) + ": intrinsic Q must be positive");
    if (r.escape_efficiency < 0 || r.escape_efficiency > 1)
      throw ConfigError(std::string(name) + ": escape efficiency must lie in [0,1]");
    if (r.escape_efficiency >= 1.0 && r.q_intrinsic < 1e18)
      throw ConfigError(std::string(name) + ": eta=1 requires q_intrinsic=inf; use a lossless reference run instead");
    if (r.group_velocity_c <= 0) throw ConfigError(std::string(name) + ": group velocity must be positive");
    if (r.grid_points < 2) throw ConfigError(std::string(name) + ": grid needs at least 2 points");
    if (r.grid_halfspan_linewidths <= 0) throw ConfigError(std::string(name) + ": grid half-span must be positive");
  };
  check_res(pump, "pump");
  check_res(signal, "signal");
  check_res(idler, "idler");
  if (signal.grid_points != idler.grid_points)
    throw ConfigError("signal and idler grids must have the same number of points");
  if (ring_radius_um <= 0) throw ConfigError("ring radius must be positive");
  if (effective_area_um2 <= 0) throw ConfigError("effective area must be positive");
  if (pump_energy_pj < 0) throw ConfigError("pump energy must be non-negative");
  if (pulse_duration_ns <= 0) throw ConfigError("pulse duration must be positive");
  if (dt_inv_gamma_p <= 0 || t1_inv_gamma_p <= 0 || t0_pulse_durations <= 0)
    throw ConfigError("simulation window and step must be positive");
  if (supermodes_signal < 1 || supermodes_pump < 1 || fock_cutoff < 1)
    throw ConfigError("truncation M, L, N must all be at least 1");
  if (chi_grid_points < 8 || wigner_grid_points < 8)
    throw ConfigError("phase-space grids need at least 8 points");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

namespace {

void res_to_json(json& j, const ResonanceConfig& r) {
  j = json{{"wavelength_nm", r.wavelength_nm},
           {"q_intrinsic", r.q_intrinsic},
           {"escape_efficiency", r.escape_efficiency},
           {"group_velocity_c", r.group_velocity_c},
           {"grid_points", r.grid_points},
           {"grid_halfspan_linewidths", r.grid_halfspan_linewidths}};
}

void res_from_json(const json& j, ResonanceConfig& r) {
  if (j.contains("wavelength_nm")) r.wavelength_nm = j.at("wavelength_nm").get<double>();
  if (j.contains("q_intrinsic")) r.q_intrinsic = j.at("q_intrinsic").get<double>();
  if (j.contains("escape_efficiency")) r.escape_efficiency = j.at("escape_efficiency").get<double>();
  if (j.contains("group_velocity_c")) r.group_velocity_c = j.at("group_velocity_c").get<double>();
  if (j.contains("grid_points")) r.grid_points = j.at("grid_points").get<int>();
  if (j.contains("grid_halfspan_linewidths")) r.grid_halfspan_linewidths = j.at("grid_halfspan_linewidths").get<double>();
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string params_to_json(const SystemParams& p) {
  json j;
  res_to_json(j["pump"], p.pump);
  res_to_json(j["signal"], p.signal);
  res_to_json(j["idler"], p.idler);
  j["ring"] = {{"radius_um", p.ring_radius_um},
               {"chi2_pm_per_V", p.chi2_pm_per_v},
               {"effective_area_um2", p.effective_area_um2},
               {"coupling_scale", p.coupling_scale}};
  j["pulse"] = {{"energy_pJ", p.pump_energy_pj}, {"duration_ns", p.pulse_duration_ns}};
  j["assume_phase_matched"] = p.assume_phase_matched;
  j["time"] = {{"t0_pulse_durations", p.t0_pulse_durations},
               {"t1_inv_gamma_p", p.t1_inv_gamma_p},
               {"dt_inv_gamma_p", p.dt_inv_gamma_p},
               {"save_every_inv_gamma_p", p.save_every_inv_gamma_p},
               {"identity_tolerance", p.identity_tolerance}};
  j["truncation"] = {{"supermodes_signal", p.supermodes_signal},
                     {"supermodes_pump", p.supermodes_pump},
                     {"fock_cutoff", p.fock_cutoff},
                     {"dt_inv_gamma_p", p.nongauss_dt_inv_gamma_p}};
  j["wigner"] = {{"chi_grid_points", p.chi_grid_points},
                 {"chi_grid_halfwidth", p.chi_grid_halfwidth},
                 {"grid_points", p.wigner_grid_points},
                 {"grid_halfwidth", p.wigner_grid_halfwidth},
                 {"auto_widen", p.wigner_auto_widen}};
  j["threads"] = p.threads;
  return j.dump(2);
}

static SystemParams params_from_json(const json& j) {
  SystemParams p;
  if (j.contains("pump")) res_from_json(j.at("pump"), p.pump);
  if (j.contains("signal")) res_from_json(j.at("signal"), p.signal);
  if (j.contains("idler")) res_from_json(j.at("idler"), p.idler);
  if (j.contains("ring")) {
    const auto& r = j.at("ring");
    get_if(r, "radius_um", p.ring_radius_um);
    get_if(r, "chi2_pm_per_V", p.chi2_pm_per_v);
    get_if(r, "effective_area_um2", p.effective_area_um2);
    get_if(r, "coupling_scale", p.coupling_scale);
  }
  if (j.contains("pulse")) {
    const auto& q = j.at("pulse");
    get_if(q, "energy_pJ", p.pump_energy_pj);
    get_if(q, "duration_ns", p.pulse_duration_ns);
  }
  get_if(j, "assume_phase_matched", p.assume_phase_matched);
  if (j.contains("time")) {
    const auto& t = j.at("time");
    get_if(t, "t0_pulse_durations", p.t0_pulse_durations);
    get_if(t, "t1_inv_gamma_p", p.t1_inv_gamma_p);
    get_if(t, "dt_inv_gamma_p", p.dt_inv_gamma_p);
    get_if(t, "save_every_inv_gamma_p", p.save_every_inv_gamma_p);
    get_if(t, "identity_tolerance", p.identity_tolerance);
  }
  if (j.contains("truncation")) {
    const auto& t = j.at("truncation");
    get_if(t, "supermodes_signal", p.supermodes_signal);
    get_if(t, "supermodes_pump", p.supermodes_pump);
    get_if(t, "fock_cutoff", p.fock_cutoff);
    get_if(t, "dt_inv_gamma_p", p.nongauss_dt_inv_gamma_p);
  }
  if (j.contains("wigner")) {
    const auto& w = j.at("wigner");
    get_if(w, "chi_grid_points", p.chi_grid_points);
    get_if(w, "chi_grid_halfwidth", p.chi_grid_halfwidth);
    get_if(w, "grid_points", p.wigner_grid_points);
    get_if(w, "grid_halfwidth", p.wigner_grid_halfwidth);
    get_if(w, "auto_widen", p.wigner_auto_widen);
  }
  get_if(j, "threads", p.threads);
  p.validate();
  return p;
}

SystemParams params_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return params_from_json(j);
}

SystemParams params_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_json_string(ss.str());
}

}  // namespace spdc
