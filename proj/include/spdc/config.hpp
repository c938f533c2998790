#pragma once

#include <stdexcept>
#include <string>

#include "spdc/types.hpp"

namespace spdc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One ring resonance as configured: wavelength, loss, escape efficiency,
// group velocity in the attached channels, and its wavenumber grid.
struct ResonanceConfig {
  double wavelength_nm = 0.0;
  double q_intrinsic = 0.0;
  double escape_efficiency = 0.0;
  double group_velocity_c = 0.25;  // fraction of vacuum c, same in both channels
  int grid_points = 0;
  double grid_halfspan_linewidths = 8.0;
};

struct SystemParams {
  ResonanceConfig pump{780.0, 1e5, 0.5, 0.25, 321, 8.0};
  ResonanceConfig signal{1557.85, 1e6, 0.95, 0.25, 41, 8.0};
  ResonanceConfig idler{1562.45, 1e6, 0.95, 0.25, 41, 8.0};

  // ring and material
  double ring_radius_um = 30.0;
  double chi2_pm_per_v = 220.0;
  double effective_area_um2 = 0.56;
  // Dimensionless normalization applied to the coupling prefactor,
  // 1/sqrt(2 (2pi)^3).  Channel-mode normalization conventions differ
  // between sources by powers of 2*pi; this value reproduces both the
  // low-energy conversion-efficiency plateau (1.66e-4 at critical
  // coupling) and the reference squeezing spectrum (r1 = 3.7 at 0.09 pJ,
  // eta = 0.95).
  double coupling_scale = 0.04489678053129164;

  // pump pulse
  double pump_energy_pj = 0.09;
  double pulse_duration_ns = 0.5;

  // When true the three resonance centers are taken as exactly energy
  // matched (delta_omega0 = 0); the configured wavelengths still set the
  // photon energies, linewidths and grids.  The listed wavelengths are
  // rounded values, so this is the default.
  bool assume_phase_matched = true;

  // simulation window, in units of the pulse duration / inverse pump
  // half-linewidth as indicated by the key names
  double t0_pulse_durations = 5.0;     // start at -5 tau
  double t1_inv_gamma_p = 30.0;        // end at 30 / Gamma_P
  double dt_inv_gamma_p = 0.005;       // RK4 step
  double save_every_inv_gamma_p = 0.1; // decomposition / observer cadence
  double identity_tolerance = 1e-8;

  // non-Gaussian truncation
  int supermodes_signal = 2;  // M
  int supermodes_pump = 1;    // L
  int fock_cutoff = 16;       // N
  double nongauss_dt_inv_gamma_p = 0.1;

  // Wigner evaluation
  int chi_grid_points = 64;
  double chi_grid_halfwidth = 6.0;
  int wigner_grid_points = 101;
  double wigner_grid_halfwidth = 4.0;
  bool wigner_auto_widen = true;

  int threads = 1;

  void validate() const;
};

SystemParams params_from_json_file(const std::string& path);
SystemParams params_from_json_string(const std::string& text);
std::string params_to_json(const SystemParams& p);

}  // namespace spdc
