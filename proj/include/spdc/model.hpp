#pragma once

#include <vector>

#include "spdc/config.hpp"
#include "spdc/types.hpp"

namespace spdc {

// Derived per-resonance quantities, SI units.
struct Resonance {
  double omega = 0.0;    // rad/s
  double gamma = 0.0;    // half-linewidth, rad/s
  double eta = 0.0;      // escape efficiency into the actual channel
  double v = 0.0;        // group velocity, m/s
  double q_load = 0.0;
  double q_int = 0.0;
};

Resonance derive_resonance(const ResonanceConfig& c);

// Uniform wavenumber grid around one resonance.  The actual and phantom
// channels share the same detuning structure, so one grid serves both.
struct WavenumberGrid {
  int n_k = 0;
  double k_center = 0.0;  // 1/m
  double dk = 0.0;        // 1/m
  RVec k;                 // 1/m
  RVec detuning;          // v*(k - K), rad/s
};

WavenumberGrid build_grid(const Resonance& r, int n_k, double halfspan_linewidths);

// Lorentzian field-enhancement factor F_{nJ±}(k).  eta_channel is the
// escape factor of the channel in question: eta for the actual channel,
// 1-eta for the phantom one.
cplx field_enhancement(const Resonance& r, double eta_channel, double k,
                       double k_center, int sign, double ring_radius);

// The SPDC coupling in factorized form.  All frequencies are expressed in
// units of the pump half-linewidth; Λ(t) at full indices is
//   scale * f_signal[μ1] * f_idler[μ2] * f_pump[μ3]
//        * exp(i (dω0 + ph_s[μ1] + ph_i[μ2] - ph_p[μ3]) t).
// Signal and idler index vectors stack the actual channel first, then the
// phantom channel; the pump carries the actual channel only.
struct CouplingSpec {
  int nk_s = 0, nk_i = 0, nk_p = 0;
  Vec f_signal, f_idler, f_pump;     // 2nk_s, 2nk_i, nk_p entries
  RVec ph_signal, ph_idler, ph_pump; // detuning freqs / Gamma_P
  double scale = 0.0;                // |Λ| prefactor in Gamma_P units
  double delta_omega0 = 0.0;         // (ω_S + ω_I - ω_P) / Gamma_P

  int dim_s() const { return 2 * nk_s; }
  int dim_i() const { return 2 * nk_i; }
  int dim_p() const { return nk_p; }

  cplx lambda_at(int mu1, int mu2, int mu3, double t) const;
  // Full 3-index tensor at time t, index order (mu1, mu2, mu3) row-major.
  std::vector<cplx> materialize(double t) const;
};

struct Model {
  SystemParams params;
  Resonance pump, signal, idler;
  WavenumberGrid grid_p, grid_s, grid_i;
  CouplingSpec coupling;
  Vec x0;              // initial pump amplitude, sum|x0|^2 = N_P
  double n_pump = 0.0; // photon number E/(hbar w_P)
  double gamma_p = 0.0;
  double t0 = 0.0, t1 = 0.0, dt = 0.0, save_dt = 0.0;  // Gamma_P units
};

// Assembles grids, enhancement factors, coupling and the initial pump
// amplitude.  When lossless_signal_idler is set the signal/idler escape
// efficiencies are overridden to 1 at fixed loaded linewidth (the
// reference configuration for the stretching analysis).
Model build_model(const SystemParams& p, bool lossless_signal_idler = false);

Vec initial_pump_amplitude(const Model& m);

}  // namespace spdc
