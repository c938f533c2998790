#include "spdc/model.hpp"

#include <cmath>

namespace spdc {

using namespace constants;

Resonance derive_resonance(const ResonanceConfig& c) {
  Resonance r;
  r.omega = 2.0 * M_PI * c0 / (c.wavelength_nm * 1e-9);
  r.eta = c.escape_efficiency;
  r.q_int = c.q_intrinsic;
  r.q_load = (1.0 - r.eta) * r.q_int;
  if (r.q_load <= 0) throw ConfigError("derived loaded Q is not positive");
  r.gamma = r.omega / (2.0 * r.q_load);
  r.v = c.group_velocity_c * c0;
  return r;
}

WavenumberGrid build_grid(const Resonance& r, int n_k, double halfspan_linewidths) {
  if (n_k < 2) throw ConfigError("grid needs at least 2 points");
  if (halfspan_linewidths <= 0 || r.v <= 0) throw ConfigError("grid span and group velocity must be positive");
  WavenumberGrid g;
  g.n_k = n_k;
  g.k_center = r.omega / r.v;  // linearized dispersion reference
  const double span = 2.0 * halfspan_linewidths * r.gamma;  // rad/s
  g.dk = span / (r.v * (n_k - 1));
  g.k.resize(n_k);
  g.detuning.resize(n_k);
  for (int i = 0; i < n_k; ++i) {
    const double d = -halfspan_linewidths * r.gamma + span * i / (n_k - 1);
    g.detuning[i] = d;
    g.k[i] = g.k_center + d / r.v;
  }
  return g;
}

cplx field_enhancement(const Resonance& r, double eta_channel, double k,
                       double k_center, int sign, double ring_radius) {
  const double num = std::sqrt(r.v * r.gamma * eta_channel / (M_PI * ring_radius));
  const cplx den = r.v * (k_center - k) + cplx(0.0, sign >= 0 ? r.gamma : -r.gamma);
  return num / den;
}

cplx CouplingSpec::lambda_at(int mu1, int mu2, int mu3, double t) const {
  const double ph = delta_omega0 + ph_signal[mu1] + ph_idler[mu2] - ph_pump[mu3];
  return scale * f_signal[mu1] * f_idler[mu2] * f_pump[mu3] * std::exp(I * ph * t);
}

std::vector<cplx> CouplingSpec::materialize(double t) const {
  std::vector<cplx> out;
  out.reserve(static_cast<size_t>(dim_s()) * dim_i() * dim_p());
  for (int a = 0; a < dim_s(); ++a)
    for (int b = 0; b < dim_i(); ++b)
      for (int c = 0; c < dim_p(); ++c) out.push_back(lambda_at(a, b, c, t));
  return out;
}

namespace {

// Channel-stacked factor vector sqrt(dk) * F for one resonance: actual
// channel block first (escape factor eta), phantom block second (1-eta).
Vec channel_factors(const Resonance& r, const WavenumberGrid& g, double ring_radius,
                    int sign, bool conjugate) {
  Vec f(2 * g.n_k);
  const double sdk = std::sqrt(g.dk);
  for (int i = 0; i < g.n_k; ++i) {
    cplx fac = field_enhancement(r, r.eta, g.k[i], g.k_center, sign, ring_radius);
    cplx fph = field_enhancement(r, 1.0 - r.eta, g.k[i], g.k_center, sign, ring_radius);
    if (conjugate) {
      fac = std::conj(fac);
      fph = std::conj(fph);
    }
    f[i] = sdk * fac;
    f[g.n_k + i] = sdk * fph;
  }
  return f;
}

}  // namespace

Vec initial_pump_amplitude(const Model& m) {
  const double tau = m.params.pulse_duration_ns * 1e-9;
  const int n = m.grid_p.n_k;
  Vec x(n);
  const double norm = std::sqrt(m.pump.v * tau / std::sqrt(M_PI));
  for (int i = 0; i < n; ++i) {
    const double arg = tau * m.grid_p.detuning[i];
    x[i] = std::sqrt(m.grid_p.dk) * std::sqrt(m.n_pump) * norm * std::exp(-0.5 * arg * arg);
  }
  const double captured = x.squaredNorm() / std::max(m.n_pump, 1e-300);
  if (m.n_pump > 0 && (captured < 0.99 || captured > 1.01))
    throw ConfigError("pump grid does not hold the pulse spectrum (sum|x|^2/N_P = " +
                      std::to_string(captured) + "); refine or widen the pump grid");
  return x;
}

Model build_model(const SystemParams& p, bool lossless_signal_idler) {
  p.validate();
  Model m;
  m.params = p;
  m.pump = derive_resonance(p.pump);
  m.signal = derive_resonance(p.signal);
  m.idler = derive_resonance(p.idler);
  if (lossless_signal_idler) {
    // keep the loaded linewidths of the lossy configuration, route all of
    // the decay into the actual channel
    m.signal.eta = 1.0;
    m.idler.eta = 1.0;
  }
  m.gamma_p = m.pump.gamma;

  m.grid_p = build_grid(m.pump, p.pump.grid_points, p.pump.grid_halfspan_linewidths);
  m.grid_s = build_grid(m.signal, p.signal.grid_points, p.signal.grid_halfspan_linewidths);
  m.grid_i = build_grid(m.idler, p.idler.grid_points, p.idler.grid_halfspan_linewidths);

  const double ring_radius = p.ring_radius_um * 1e-6;
  CouplingSpec& cs = m.coupling;
  cs.nk_s = m.grid_s.n_k;
  cs.nk_i = m.grid_i.n_k;
  cs.nk_p = m.grid_p.n_k;
  cs.f_signal = channel_factors(m.signal, m.grid_s, ring_radius, +1, true);
  cs.f_idler = channel_factors(m.idler, m.grid_i, ring_radius, +1, true);
  // pump couples through the actual channel only
  cs.f_pump.resize(m.grid_p.n_k);
  for (int i = 0; i < m.grid_p.n_k; ++i)
    cs.f_pump[i] = std::sqrt(m.grid_p.dk) *
                   field_enhancement(m.pump, m.pump.eta, m.grid_p.k[i], m.grid_p.k_center, -1, ring_radius);

  auto stack2 = [](const RVec& d) {
    RVec out(2 * d.size());
    out << d, d;
    return out;
  };
  cs.ph_signal = stack2(m.grid_s.detuning) / m.gamma_p;
  cs.ph_idler = stack2(m.grid_i.detuning) / m.gamma_p;
  cs.ph_pump = m.grid_p.detuning / m.gamma_p;

  const double chi2 = p.chi2_pm_per_v * 1e-12;
  const double a_eff = p.effective_area_um2 * 1e-12;
  const double g = chi2 * ring_radius *
                   std::sqrt(hbar * m.signal.omega * m.idler.omega * m.pump.omega /
                             (4.0 * M_PI * eps0 * a_eff));
  cs.scale = p.coupling_scale * g / m.gamma_p;
  cs.delta_omega0 =
      p.assume_phase_matched ? 0.0 : (m.signal.omega + m.idler.omega - m.pump.omega) / m.gamma_p;

  m.n_pump = p.pump_energy_pj * 1e-12 / (hbar * m.pump.omega);
  m.x0 = initial_pump_amplitude(m);

  const double tau_scaled = p.pulse_duration_ns * 1e-9 * m.gamma_p;
  m.t0 = -p.t0_pulse_durations * tau_scaled;
  m.t1 = p.t1_inv_gamma_p;
  m.dt = p.dt_inv_gamma_p;
  m.save_dt = p.save_every_inv_gamma_p;
  return m;
}

}  // namespace spdc
