#include <doctest.h>

#include "spdc/model.hpp"

using namespace spdc;

namespace {
SystemParams paper_defaults() { return SystemParams{}; }
}  // namespace

TEST_CASE("derived linewidth matches the reference pump value") {
  // eta_P = 0.5, Q_int = 1e5, lambda_P = 780 nm  ->  2 pi x 3.84 GHz
  const Resonance r = derive_resonance(paper_defaults().pump);
  CHECK(r.gamma / (2 * M_PI * 1e9) == doctest::Approx(3.84).epsilon(0.01));
  CHECK(r.q_load == doctest::Approx(0.5e5));
  CHECK(r.eta == doctest::Approx(1.0 - r.q_load / r.q_int));
}

TEST_CASE("grid is uniform and symmetric in detuning") {
  const Resonance r = derive_resonance(paper_defaults().signal);
  const WavenumberGrid g = build_grid(r, 5, 2.0);
  REQUIRE(g.n_k == 5);
  for (int i = 0; i < 5; ++i)
    CHECK(g.detuning[i] == doctest::Approx((i - 2) * r.gamma).epsilon(1e-12));
  CHECK(g.dk == doctest::Approx((g.k[1] - g.k[0])).epsilon(1e-12));

  // doubling n_k keeps the endpoints
  const WavenumberGrid g2 = build_grid(r, 9, 2.0);
  CHECK(g2.detuning[0] == doctest::Approx(g.detuning[0]));
  CHECK(g2.detuning[8] == doctest::Approx(g.detuning[4]));
}

TEST_CASE("field enhancement on resonance and conjugation") {
  const SystemParams p = paper_defaults();
  const Resonance r = derive_resonance(p.signal);
  const double ring = p.ring_radius_um * 1e-6;
  const double kc = r.omega / r.v;
  const cplx on_res = field_enhancement(r, r.eta, kc, kc, +1, ring);
  CHECK(std::norm(on_res) == doctest::Approx(r.v * r.eta / (M_PI * ring * r.gamma)).epsilon(1e-12));
  const double k = kc + 3.0 * r.gamma / r.v;
  CHECK(field_enhancement(r, r.eta, k, kc, +1, ring) ==
        std::conj(field_enhancement(r, r.eta, k, kc, -1, ring)));
}

TEST_CASE("enhancement sum rule approaches eta/R") {
  // analytic Lorentzian integral: sum_k dk |F_ac|^2 -> eta/R
  const SystemParams p = paper_defaults();
  const Resonance r = derive_resonance(p.signal);
  const double ring = p.ring_radius_um * 1e-6;
  const WavenumberGrid g = build_grid(r, 4001, 200.0);
  double acc = 0.0;
  for (int i = 0; i < g.n_k; ++i)
    acc += g.dk * std::norm(field_enhancement(r, r.eta, g.k[i], g.k_center, +1, ring));
  CHECK(acc == doctest::Approx(r.eta / ring).epsilon(0.005));
}

TEST_CASE("coupling tensor is an exact rank-1 product") {
  SystemParams p = paper_defaults();
  p.signal.grid_points = p.idler.grid_points = 5;
  p.pump.grid_points = 7;
  const Model m = build_model(p);
  const CouplingSpec& cs = m.coupling;
  const auto lam = cs.materialize(0.37);
  // Lambda / (f f f) must be one constant across all indices
  cplx ratio0;
  bool first = true;
  for (int a = 0; a < cs.dim_s(); ++a)
    for (int b = 0; b < cs.dim_i(); ++b)
      for (int c = 0; c < cs.dim_p(); ++c) {
        const cplx denom = cs.f_signal[a] * cs.f_idler[b] * cs.f_pump[c] *
                           std::exp(I * (cs.ph_signal[a] + cs.ph_idler[b] - cs.ph_pump[c]) * 0.37);
        const cplx ratio = lam[(static_cast<size_t>(a) * cs.dim_i() + b) * cs.dim_p() + c] / denom;
        if (first) {
          ratio0 = ratio;
          first = false;
        }
        CHECK(std::abs(ratio - ratio0) < 1e-12 * std::abs(ratio0));
      }
  CHECK(std::abs(ratio0) == doctest::Approx(cs.scale).epsilon(1e-12));
}

TEST_CASE("coupling vanishes with chi2") {
  SystemParams p = paper_defaults();
  p.signal.grid_points = p.idler.grid_points = 5;
  p.pump.grid_points = 7;
  p.chi2_pm_per_v = 0.0;
  const Model m = build_model(p);
  CHECK(m.coupling.scale == 0.0);
}

TEST_CASE("center-frequency mismatch from the configured wavelengths") {
  SystemParams p = paper_defaults();
  p.signal.grid_points = p.idler.grid_points = 5;
  p.pump.grid_points = 7;
  p.assume_phase_matched = false;
  const Model m = build_model(p);
  const double c0 = constants::c0;
  const double expected = 2 * M_PI * c0 *
                          (1.0 / 1557.85e-9 + 1.0 / 1562.45e-9 - 1.0 / 780e-9);
  CHECK(m.coupling.delta_omega0 * m.gamma_p == doctest::Approx(expected).epsilon(1e-9));
  CHECK(m.coupling.delta_omega0 != 0.0);
}

TEST_CASE("initial pump amplitude carries N_P") {
  SystemParams p = paper_defaults();
  p.signal.grid_points = p.idler.grid_points = 5;
  const Model m = build_model(p);
  // 0.09 pJ at 780 nm is about 3.5e5 photons
  CHECK(m.n_pump == doctest::Approx(3.5e5).epsilon(0.02));
  CHECK(m.x0.squaredNorm() / m.n_pump == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("pulse spectrum narrows as the duration grows") {
  SystemParams p = paper_defaults();
  p.signal.grid_points = p.idler.grid_points = 5;
  auto spectral_width = [](const Model& m) {
    double mean = 0, var = 0, norm = 0;
    for (int i = 0; i < m.grid_p.n_k; ++i) {
      const double w = std::norm(m.x0[i]);
      norm += w;
      mean += w * m.grid_p.detuning[i];
    }
    mean /= norm;
    for (int i = 0; i < m.grid_p.n_k; ++i)
      var += std::norm(m.x0[i]) * std::pow(m.grid_p.detuning[i] - mean, 2);
    return std::sqrt(var / norm);
  };
  const Model m1 = build_model(p);
  p.pulse_duration_ns *= 4.0;
  p.pump.grid_points = 1281;  // keep the narrower pulse resolved
  const Model m2 = build_model(p);
  CHECK(spectral_width(m1) / spectral_width(m2) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("configuration validation rejects bad input") {
  SystemParams p = paper_defaults();
  p.signal.escape_efficiency = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = paper_defaults();
  p.signal.grid_points = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = paper_defaults();
  p.idler.grid_points = p.signal.grid_points + 2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("config json round trip") {
  SystemParams p = paper_defaults();
  p.pump_energy_pj = 0.123;
  p.signal.escape_efficiency = 0.77;
  const SystemParams q = params_from_json_string(params_to_json(p));
  CHECK(q.pump_energy_pj == doctest::Approx(0.123));
  CHECK(q.signal.escape_efficiency == doctest::Approx(0.77));
  CHECK(q.coupling_scale == doctest::Approx(p.coupling_scale));
}
