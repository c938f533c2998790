#include <doctest.h>

#include "spdc/gaussian.hpp"
#include "spdc/oracle.hpp"

using namespace spdc;

namespace {

SystemParams small_params(double energy_pj = 0.01) {
  SystemParams p;
  p.signal.grid_points = p.idler.grid_points = 9;
  p.pump.grid_points = 161;
  p.pump_energy_pj = energy_pj;
  p.dt_inv_gamma_p = 0.01;
  return p;
}

}  // namespace

TEST_CASE("zero coupling leaves the vacuum fixed point alone") {
  SystemParams p = small_params();
  p.chi2_pm_per_v = 0.0;
  const Model m = build_model(p);
  const GaussianState s0 = initial_gaussian_state(m);
  const GaussianRhs rhs = gaussian_rhs(m.coupling, s0);
  CHECK(rhs.dx.norm() == 0.0);
  CHECK(rhs.dv_ss.norm() == 0.0);
  CHECK(rhs.dw_is.norm() == 0.0);

  const IntegrationResult res = integrate(m);
  CHECK((res.state.v_ss - Mat::Identity(18, 18)).norm() < 1e-14);
  CHECK(res.state.w_si.norm() < 1e-14);
  CHECK(pump_depletion(res.state.x, m.n_pump) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rhs contractions match their definitions") {
  SystemParams p = small_params(0.05);
  const Model m = build_model(p);
  GaussianState s = initial_gaussian_state(m);
  // put the state somewhere non-trivial first
  s.w_si.setRandom();
  s.w_si *= 0.1;
  s.w_is.setRandom();
  s.w_is *= 0.1;
  s.t = 0.31;
  const GaussianRhs r = gaussian_rhs(m.coupling, s);
  const CouplingSpec& cs = m.coupling;

  // independent recomputation of Z and Delta from materialized Lambda
  const auto lam = cs.materialize(s.t);
  auto at = [&](int a, int b, int c) {
    return lam[(static_cast<size_t>(a) * cs.dim_i() + b) * cs.dim_p() + c];
  };
  Mat z = Mat::Zero(cs.dim_s(), cs.dim_i());
  for (int a = 0; a < cs.dim_s(); ++a)
    for (int b = 0; b < cs.dim_i(); ++b)
      for (int c = 0; c < cs.dim_p(); ++c) z(a, b) += at(a, b, c) * s.x[c];
  CHECK((z - r.z).cwiseAbs().maxCoeff() < 1e-12 * z.cwiseAbs().maxCoeff());

  const Mat mwv = s.w_si * s.v_ii.transpose();
  Vec delta = Vec::Zero(cs.dim_p());
  for (int c = 0; c < cs.dim_p(); ++c)
    for (int a = 0; a < cs.dim_s(); ++a)
      for (int b = 0; b < cs.dim_i(); ++b) delta[c] += std::conj(at(a, b, c)) * mwv(a, b);
  CHECK((delta - r.delta).cwiseAbs().maxCoeff() < 1e-12 * delta.cwiseAbs().maxCoeff());

  // block reading of the matrix ODEs
  CHECK((r.dv_ss + I * z * s.w_is.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((r.dv_ii + I * z.transpose() * s.w_si.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((r.dw_si + I * z * s.v_ii.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((r.dw_is + I * z.transpose() * s.v_ss.conjugate()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((r.dx + I * delta).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single-mode constant drive reproduces the two-mode squeezer") {
  // n_k = 1, no phantom coupling, zero detuning: V = cosh(|z|t),
  // W = -i e^{i arg z} sinh(|z|t)
  TinyModel tm;
  tm.lambda = cplx(0.021, 0.013);
  tm.x0 = cplx(2.0, 0.0);
  tm.t1 = 2.0;
  tm.dt = 1e-4;
  Model m = tiny_gaussian_model(tm);
  // suppress depletion so the drive stays constant: enormous pump
  m.x0[0] = 1e6;
  m.n_pump = 1e12;
  m.dt = 1e-5;
  m.t1 = 2e-3;
  const IntegrationResult res = integrate(m);
  const cplx z = tm.lambda / std::abs(tm.lambda) * std::abs(tm.lambda) * 1e6;
  const double zt = std::abs(z) * (m.t1 - m.t0);
  CHECK(std::abs(res.state.v_ss(0, 0) - std::cosh(zt)) < 1e-8 * std::cosh(zt));
  const cplx w_expect = -I * (z / std::abs(z)) * std::sinh(zt);
  CHECK(std::abs(res.state.w_si(0, 0) - w_expect) < 1e-8 * std::abs(w_expect));
}

TEST_CASE("integration preserves the Bogoliubov identities and Manley-Rowe") {
  SystemParams p = small_params(0.3);
  p.dt_inv_gamma_p = 0.004;
  const Model m = build_model(p);
  IntegrateOptions opt;
  const IntegrationResult res = integrate(m, opt);
  CHECK(res.max_identity_residual < 1e-8);

  // Manley-Rowe along the whole run
  for (const auto& s : res.series) {
    const double converted = m.n_pump - s.n_pump;
    if (s.pair_number > 1e-6 * m.n_pump)
      CHECK(std::abs(converted - s.pair_number) < 1e-4 * s.pair_number);
  }

  // pair symmetry at the end
  const MomentSet mom = moments(res.state);
  CHECK(std::abs(std::real(mom.n_ss.trace() - mom.n_ii.trace())) <
        1e-9 * std::abs(std::real(mom.n_ss.trace())));

  // conversion efficiency equals depletion
  const double eff = std::real(mom.n_ss.trace()) / m.n_pump;
  CHECK(eff == doctest::Approx(pump_depletion(res.state.x, m.n_pump)).epsilon(1e-3));
}

TEST_CASE("moments match their closed forms") {
  SystemParams p = small_params(0.2);
  const Model m = build_model(p);
  const IntegrationResult res = integrate(m);
  const MomentSet mom = moments(res.state);
  CHECK((mom.m_si - res.state.w_si * res.state.v_ii.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // Hermitian positive semidefinite occupations
  CHECK((mom.n_ss - mom.n_ss.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(mom.n_ss);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("vacuum moments and scalar squeezer values") {
  GaussianState s;
  const int n = 4;
  s.v_ss = Mat::Identity(n, n);
  s.v_ii = Mat::Identity(n, n);
  s.w_si = Mat::Zero(n, n);
  s.w_is = Mat::Zero(n, n);
  MomentSet mom = moments(s);
  CHECK(mom.m_si.norm() == 0.0);
  CHECK(mom.n_ss.norm() == 0.0);

  const double r = 0.8;
  s.v_ss *= std::cosh(r);
  s.v_ii *= std::cosh(r);
  s.w_si = std::sinh(r) * Mat::Identity(n, n);
  s.w_is = std::sinh(r) * Mat::Identity(n, n);
  mom = moments(s);
  CHECK(std::real(mom.m_si(0, 0)) == doctest::Approx(std::sinh(r) * std::cosh(r)));
  CHECK(std::real(mom.n_ss(0, 0)) == doctest::Approx(std::sinh(r) * std::sinh(r)));
}

TEST_CASE("depletion reporting clamps tiny negatives") {
  Vec x = Vec::Ones(3);
  const double n_pump = x.squaredNorm() * (1.0 - 1e-14);
  CHECK(pump_depletion(x, n_pump) == 0.0);
  CHECK_THROWS_AS(pump_depletion(x, 0.0), NumericalError);
}

TEST_CASE("dyson norm vanishes without coupling and accumulates otherwise") {
  SystemParams p = small_params(0.05);
  p.chi2_pm_per_v = 0.0;
  IntegrateOptions opt;
  opt.accumulate_dyson = true;
  const IntegrationResult res0 = integrate(build_model(p), opt);
  CHECK(res0.dyson.norm1 == doctest::Approx(0.0));

  SystemParams p1 = small_params(0.05);
  const IntegrationResult res1 = integrate(build_model(p1), opt);
  CHECK(res1.dyson.norm1 > 0.0);
  CHECK(res1.dyson.monotone);

  // against the materialized first-order tensor
  const Model m = build_model(p1);
  const auto o = dyson_tensor(m);
  double norm2 = 0.0;
  for (const cplx& v : o) norm2 += std::norm(v);
  CHECK(res1.dyson.norm1 == doctest::Approx(norm2).epsilon(2e-2));
}

TEST_CASE("RK4 halving sharpens the identity residual by about 16x") {
  SystemParams p = small_params(0.3);
  p.dt_inv_gamma_p = 0.08;
  p.identity_tolerance = 1.0;  // do not throw, just measure
  const IntegrationResult coarse = integrate(build_model(p));
  p.dt_inv_gamma_p = 0.04;
  const IntegrationResult fine = integrate(build_model(p));
  const double ratio = coarse.max_identity_residual / fine.max_identity_residual;
  CHECK(ratio > 8.0);
  CHECK(ratio < 40.0);
}

TEST_CASE("t0 independence of the interaction-picture result") {
  SystemParams p = small_params(0.05);
  const IntegrationResult a = integrate(build_model(p));
  p.t0_pulse_durations += 2.0;
  const IntegrationResult b = integrate(build_model(p));
  const double pairs_a = std::real(moments(a.state).n_ss.trace());
  const double pairs_b = std::real(moments(b.state).n_ss.trace());
  CHECK(pairs_a == doctest::Approx(pairs_b).epsilon(1e-3));
}
