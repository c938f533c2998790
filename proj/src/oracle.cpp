#include "spdc/oracle.hpp"

#include <cmath>

namespace spdc {

namespace {

// modes on the shared-cutoff product basis: 0 = signal, 1 = idler, 2 = pump
std::shared_ptr<const FockBasis> tiny_basis(int cutoff) {
  return std::make_shared<FockBasis>(FockBasis::build(1, 1, cutoff, false));
}

}  // namespace

TinyEvolveResult oracle_evolve(const TinyModel& tm, int save_every) {
  auto basis = tiny_basis(tm.cutoff);
  TinyEvolveResult out;
  out.ket.basis = basis;
  // coherent pump x vacuum signal/idler
  const Mat disp = displacement_matrix(tm.x0, tm.cutoff);
  out.ket.c = Vec::Zero(basis->dim());
  std::vector<uint8_t> occ(3, 0);
  for (int n = 0; n <= tm.cutoff; ++n) {
    occ[2] = static_cast<uint8_t>(n);
    out.ket.c[basis->find(occ)] = disp(n, 0);
  }
  out.ket.c /= out.ket.c.norm();

  MonomialOp pair_up(*basis, {{0, 1}, {2}});    // a+_S a+_I b_P
  MonomialOp pair_down(*basis, {{2}, {1, 0}});  // b+_P a_I a_S
  AssembledHamiltonian h;
  h.ops = {&pair_up, &pair_down};
  h.coeffs = {0.0, 0.0};

  const double phase_freq = tm.delta_omega0 + tm.det_s + tm.det_i - tm.det_p;
  const long nstep = std::lround(std::ceil((tm.t1 - tm.t0) / tm.dt));
  const double dt = (tm.t1 - tm.t0) / nstep;

  const RVec pop0 = mode_populations(out.ket);
  const double charge0 = 2.0 * pop0[2] + pop0[0] + pop0[1];
  auto record = [&](double t) {
    const RVec pop = mode_populations(out.ket);
    out.populations.conservativeResize(out.populations.rows() + 1, 3);
    out.populations.row(out.populations.rows() - 1) = pop.transpose();
    out.times.push_back(t);
    const double charge = 2.0 * pop[2] + pop[0] + pop[1];
    out.charge_drift = std::max(out.charge_drift, std::abs(charge - charge0) / charge0);
  };

  for (long step = 0; step < nstep; ++step) {
    const double t = tm.t0 + step * dt;
    if (step % save_every == 0) record(t);
    const cplx c = tm.lambda * std::exp(I * phase_freq * (t + 0.5 * dt));
    h.coeffs[0] = c;
    h.coeffs[1] = std::conj(c);
    evolve_exp(h, dt, out.ket.c);
  }
  record(tm.t1);

  // weight on the cutoff boundary
  double bw = 0.0;
  for (int i = 0; i < basis->dim(); ++i) {
    const auto& o = basis->occupations(i);
    if (o[0] == tm.cutoff || o[1] == tm.cutoff || o[2] == tm.cutoff)
      bw += std::norm(out.ket.c[i]);
  }
  out.boundary_weight = bw;
  return out;
}

Model tiny_gaussian_model(const TinyModel& tm, double identity_tol) {
  Model m;
  m.params.identity_tolerance = identity_tol;
  CouplingSpec& cs = m.coupling;
  cs.nk_s = cs.nk_i = cs.nk_p = 1;
  cs.f_signal = Vec::Zero(2);
  cs.f_idler = Vec::Zero(2);
  cs.f_pump = Vec::Ones(1);
  cs.f_signal[0] = 1.0;
  cs.f_idler[0] = 1.0;
  cs.ph_signal = RVec::Zero(2);
  cs.ph_idler = RVec::Zero(2);
  cs.ph_pump = RVec::Zero(1);
  cs.ph_signal[0] = cs.ph_signal[1] = tm.det_s;
  cs.ph_idler[0] = cs.ph_idler[1] = tm.det_i;
  cs.ph_pump[0] = tm.det_p;
  cs.scale = std::abs(tm.lambda);
  cs.delta_omega0 = tm.delta_omega0;
  // fold the coupling phase into f_pump so that scale stays real-positive
  cs.f_pump[0] = tm.lambda / std::max(std::abs(tm.lambda), 1e-300);
  m.x0 = Vec::Constant(1, tm.x0);
  m.n_pump = std::norm(tm.x0);
  m.gamma_p = 1.0;
  m.t0 = tm.t0;
  m.t1 = tm.t1;
  m.dt = tm.dt;
  m.save_dt = 20 * tm.dt;
  return m;
}

PipelineComparison compare_pipeline(const TinyModel& tm, int fock_cutoff_ng) {
  // oracle reference
  const TinyEvolveResult oracle = oracle_evolve(tm);
  const RVec pop_oracle = mode_populations(oracle.ket);

  // Gaussian + supermode pipeline
  Model gm = tiny_gaussian_model(tm);
  SupermodeTruncation tr;
  tr.m = 1;
  tr.l = 1;
  tr.n = fock_cutoff_ng;
  tr.sector = true;
  NonGaussEvolver evolver(tr);
  PhaseAligner aligner;
  AlignedFrame last_frame;
  GaussianState final_state;
  IntegrateOptions opt;
  opt.frame_observer = [&](const GaussianState& st) {
    JointSvd js = joint_svd(st, 1e-5);
    const Mat l = build_l_matrix(js, gm.coupling, st.t);
    const PumpSvd ps = pump_svd_leading(l, tr.l);
    last_frame = aligner.align(st.t, js, ps, tr.l);
    evolver.push_frame(last_frame);
    final_state = st;
  };
  integrate(gm, opt);
  NonGaussResult ng = evolver.finish();

  // map the residual ket into the oracle basis: the supermode Fock states
  // differ from the bare ones by per-photon phases of the (aligned) basis
  // at t1
  auto basis = tiny_basis(tm.cutoff);
  auto unit = [](cplx z) { return z / std::max(std::abs(z), 1e-300); };
  const cplx ph_s = std::conj(unit(last_frame.g_s(0, 0)));
  const cplx ph_i = unit(last_frame.g_i(0, 0));
  const cplx ph_p = unit(last_frame.x_p(0, 0));
  Vec composed = Vec::Zero(basis->dim());
  const FockBasis& ngb = *ng.ket.basis;
  std::vector<uint8_t> occ(3, 0);
  for (int i = 0; i < ngb.dim(); ++i) {
    const auto& o = ngb.occupations(i);  // (S1, I1, P1)
    if (o[0] > tm.cutoff || o[1] > tm.cutoff || o[2] > tm.cutoff) continue;
    occ[0] = o[0];
    occ[1] = o[1];
    occ[2] = o[2];
    composed[basis->find(occ)] = ng.ket.c[i] * std::pow(ph_s, o[0]) * std::pow(ph_i, o[1]) *
                                 std::pow(ph_p, o[2]);
  }

  // apply U = D[x] S[J] R[phi] with the actual-channel scalar parameters
  const cplx v_ss = final_state.v_ss(0, 0), v_ii = final_state.v_ii(0, 0);
  const cplx w_si = final_state.w_si(0, 0);
  const double u = std::acosh(std::max(1.0, std::abs(v_ss)));
  const double phi_s = std::arg(v_ss), phi_i = std::arg(v_ii);
  const double k_inv = u < 1e-8 ? 1.0 : u / std::sinh(u);
  const cplx j = k_inv * w_si * std::exp(I * phi_i);

  auto apply_rotation = [&](Vec& psi) {
    for (int i = 0; i < basis->dim(); ++i) {
      const auto& o = basis->occupations(i);
      psi[i] *= std::exp(I * (phi_s * double(o[0]) + phi_i * double(o[1])));
    }
  };
  apply_rotation(composed);

  MonomialOp sq_up(*basis, {{0, 1}, {}});
  MonomialOp sq_down(*basis, {{}, {1, 0}});
  AssembledHamiltonian hs;
  hs.ops = {&sq_up, &sq_down};
  hs.coeffs = {I * j, std::conj(I * j)};
  evolve_exp(hs, 1.0, composed);  // exp(J a+a+ - H.c.)

  MonomialOp d_up(*basis, {{2}, {}});
  MonomialOp d_down(*basis, {{}, {2}});
  AssembledHamiltonian hd;
  const cplx x1 = final_state.x[0];
  hd.ops = {&d_up, &d_down};
  hd.coeffs = {I * x1, std::conj(I * x1)};
  evolve_exp(hd, 1.0, composed);  // exp(x b+ - H.c.)

  PipelineComparison pc;
  const cplx ov = oracle.ket.c.dot(composed);
  pc.fidelity = std::norm(ov) / (oracle.ket.c.squaredNorm() * composed.squaredNorm());

  // Gaussian-only composition
  Vec gauss_only = Vec::Zero(basis->dim());
  gauss_only[basis->vacuum_index()] = 1.0;
  apply_rotation(gauss_only);
  evolve_exp(hs, 1.0, gauss_only);
  evolve_exp(hd, 1.0, gauss_only);
  pc.fidelity_gaussian = std::norm(oracle.ket.c.dot(gauss_only)) /
                         (oracle.ket.c.squaredNorm() * gauss_only.squaredNorm());

  FockKet comp_ket{basis, composed};
  const RVec pop_pipe = mode_populations(comp_ket);
  FockKet gauss_ket{basis, gauss_only};
  const RVec pop_gauss = mode_populations(gauss_ket);
  pc.oracle_pump = pop_oracle[2];
  pc.oracle_pairs = pop_oracle[0];
  pc.pump_rel_err = std::abs(pop_pipe[2] - pop_oracle[2]) / std::max(pop_oracle[2], 1e-12);
  pc.pair_rel_err = std::abs(pop_pipe[0] - pop_oracle[0]) / std::max(pop_oracle[0], 1e-12);
  pc.pair_rel_err_gaussian =
      std::abs(pop_gauss[0] - pop_oracle[0]) / std::max(pop_oracle[0], 1e-12);
  return pc;
}

}  // namespace spdc
