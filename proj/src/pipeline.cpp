#include "spdc/pipeline.hpp"

#include <atomic>
#include <thread>

namespace spdc {

GaussianRunResult run_gaussian(const SystemParams& p, bool with_dyson,
                               bool lossless_signal_idler, bool with_spectra) {
  GaussianRunResult out;
  out.model = build_model(p, lossless_signal_idler);
  IntegrateOptions opt;
  opt.accumulate_dyson = with_dyson;
  out.integ = integrate(out.model, opt);
  const GaussianState& st = out.integ.state;
  out.mom = moments(st);
  out.homodyne = optimal_homodyne(out.mom);
  out.depletion_t1 = pump_depletion(st.x, out.model.n_pump);
  out.efficiency_t1 = std::real(out.mom.n_ss.trace()) / out.model.n_pump;
  if (with_spectra) {
    const JointSvd js = joint_svd(st, 10.0 * p.identity_tolerance);
    out.joint_spectrum = js.r;
    const Mat l = build_l_matrix(js, out.model.coupling, st.t);
    out.pump_spectrum = pump_svd(l).d;
  }
  return out;
}

NonGaussRunResult run_nongauss(const SystemParams& p) {
  NonGaussRunResult out;
  SystemParams ps = p;
  ps.save_every_inv_gamma_p = p.nongauss_dt_inv_gamma_p;
  out.model = build_model(ps);
  SupermodeTruncation tr;
  tr.m = ps.supermodes_signal;
  tr.l = ps.supermodes_pump;
  tr.n = ps.fock_cutoff;
  NonGaussEvolver evolver(tr);
  PhaseAligner aligner;
  IntegrateOptions opt;
  opt.frame_observer = [&](const GaussianState& st) {
    JointSvd js = joint_svd(st, 10.0 * ps.identity_tolerance);
    const Mat l = build_l_matrix(js, out.model.coupling, st.t);
    const PumpSvd psvd = pump_svd_leading(l, tr.l);
    AlignedFrame fr = aligner.align(st.t, js, psvd, tr.l);
    out.frame_t1 = fr;
    evolver.push_frame(std::move(fr));
  };
  out.ng = NonGaussResult{};
  IntegrationResult integ = integrate(out.model, opt);
  out.ng = evolver.finish();
  out.state_t1 = integ.state;
  out.mom = moments(out.state_t1);
  out.homodyne = optimal_homodyne(out.mom);
  out.joint_t1 = joint_svd(out.state_t1, 10.0 * ps.identity_tolerance);
  return out;
}

StretchRunResult run_stretch(const SystemParams& lossy, const Vec& target_or_empty) {
  StretchRunResult out;
  out.lossy = run_nongauss(lossy);

  SystemParams ref = lossy;
  Model lossless_model = build_model(ref, true);
  IntegrationResult ref_run = integrate(lossless_model);
  const int nk_s = lossy.signal.grid_points, nk_i = lossy.idler.grid_points;
  out.unitary = stretch_from_lossless(ref_run.state, nk_s, nk_i);
  out.lossless_constraint_residual = out.unitary.constraint_residual();

  const JointSvd& js = out.lossy.joint_t1;
  const ActualBlocks ab = actual_channel_blocks(out.lossy.state_t1, nk_s, nk_i);
  const Mat cmap = stretch_cmap(out.unitary, ab, js);
  Vec target = target_or_empty;
  if (target.size() == 0)
    target = stretch_target_hybrid(static_cast<int>(js.g_s.rows()),
                                   static_cast<int>(js.g_i.rows()));
  const Vec beta = optimal_stretch_lo(cmap, target);
  out.coeffs = stretch_coefficients(out.unitary, out.lossy.state_t1, js, beta, target);

  GridSpec spec;
  spec.chi_points = lossy.chi_grid_points;
  spec.chi_halfwidth = lossy.chi_grid_halfwidth;
  spec.out_points = lossy.wigner_grid_points;
  spec.out_halfwidth = lossy.wigner_grid_halfwidth;
  spec.auto_widen = lossy.wigner_auto_widen;
  out.wigner = stretched_wigner(out.lossy.ng.ket, out.coeffs, spec);
  return out;
}

std::vector<SweepPoint> energy_sweep(const SystemParams& base,
                                     const std::vector<double>& energies_pj, bool with_dyson,
                                     int threads) {
  std::vector<SweepPoint> points(energies_pj.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= energies_pj.size()) return;
      SweepPoint& pt = points[i];
      pt.energy_pj = energies_pj[i];
      try {
        SystemParams p = base;
        p.pump_energy_pj = energies_pj[i];
        const GaussianRunResult r = run_gaussian(p, with_dyson, false, false);
        pt.squeezing_db = noise_db(r.homodyne.min_noise);
        pt.antisqueezing_db = noise_db(r.homodyne.max_noise);
        pt.photon_number = std::real(r.mom.n_ss.trace());
        pt.efficiency = r.efficiency_t1;
        pt.depletion = r.depletion_t1;
        pt.dyson_norm = with_dyson ? r.integ.dyson.norm1 : 0.0;
        pt.ok = true;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return points;
}

}  // namespace spdc
