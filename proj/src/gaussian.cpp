#include "spdc/gaussian.hpp"

#include <cmath>

namespace spdc {

GaussianState initial_gaussian_state(const Model& m) {
  GaussianState s;
  s.t = m.t0;
  s.x = m.x0;
  const int ns = m.coupling.dim_s();
  const int ni = m.coupling.dim_i();
  s.v_ss = Mat::Identity(ns, ns);
  s.v_ii = Mat::Identity(ni, ni);
  s.w_si = Mat::Zero(ns, ni);
  s.w_is = Mat::Zero(ni, ns);
  return s;
}

namespace {

struct PhasedFactors {
  Vec a_s, a_i, pv;
  cplx gl;  // scale * exp(i dw0 t)
};

void phase_factors(const CouplingSpec& cs, double t, PhasedFactors& f) {
  const int ns = cs.dim_s(), ni = cs.dim_i(), np = cs.dim_p();
  f.a_s.resize(ns);
  f.a_i.resize(ni);
  f.pv.resize(np);
  for (int j = 0; j < ns; ++j) f.a_s[j] = cs.f_signal[j] * std::exp(I * (cs.ph_signal[j] * t));
  for (int j = 0; j < ni; ++j) f.a_i[j] = cs.f_idler[j] * std::exp(I * (cs.ph_idler[j] * t));
  for (int j = 0; j < np; ++j) f.pv[j] = cs.f_pump[j] * std::exp(-I * (cs.ph_pump[j] * t));
  f.gl = cs.scale * std::exp(I * cs.delta_omega0 * t);
}

struct Derivative {
  Vec dx;
  Mat dv_ss, dv_ii, dw_si, dw_is;
};

void eval_rhs(const CouplingSpec& cs, const GaussianState& s, double t, PhasedFactors& f,
              Derivative& d) {
  phase_factors(cs, t, f);
  const cplx zc = f.gl * f.pv.transpose() * s.x;  // Z = zc * a_s a_i^T

  // pump drive: Delta = conj(gl) (a_s* W_SI) . (V_II^T a_i*) conj(pv)
  const Vec q1 = s.w_si.transpose() * f.a_s.conjugate();
  const Vec q2 = s.v_ii.transpose() * f.a_i.conjugate();
  const cplx pair_coh = q1.transpose() * q2;
  d.dx.noalias() = (-I * std::conj(f.gl) * pair_coh) * f.pv.conjugate();

  const Vec r_vss = s.w_is.conjugate().transpose() * f.a_i;  // a_i^T conj(W_IS)
  const Vec r_vii = s.w_si.conjugate().transpose() * f.a_s;
  const Vec r_wsi = s.v_ii.conjugate().transpose() * f.a_i;
  const Vec r_wis = s.v_ss.conjugate().transpose() * f.a_s;
  const cplx c = -I * zc;
  d.dv_ss.noalias() = (c * f.a_s) * r_vss.transpose();
  d.dv_ii.noalias() = (c * f.a_i) * r_vii.transpose();
  d.dw_si.noalias() = (c * f.a_s) * r_wsi.transpose();
  d.dw_is.noalias() = (c * f.a_i) * r_wis.transpose();
}

}  // namespace

GaussianRhs gaussian_rhs(const CouplingSpec& cs, const GaussianState& s) {
  PhasedFactors f;
  Derivative d;
  eval_rhs(cs, s, s.t, f, d);
  GaussianRhs out;
  const cplx pair_coh = (s.w_si.transpose() * f.a_s.conjugate()).transpose() *
                        (s.v_ii.transpose() * f.a_i.conjugate());
  out.delta = std::conj(f.gl) * pair_coh * f.pv.conjugate();
  const cplx zc = f.gl * f.pv.transpose() * s.x;
  out.z.noalias() = zc * f.a_s * f.a_i.transpose();
  out.dx = std::move(d.dx);
  out.dv_ss = std::move(d.dv_ss);
  out.dv_ii = std::move(d.dv_ii);
  out.dw_si = std::move(d.dw_si);
  out.dw_is = std::move(d.dw_is);
  return out;
}

double bogoliubov_residual(const GaussianState& s) {
  const int ns = s.v_ss.rows(), ni = s.v_ii.rows();
  const Mat i_s = Mat::Identity(ns, ns), i_i = Mat::Identity(ni, ni);
  double r = (s.v_ss * s.v_ss.adjoint() - s.w_si * s.w_si.adjoint() - i_s).cwiseAbs().maxCoeff();
  r = std::max(r, (s.v_ii * s.v_ii.adjoint() - s.w_is * s.w_is.adjoint() - i_i).cwiseAbs().maxCoeff());
  r = std::max(r, (s.v_ss * s.w_is.transpose() - s.w_si * s.v_ii.transpose()).cwiseAbs().maxCoeff());
  return r;
}

MomentSet moments(const GaussianState& s) {
  MomentSet m;
  m.m_si.noalias() = s.w_si * s.v_ii.transpose();
  m.n_ss.noalias() = s.w_si.conjugate() * s.w_si.transpose();
  m.n_ii.noalias() = s.w_is.conjugate() * s.w_is.transpose();
  m.nk = static_cast<int>(s.v_ss.rows()) / 2;
  return m;
}

double pump_depletion(const Vec& x, double n_pump) {
  if (n_pump <= 0) throw NumericalError("pump_depletion requires N_P > 0");
  double d = 1.0 - x.squaredNorm() / n_pump;
  if (d < 0 && d > -1e-12) d = 0.0;
  return d;
}

namespace {

// Accumulates the Dyson first-order norm via pairwise kernels of the
// per-sample contraction vectors; the pump-index phases are summed
// exactly per lag.
struct DysonAccum {
  const CouplingSpec* cs = nullptr;
  double dt_sample = 0.0;
  std::vector<Vec> a_rows, b_rows;
  std::vector<double> times;
  std::vector<cplx> lag_kernel;  // SP(m * dt_sample)
  double running = 0.0;  // rectangle-rule partial double sum
  double last_cross = 0.0, last_diag = 0.0;
  std::vector<double> history;

  void init(const CouplingSpec& c, double dts) {
    cs = &c;
    dt_sample = dts;
  }
  cplx sp(int lag) {
    while (static_cast<int>(lag_kernel.size()) <= lag) {
      const double tau = lag_kernel.size() * dt_sample;
      cplx acc = 0.0;
      for (int j = 0; j < cs->dim_p(); ++j)
        acc += std::norm(cs->f_pump[j]) * std::exp(I * (cs->ph_pump[j] * tau));
      lag_kernel.push_back(acc);
    }
    return lag_kernel[lag];
  }
  void add_sample(const GaussianState& s, const PhasedFactors& f) {
    Vec a = s.w_si.transpose() * f.a_s.conjugate();
    Vec b = s.w_is.transpose() * f.a_i.conjugate();
    const int m = static_cast<int>(times.size());
    const double w2 = dt_sample * dt_sample * cs->scale * cs->scale;
    cplx cross = 0.0;
    for (int j = 0; j < m; ++j) {
      const cplx k = a_rows[j].dot(a) * b_rows[j].dot(b) * sp(m - j) *
                     std::exp(-I * cs->delta_omega0 * (times[j] - s.t));
      cross += std::conj(k);
    }
    const double diag = std::real(sp(0)) * std::real(a.dot(a)) * std::real(b.dot(b));
    running += w2 * (diag + 2.0 * std::real(cross));
    last_cross = std::real(cross);
    last_diag = diag;
    a_rows.push_back(std::move(a));
    b_rows.push_back(std::move(b));
    times.push_back(s.t);
    history.push_back(running);
  }
  // Endpoint half-weights (trapezoid).  The t0 row vanishes (W=0), so
  // only the last sample needs correcting.
  double final_norm() const {
    const double w2 = dt_sample * dt_sample * cs->scale * cs->scale;
    return running - w2 * (last_cross + 0.75 * last_diag);
  }
};

}  // namespace

IntegrationResult integrate(const Model& m, const IntegrateOptions& opt) {
  const CouplingSpec& cs = m.coupling;
  GaussianState s = initial_gaussian_state(m);

  const double span = m.t1 - m.t0;
  const long nstep = std::max(1L, std::lround(std::ceil(span / m.dt)));
  const double dt = span / nstep;
  const long save_every = std::max(1L, std::lround(m.save_dt / dt));

  IntegrationResult out;
  DysonAccum dyson;
  if (opt.accumulate_dyson) dyson.init(cs, save_every * dt);

  PhasedFactors f;
  Derivative d1, d2, d3, d4;
  GaussianState tmp = s;

  std::vector<double> snap_times = opt.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  size_t snap_idx = 0;

  auto observe = [&](const GaussianState& st) {
    TimeSample ts;
    ts.t = st.t;
    ts.n_pump = st.x.squaredNorm();
    ts.pair_number = st.w_si.squaredNorm();  // tr N_SS = ||W_SI||_F^2
    ts.depletion = m.n_pump > 0 ? 1.0 - ts.n_pump / m.n_pump : 0.0;
    ts.identity_residual = bogoliubov_residual(st);
    out.max_identity_residual = std::max(out.max_identity_residual, ts.identity_residual);
    out.series.push_back(ts);
    if (opt.accumulate_dyson) {
      phase_factors(cs, st.t, f);
      dyson.add_sample(st, f);
      out.dyson.times.push_back(st.t);
    }
    if (opt.frame_observer) opt.frame_observer(st);
    if (opt.check_identities && ts.identity_residual > m.params.identity_tolerance)
      throw ConvergenceError("Bogoliubov identity residual " + std::to_string(ts.identity_residual) +
                             " exceeds tolerance at t=" + std::to_string(st.t) +
                             "; reduce dt_inv_gamma_p");
  };

  auto maybe_snapshot = [&](const GaussianState& st) {
    while (snap_idx < snap_times.size() && st.t >= snap_times[snap_idx] - 0.5 * dt) {
      out.snapshots.push_back(st);
      ++snap_idx;
    }
  };

  for (long step = 0; step < nstep; ++step) {
    if (step % save_every == 0) observe(s);
    maybe_snapshot(s);

    const double t = s.t;
    eval_rhs(cs, s, t, f, d1);

    tmp.x = s.x + (0.5 * dt) * d1.dx;
    tmp.v_ss = s.v_ss + (0.5 * dt) * d1.dv_ss;
    tmp.v_ii = s.v_ii + (0.5 * dt) * d1.dv_ii;
    tmp.w_si = s.w_si + (0.5 * dt) * d1.dw_si;
    tmp.w_is = s.w_is + (0.5 * dt) * d1.dw_is;
    eval_rhs(cs, tmp, t + 0.5 * dt, f, d2);

    tmp.x = s.x + (0.5 * dt) * d2.dx;
    tmp.v_ss = s.v_ss + (0.5 * dt) * d2.dv_ss;
    tmp.v_ii = s.v_ii + (0.5 * dt) * d2.dv_ii;
    tmp.w_si = s.w_si + (0.5 * dt) * d2.dw_si;
    tmp.w_is = s.w_is + (0.5 * dt) * d2.dw_is;
    eval_rhs(cs, tmp, t + 0.5 * dt, f, d3);

    tmp.x = s.x + dt * d3.dx;
    tmp.v_ss = s.v_ss + dt * d3.dv_ss;
    tmp.v_ii = s.v_ii + dt * d3.dv_ii;
    tmp.w_si = s.w_si + dt * d3.dw_si;
    tmp.w_is = s.w_is + dt * d3.dw_is;
    eval_rhs(cs, tmp, t + dt, f, d4);

    const double w = dt / 6.0;
    s.x += w * (d1.dx + 2.0 * d2.dx + 2.0 * d3.dx + d4.dx);
    s.v_ss += w * (d1.dv_ss + 2.0 * d2.dv_ss + 2.0 * d3.dv_ss + d4.dv_ss);
    s.v_ii += w * (d1.dv_ii + 2.0 * d2.dv_ii + 2.0 * d3.dv_ii + d4.dv_ii);
    s.w_si += w * (d1.dw_si + 2.0 * d2.dw_si + 2.0 * d3.dw_si + d4.dw_si);
    s.w_is += w * (d1.dw_is + 2.0 * d2.dw_is + 2.0 * d3.dw_is + d4.dw_is);
    s.t = m.t0 + (step + 1) * dt;
  }
  observe(s);
  maybe_snapshot(s);

  if (opt.accumulate_dyson) {
    out.dyson.norm_history = dyson.history;
    out.dyson.norm1 = dyson.final_norm();
    for (size_t i = 1; i < dyson.history.size(); ++i)
      if (dyson.history[i] < dyson.history[i - 1] - 1e-12 * std::abs(dyson.history[i - 1]))
        out.dyson.monotone = false;
  }
  out.state = std::move(s);
  return out;
}

std::vector<cplx> dyson_tensor(const Model& m) {
  const CouplingSpec& cs = m.coupling;
  const int ns = cs.dim_s(), ni = cs.dim_i(), np = cs.dim_p();
  std::vector<cplx> o(static_cast<size_t>(ns) * ni * np, cplx(0, 0));
  std::vector<double> sample_t;
  std::vector<Vec> sample_a, sample_b;
  IntegrateOptions opt;
  PhasedFactors f;
  opt.frame_observer = [&](const GaussianState& st) {
    phase_factors(cs, st.t, f);
    sample_t.push_back(st.t);
    sample_a.push_back(st.w_si.transpose() * f.a_s.conjugate());
    sample_b.push_back(st.w_is.transpose() * f.a_i.conjugate());
  };
  integrate(m, opt);
  const double dts = sample_t.size() > 1 ? sample_t[1] - sample_t[0] : 0.0;
  for (size_t i = 0; i < sample_t.size(); ++i) {
    const double w = (i == 0 || i + 1 == sample_t.size()) ? 0.5 * dts : dts;
    const cplx pre = w * cs.scale * std::exp(-I * cs.delta_omega0 * sample_t[i]);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ni; ++b) {
        const cplx ab = pre * sample_a[i][a] * sample_b[i][b];
        for (int c = 0; c < np; ++c)
          o[(static_cast<size_t>(a) * ni + b) * np + c] +=
              ab * std::conj(cs.f_pump[c]) * std::exp(I * cs.ph_pump[c] * sample_t[i]);
      }
  }
  return o;
}

}  // namespace spdc
