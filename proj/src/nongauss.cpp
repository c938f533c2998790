#include "spdc/nongauss.hpp"

#include <cmath>

namespace spdc {

FrameCoefficients frame_coefficients(const AlignedFrame& fr, const SupermodeTruncation& tr) {
  FrameCoefficients fc;
  fc.t = fr.t;
  const int m = tr.m;
  const int l = std::min<int>(tr.l, static_cast<int>(fr.d.size()));
  if (fr.r.size() < m) throw NumericalError("retained supermodes exceed decomposition size");
  fc.r = fr.r.head(m);
  fc.pump_weight = Mat::Zero(tr.l, m * m);
  const int dim_i = static_cast<int>(fr.g_i.rows());
  for (int lam = 0; lam < l; ++lam)
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v)
        fc.pump_weight(lam, u * m + v) = fr.d[lam] * std::conj(fr.q_cols(u * dim_i + v, lam));
  fc.gen_s = Mat::Zero(m, m);
  fc.gen_i = Mat::Zero(m, m);
  fc.gen_p = Mat::Zero(tr.l, tr.l);
  return fc;
}

void add_basis_drift(FrameCoefficients& mid, const AlignedFrame& prev, const AlignedFrame& cur,
                     const AlignedFrame& next, const SupermodeTruncation& tr) {
  const double dt = next.t - prev.t;
  if (dt <= 0) return;
  const int m = tr.m;
  const int l = std::min<int>(tr.l, static_cast<int>(cur.x_p.cols()));
  // [d G_S^*/dt G_S^T]_{uv}: rows of G are supermode functionals
  Mat dgs = (next.g_s.topRows(m).conjugate() - prev.g_s.topRows(m).conjugate()) / dt;
  Mat dgi = (next.g_i.topRows(m) - prev.g_i.topRows(m)) / dt;
  Mat gs = dgs * cur.g_s.topRows(m).transpose();
  Mat gi = dgi * cur.g_i.topRows(m).adjoint();
  Mat gp = Mat::Zero(tr.l, tr.l);
  if (l > 0) {
    Mat dx = (next.x_p.leftCols(l).transpose() - prev.x_p.leftCols(l).transpose()) / dt;
    gp.topLeftCorner(l, l) = dx * cur.x_p.leftCols(l).conjugate();
  }
  double defect = 0.0;
  auto anti = [&defect](Mat& g) {
    defect = std::max(defect, (g + g.adjoint()).cwiseAbs().maxCoeff());
    g = 0.5 * (g - g.adjoint().eval());
  };
  anti(gs);
  anti(gi);
  anti(gp);
  mid.gen_s = gs;
  mid.gen_i = gi;
  mid.gen_p = gp;
  mid.drift_defect = defect;
}

SupermodeHamiltonian::SupermodeHamiltonian(std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)) {
  const int m = basis_->m_signal();
  const int l = basis_->l_pump();
  auto sig = [&](int u) { return u; };
  auto idl = [&](int u) { return m + u; };
  auto pmp = [&](int lam) { return 2 * m + lam; };

  auto add = [&](LadderMonomial mono, int lam, int u, int v, int family, bool conj) {
    ops_.emplace_back(*basis_, mono);
    slots_.push_back({lam, u, v, family, conj, static_cast<int>(ops_.size()) - 1});
  };

  for (int lam = 0; lam < l; ++lam)
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) {
        // B+_lam A_Iv A_Su and conjugate
        add({{pmp(lam)}, {idl(v), sig(u)}}, lam, u, v, 0, false);
        add({{sig(u), idl(v)}, {pmp(lam)}}, lam, u, v, 0, true);
        // B+_lam A+_Iv A_Iu
        add({{pmp(lam), idl(v)}, {idl(u)}}, lam, u, v, 1, false);
        add({{idl(u)}, {idl(v), pmp(lam)}}, lam, u, v, 1, true);
        // B+_lam A+_Sv A_Su
        add({{pmp(lam), sig(v)}, {sig(u)}}, lam, u, v, 2, false);
        add({{sig(u)}, {sig(v), pmp(lam)}}, lam, u, v, 2, true);
        // B+_lam A+_Iv A+_Su
        add({{pmp(lam), idl(v), sig(u)}, {}}, lam, u, v, 3, false);
        add({{}, {sig(u), idl(v), pmp(lam)}}, lam, u, v, 3, true);
      }
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      add({{sig(v)}, {sig(u)}}, -1, u, v, 4, false);
      add({{idl(v)}, {idl(u)}}, -1, u, v, 5, false);
    }
  for (int u = 0; u < l; ++u)
    for (int v = 0; v < l; ++v) add({{pmp(v)}, {pmp(u)}}, -1, u, v, 6, false);

  ham_.ops.reserve(slots_.size());
  ham_.coeffs.assign(slots_.size(), cplx(0, 0));
  for (const auto& s : slots_) ham_.ops.push_back(&ops_[s.op_index]);
}

void SupermodeHamiltonian::update(const FrameCoefficients& fc) {
  const int m = static_cast<int>(fc.r.size());
  for (size_t k = 0; k < slots_.size(); ++k) {
    const Slot& s = slots_[k];
    cplx c;
    switch (s.family) {
      case 0:
        c = fc.pump_weight(s.lam, s.u * m + s.v) * std::cosh(fc.r[s.u]) * std::cosh(fc.r[s.v]);
        break;
      case 1:
        c = fc.pump_weight(s.lam, s.u * m + s.v) * std::sinh(fc.r[s.u]) * std::cosh(fc.r[s.v]);
        break;
      case 2:
        c = fc.pump_weight(s.lam, s.u * m + s.v) * std::cosh(fc.r[s.u]) * std::sinh(fc.r[s.v]);
        break;
      case 3:
        c = fc.pump_weight(s.lam, s.u * m + s.v) * std::sinh(fc.r[s.u]) * std::sinh(fc.r[s.v]);
        break;
      case 4:
        c = -I * fc.gen_s(s.u, s.v);
        break;
      case 5:
        c = -I * fc.gen_i(s.u, s.v);
        break;
      case 6:
        c = -I * fc.gen_p(s.u, s.v);
        break;
      default:
        c = 0;
    }
    ham_.coeffs[k] = s.conjugated ? std::conj(c) : c;
  }
}

double SupermodeHamiltonian::hermiticity_residual(int probe_dim) const {
  int d = basis_->dim();
  if (probe_dim > 0) d = std::min(d, probe_dim);
  const Mat h = ham_.dense(basis_->dim()).topLeftCorner(d, d);
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

NonGaussEvolver::NonGaussEvolver(const SupermodeTruncation& tr) : tr_(tr) {
  basis_ = std::make_shared<FockBasis>(FockBasis::build(tr.m, tr.l, tr.n, tr.sector));
  ham_ = std::make_unique<SupermodeHamiltonian>(basis_);
  ket_ = vacuum_ket(basis_);
  out_.populations.resize(0, basis_->modes());
}

void NonGaussEvolver::push_frame(AlignedFrame fr) {
  window_.push_back(std::move(fr));
  if (window_.size() > 3) window_.pop_front();
  if (window_.size() == 2 && first_) {
    // one-sided difference for the first interval
    FrameCoefficients fc = frame_coefficients(window_[0], tr_);
    add_basis_drift(fc, window_[0], window_[0], window_[1], tr_);
    advance(fc, window_[1].t - window_[0].t);
    first_ = false;
  } else if (window_.size() == 3) {
    FrameCoefficients fc = frame_coefficients(window_[1], tr_);
    add_basis_drift(fc, window_[0], window_[1], window_[2], tr_);
    advance(fc, window_[2].t - window_[1].t);
  }
}

void NonGaussEvolver::record(double t) {
  const RVec pop = mode_populations(ket_);
  out_.populations.conservativeResize(out_.populations.rows() + 1, basis_->modes());
  out_.populations.row(out_.populations.rows() - 1) = pop.transpose();
  out_.times.push_back(t);
}

void NonGaussEvolver::advance(const FrameCoefficients& fc, double dt) {
  if (out_.times.empty()) record(fc.t);
  ham_->update(fc);
  out_.frames.push_back(fc);
  out_.max_drift_defect = std::max(out_.max_drift_defect, fc.drift_defect);
  evolve_exp(ham_->hamiltonian(), dt, ket_.c);
  out_.max_norm_drift = std::max(out_.max_norm_drift, std::abs(1.0 - ket_.norm2()));
  record(fc.t + dt);
}

NonGaussResult NonGaussEvolver::finish() {
  out_.ket = ket_;
  return std::move(out_);
}

}  // namespace spdc
