#include "spdc/measure.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace spdc {

double quadrature_noise(const LocalOscillator& lo, const MomentSet& mom) {
  if (std::abs(lo.norm_value() - 1.0) > 1e-8)
    throw NumericalError("local oscillator is not normalized");
  const Mat n_ss = mom.n_ss_acac(), n_ii = mom.n_ii_acac(), m_si = mom.m_acac();
  const cplx direct = lo.f_signal.adjoint() * n_ss * lo.f_signal +
                      lo.f_idler.adjoint() * n_ii * lo.f_idler;
  const cplx cross = lo.f_signal.transpose() * m_si * lo.f_idler;
  return std::real(direct) + 2.0 * std::real(cross) + 1.0;
}

HomodyneResult optimal_homodyne(const MomentSet& mom) {
  const int nk = mom.nk;
  const Mat z = Mat::Zero(nk, nk);
  Mat n(2 * nk, 2 * nk), m(2 * nk, 2 * nk);
  n << mom.n_ss_acac(), z, z, mom.n_ii_acac();
  m << z, mom.m_acac(), mom.m_acac().transpose(), z;
  const RMat re_npm = (n + m).real(), im_npm = (n + m).imag();
  const RMat re_nmm = (n - m).real(), im_nmm = (n - m).imag();
  RMat a(4 * nk, 4 * nk);
  a << re_npm, -im_npm, im_nmm, re_nmm;
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMat> es(a);
  const RVec& ev = es.eigenvalues();
  HomodyneResult res;
  res.min_noise = 2.0 * ev[0] + 1.0;
  res.max_noise = 2.0 * ev[4 * nk - 1] + 1.0;
  res.squeezed = res.min_noise < 1.0;
  const RVec v = es.eigenvectors().col(0);
  Vec f(2 * nk);
  for (int i = 0; i < 2 * nk; ++i) f[i] = std::sqrt(2.0) * cplx(v[i], v[2 * nk + i]);
  res.lo.f_signal = f.head(nk);
  res.lo.f_idler = f.tail(nk);
  return res;
}

double analytic_min_noise(double r1, double eta_s, double eta_i) {
  const double avg = 0.5 * (eta_s + eta_i);
  const double geo = std::sqrt(eta_s * eta_i);
  return 0.5 * std::exp(-2.0 * r1) * (avg + geo) + 0.5 * std::exp(2.0 * r1) * (avg - geo) +
         1.0 - avg;
}

Mat displacement_matrix(cplx beta, int cutoff) {
  const int dim = cutoff + 1;
  const double x = std::norm(beta);
  Mat d(dim, dim);
  const double e = std::exp(-0.5 * x);
  for (int diag = 0; diag <= cutoff; ++diag) {
    // generalized Laguerre L_k^(diag)(x) by three-term recurrence
    double lkm1 = 1.0, lk = 1.0 + diag - x;
    double fac = 1.0;  // sqrt(k!/(k+diag)!)
    for (int j = 1; j <= diag; ++j) fac /= std::sqrt(static_cast<double>(j));
    const cplx bpow = std::pow(beta, diag);
    const cplx bpow_c = std::pow(-std::conj(beta), diag);
    for (int k = 0; k + diag <= cutoff; ++k) {
      double lval;
      if (k == 0)
        lval = 1.0;
      else if (k == 1)
        lval = lk;
      else {
        const double lnext = ((2.0 * (k - 1) + 1.0 + diag - x) * lk - (k - 1.0 + diag) * lkm1) / k;
        lkm1 = lk;
        lk = lnext;
        lval = lnext;
      }
      d(k + diag, k) = fac * bpow * e * lval;
      d(k, k + diag) = fac * bpow_c * e * lval;
      fac *= std::sqrt((k + 1.0) / (k + 1.0 + diag));
    }
  }
  return d;
}

namespace {

// chi_retained(g) = tr[rho D(g_0) x D(g_1) x ...] from the Schmidt form
cplx reduced_chi(const ReducedState& red, const std::vector<Mat>& dmats) {
  const int nm = static_cast<int>(dmats.size());
  const int dim = red.cutoff + 1;
  cplx total = 0.0;
  Vec work, next;
  for (size_t m = 0; m < red.weights.size(); ++m) {
    work = red.vectors.col(static_cast<int>(m));
    // apply mode matrices; mode j has stride dim^(nm-1-j) (row-major)
    for (int j = 0; j < nm; ++j) {
      int post = 1;
      for (int k = j + 1; k < nm; ++k) post *= dim;
      int pre = red.keep_dim / (dim * post);
      next.resize(work.size());
      for (int a = 0; a < pre; ++a)
        for (int c = 0; c < post; ++c) {
          for (int r = 0; r < dim; ++r) {
            cplx acc = 0.0;
            for (int s = 0; s < dim; ++s) acc += dmats[j](r, s) * work[(a * dim + s) * post + c];
            next[(a * dim + r) * post + c] = acc;
          }
        }
      work.swap(next);
    }
    total += red.weights[m] * red.vectors.col(static_cast<int>(m)).dot(work);
  }
  return total;
}

RMat chi_to_wigner(const Mat& chi, const RVec& xs, const RVec& ys, const RVec& qs,
                   const RVec& ps) {
  const double dxdy = (xs[1] - xs[0]) * (ys[1] - ys[0]);
  Mat ep(ps.size(), xs.size()), eq(ys.size(), qs.size());
  for (int i = 0; i < ps.size(); ++i)
    for (int j = 0; j < xs.size(); ++j) ep(i, j) = std::exp(I * (2.0 * ps[i] * xs[j]));
  for (int i = 0; i < ys.size(); ++i)
    for (int j = 0; j < qs.size(); ++j) eq(i, j) = std::exp(-I * (2.0 * qs[j] * ys[i]));
  const Mat t1 = ep * chi;        // (p, y)
  const Mat wc = t1 * eq;         // (p, q)
  return (dxdy / (M_PI * M_PI)) * wc.real().transpose();  // (q, p)
}

WignerGrid wigner_from_reduced(const ReducedState& red, const ModeCoefficients& mode,
                               const GridSpec& spec) {
  double hw = spec.chi_halfwidth;
  WignerGrid out;
  for (int attempt = 0;; ++attempt) {
    const int npt = spec.chi_points;
    RVec xs(npt), ys(npt);
    for (int i = 0; i < npt; ++i) xs[i] = ys[i] = -hw + 2.0 * hw * i / (npt - 1);
    Mat chi(npt, npt);
    const int nm = static_cast<int>(mode.mode_ids.size());
    std::vector<Mat> dmats(nm);
    double boundary = 0.0;
    for (int ix = 0; ix < npt; ++ix)
      for (int iy = 0; iy < npt; ++iy) {
        const cplx gamma(xs[ix], ys[iy]);
        for (int j = 0; j < nm; ++j) {
          const cplx g = gamma * std::conj(mode.c[j]) - std::conj(gamma) * mode.d[j];
          dmats[j] = displacement_matrix(g, red.cutoff);
        }
        double sigma = 0.0;
        for (int u = 0; u < mode.unret_c.size(); ++u)
          sigma += 0.5 * std::norm(gamma * std::conj(mode.unret_c[u]) -
                                   std::conj(gamma) * (mode.unret_d.size() > u ? mode.unret_d[u] : cplx(0, 0)));
        const cplx val = reduced_chi(red, dmats) * std::exp(-sigma);
        chi(ix, iy) = val;
        if (ix == 0 || iy == 0 || ix == npt - 1 || iy == npt - 1)
          boundary = std::max(boundary, std::abs(val));
      }
    out.boundary_chi_max = boundary;
    out.chi_halfwidth = hw;
    out.chi_points = npt;
    if (boundary > spec.boundary_tol && spec.auto_widen && attempt < 3) {
      hw *= 1.5;
      continue;
    }
    RVec qs(spec.out_points), ps(spec.out_points);
    for (int i = 0; i < spec.out_points; ++i)
      qs[i] = ps[i] = -spec.out_halfwidth + 2.0 * spec.out_halfwidth * i / (spec.out_points - 1);
    out.q = qs;
    out.p = ps;
    out.w = chi_to_wigner(chi, xs, ys, qs, ps);
    return out;
  }
}

}  // namespace

double WignerGrid::normalization() const {
  const double dq = q[1] - q[0], dp = p[1] - p[0];
  return w.sum() * dq * dp;
}

double WignerGrid::negativity_volume() const {
  const double dq = q[1] - q[0], dp = p[1] - p[0];
  const double v = w.cwiseAbs().sum() * dq * dp - 1.0;
  return std::max(0.0, v);
}

double negativity_volume(const WignerGrid& w) { return w.negativity_volume(); }

ModeCoefficients hybrid_mode(double theta, double phi, const FockBasis& basis) {
  ModeCoefficients mc;
  const int m = basis.m_signal();
  mc.mode_ids = {0, m, 2 * m};  // S1, I1, P1
  mc.c.resize(3);
  mc.c[0] = std::cos(phi) / std::sqrt(2.0);
  mc.c[1] = std::cos(phi) / std::sqrt(2.0);
  mc.c[2] = std::sin(phi) * std::exp(I * theta);
  mc.d = Vec::Zero(3);
  mc.unret_c.resize(0);
  mc.unret_d.resize(0);
  return mc;
}

WignerGrid wigner(const FockKet& ket, const ModeCoefficients& mode, const GridSpec& spec) {
  const ReducedState red = reduce_ket(ket, mode.mode_ids);
  WignerGrid w = wigner_from_reduced(red, mode, spec);
  if (w.boundary_chi_max > spec.boundary_tol)
    throw NumericalError("characteristic function does not decay at the grid boundary (|chi| = " +
                         std::to_string(w.boundary_chi_max) + "); widen chi grid");
  return w;
}

namespace {

// Reduced single-mode density matrix of C = sum_j coeff_j A_j obtained by
// a passive three-mode rotation exp(kappa_hat) with kappa = log(T),
// T a unitary whose first row is coeff.  Exact within total-photon
// blocks that fit below the cutoff.
Mat rotated_mode_density(const ReducedState& red, const FockBasis& basis3,
                         const std::vector<MonomialOp>& number_ops, const Vec& coeff) {
  const int nm = 3, dim = red.cutoff + 1;
  // unitary completion by Gram-Schmidt over {coeff, e0, e1, e2}
  Mat t = Mat::Zero(nm, nm);
  t.row(0) = coeff.transpose() / coeff.norm();
  int filled = 1;
  for (int k = 0; k < nm && filled < nm; ++k) {
    Vec v = Vec::Zero(nm);
    v[k] = 1.0;
    for (int r = 0; r < filled; ++r) {
      const cplx proj = t.row(r).conjugate() * v;
      v -= proj * t.row(r).transpose();
    }
    if (v.norm() > 1e-8) t.row(filled++) = (v / v.norm()).transpose();
  }
  Eigen::ComplexSchur<Mat> schur(t);
  Mat kappa = Mat::Zero(nm, nm);
  {
    Vec logd(nm);
    for (int i = 0; i < nm; ++i) logd[i] = std::log(schur.matrixT()(i, i));
    kappa = schur.matrixU() * logd.asDiagonal() * schur.matrixU().adjoint();
  }
  AssembledHamiltonian h;
  h.ops.reserve(nm * nm);
  h.coeffs.reserve(nm * nm);
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j) {
      h.ops.push_back(&number_ops[i * nm + j]);
      h.coeffs.push_back(I * kappa(i, j));  // exp(-i H) = exp(kappa_hat)
    }
  Mat rho = Mat::Zero(dim, dim);
  const int rest = red.keep_dim / dim;
  for (size_t m = 0; m < red.weights.size(); ++m) {
    Vec v = red.vectors.col(static_cast<int>(m));
    evolve_exp(h, 1.0, v);
    Eigen::Map<const Mat> vr(v.data(), rest, dim);  // column-major: mode-0 slowest
    rho += red.weights[m] * (vr.transpose() * vr.conjugate());
  }
  return rho;
}

}  // namespace

AngleScanResult angle_scan(const FockKet& ket, const RVec& thetas, const RVec& phis,
                           GridSpec spec) {
  const int m = ket.basis->m_signal();
  const std::vector<int> keep = {0, m, 2 * m};
  const ReducedState red = reduce_ket(ket, keep, 1e-10);
  auto basis3 = FockBasis::build(1, 1, ket.basis->cutoff(), false);
  std::vector<MonomialOp> number_ops;
  number_ops.reserve(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) number_ops.emplace_back(basis3, LadderMonomial{{i}, {j}});

  const int npt = spec.chi_points;
  RVec xs(npt);
  for (int i = 0; i < npt; ++i) xs[i] = -spec.chi_halfwidth + 2.0 * spec.chi_halfwidth * i / (npt - 1);
  RVec qs(spec.out_points), ps(spec.out_points);
  for (int i = 0; i < spec.out_points; ++i)
    qs[i] = ps[i] = -spec.out_halfwidth + 2.0 * spec.out_halfwidth * i / (spec.out_points - 1);

  AngleScanResult best;
  best.values.resize(thetas.size(), phis.size());
  for (int it = 0; it < thetas.size(); ++it)
    for (int ip = 0; ip < phis.size(); ++ip) {
      const ModeCoefficients mc = hybrid_mode(thetas[it], phis[ip], *ket.basis);
      const Mat rho = rotated_mode_density(red, basis3, number_ops, mc.c);
      Mat chi(npt, npt);
      for (int ix = 0; ix < npt; ++ix)
        for (int iy = 0; iy < npt; ++iy) {
          const Mat d = displacement_matrix(cplx(xs[ix], xs[iy]), red.cutoff);
          chi(ix, iy) = (rho.transpose().cwiseProduct(d)).sum();
        }
      WignerGrid w;
      w.q = qs;
      w.p = ps;
      w.w = chi_to_wigner(chi, xs, xs, qs, ps);
      const double neg = w.negativity_volume();
      best.values(it, ip) = neg;
      if (neg > best.negativity) {
        best.negativity = neg;
        best.theta = thetas[it];
        best.phi = phis[ip];
      }
    }
  return best;
}

ReducedWignerResult reduced_wigner_actual(const FockKet& ket, const JointSvd& js, double eta,
                                          int nk_actual, const GridSpec& spec) {
  const int m = ket.basis->m_signal();
  const int dim = static_cast<int>(js.g_s.rows());
  // G_script = [I 0] G^dag: the actual-channel rows of the supermode map
  const Mat gscript_s = js.g_s.adjoint().topRows(nk_actual);
  const Mat gscript_i = js.g_i.transpose().topRows(nk_actual);
  // row-orthonormal, so the pseudo-inverse is the adjoint
  const Vec beta_s = gscript_s.adjoint().col(0);
  const Vec beta_i = gscript_i.adjoint().col(0);
  const Vec w_s = (beta_s.transpose() * gscript_s).transpose();
  const Vec w_i = (beta_i.transpose() * gscript_i).transpose();

  ModeCoefficients exact;
  exact.mode_ids = {0, m};
  exact.c.resize(2);
  exact.c[0] = w_s[0] / std::sqrt(2.0);
  exact.c[1] = w_i[0] / std::sqrt(2.0);
  exact.d = Vec::Zero(2);
  exact.unret_c.resize(2 * (dim - 1));
  exact.unret_d = Vec::Zero(2 * (dim - 1));
  for (int u = 1; u < dim; ++u) {
    exact.unret_c[2 * (u - 1)] = w_s[u] / std::sqrt(2.0);
    exact.unret_c[2 * (u - 1) + 1] = w_i[u] / std::sqrt(2.0);
  }

  ModeCoefficients approx;
  approx.mode_ids = {0, m};
  approx.c.resize(2);
  approx.c[0] = approx.c[1] = std::sqrt(eta) / std::sqrt(2.0);
  approx.d = Vec::Zero(2);
  approx.unret_c.resize(1);
  approx.unret_c[0] = std::sqrt(std::max(0.0, 1.0 - eta));
  approx.unret_d = Vec::Zero(1);

  ReducedWignerResult res;
  res.exact = wigner(ket, exact, spec);
  res.approx = wigner(ket, approx, spec);
  const double scale = res.exact.w.cwiseAbs().maxCoeff();
  res.path_difference = (res.exact.w - res.approx.w).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
  return res;
}

double effective_squeezing(const WignerGrid& wg) {
  double s = 0, mq = 0, mp = 0;
  for (int i = 0; i < wg.q.size(); ++i)
    for (int j = 0; j < wg.p.size(); ++j) {
      const double w = wg.w(i, j);
      s += w;
      mq += w * wg.q[i];
      mp += w * wg.p[j];
    }
  mq /= s;
  mp /= s;
  double cqq = 0, cpp = 0, cqp = 0;
  for (int i = 0; i < wg.q.size(); ++i)
    for (int j = 0; j < wg.p.size(); ++j) {
      const double w = wg.w(i, j);
      cqq += w * (wg.q[i] - mq) * (wg.q[i] - mq);
      cpp += w * (wg.p[j] - mp) * (wg.p[j] - mp);
      cqp += w * (wg.q[i] - mq) * (wg.p[j] - mp);
    }
  cqq /= s;
  cpp /= s;
  cqp /= s;
  const double tr = cqq + cpp, det = cqq * cpp - cqp * cqp;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double l1 = 0.5 * tr + disc, l2 = 0.5 * tr - disc;
  if (l2 <= 0) return 0.0;
  return 0.25 * std::log(l1 / l2);
}

}  // namespace spdc
