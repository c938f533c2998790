#include "spdc/stretch.hpp"

#include <Eigen/SVD>

namespace spdc {

double StretchUnitary::constraint_residual() const {
  const int n = static_cast<int>(vbar.rows());
  const Mat id = Mat::Identity(n, n);
  const double r1 = (vbar.adjoint() * vbar - wbar.transpose() * wbar.conjugate() - id)
                        .cwiseAbs()
                        .maxCoeff();
  const double r2 =
      (wbar.transpose() * vbar.conjugate() - vbar.adjoint() * wbar).cwiseAbs().maxCoeff();
  return std::max(r1, r2);
}

StretchUnitary stretch_from_lossless(const GaussianState& lossless, int nk_s, int nk_i) {
  StretchUnitary su;
  su.nk_s = nk_s;
  su.nk_i = nk_i;
  const int n = nk_s + nk_i;
  su.vbar = Mat::Zero(n, n);
  su.wbar = Mat::Zero(n, n);
  su.vbar.topLeftCorner(nk_s, nk_s) = lossless.v_ss.topLeftCorner(nk_s, nk_s);
  su.vbar.bottomRightCorner(nk_i, nk_i) = lossless.v_ii.topLeftCorner(nk_i, nk_i);
  su.wbar.topRightCorner(nk_s, nk_i) = lossless.w_si.topLeftCorner(nk_s, nk_i);
  su.wbar.bottomLeftCorner(nk_i, nk_s) = lossless.w_is.topLeftCorner(nk_i, nk_s);
  return su;
}

ActualBlocks actual_channel_blocks(const GaussianState& lossy, int nk_s, int nk_i) {
  const int ds = static_cast<int>(lossy.v_ss.cols());
  const int di = static_cast<int>(lossy.v_ii.cols());
  ActualBlocks ab;
  ab.v_ac = Mat::Zero(nk_s + nk_i, ds + di);
  ab.w_ac = Mat::Zero(nk_s + nk_i, ds + di);
  ab.v_ac.topLeftCorner(nk_s, ds) = lossy.v_ss.topRows(nk_s);
  ab.v_ac.bottomRightCorner(nk_i, di) = lossy.v_ii.topRows(nk_i);
  ab.w_ac.topRightCorner(nk_s, di) = lossy.w_si.topRows(nk_s);
  ab.w_ac.bottomLeftCorner(nk_i, ds) = lossy.w_is.topRows(nk_i);
  return ab;
}

namespace {

Mat supermode_map(const JointSvd& js) {
  const int ds = static_cast<int>(js.g_s.rows());
  const int di = static_cast<int>(js.g_i.rows());
  Mat g = Mat::Zero(ds + di, ds + di);
  g.topLeftCorner(ds, ds) = js.g_s.adjoint();
  g.bottomRightCorner(di, di) = js.g_i.transpose();
  return g;
}

}  // namespace

Mat stretch_cmap(const StretchUnitary& su, const ActualBlocks& ab, const JointSvd& js) {
  return (su.vbar.adjoint() * ab.v_ac - su.wbar.transpose() * ab.w_ac.conjugate()) *
         supermode_map(js);
}

Mat stretch_dmap(const StretchUnitary& su, const ActualBlocks& ab, const JointSvd& js) {
  return (su.vbar.adjoint() * ab.w_ac - su.wbar.transpose() * ab.v_ac.conjugate()) *
         supermode_map(js).conjugate();
}

Vec optimal_stretch_lo(const Mat& cmap, const Vec& target) {
  Eigen::JacobiSVD<Mat> svd(cmap, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double floor = 1e-12 * svd.singularValues()[0];
  if (svd.singularValues()[0] <= 0)
    throw NumericalError("stretch C-map has collapsed rank");
  RVec inv = svd.singularValues();
  for (int i = 0; i < inv.size(); ++i) inv[i] = inv[i] > floor ? 1.0 / inv[i] : 0.0;
  // beta^T = target^T V inv U^dag  ->  beta = conj(pinv)^T target
  const Mat pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return pinv.transpose() * target;
}

StretchCoefficients stretch_coefficients(const StretchUnitary& su, const GaussianState& lossy,
                                         const JointSvd& js, const Vec& beta,
                                         const Vec& target) {
  const ActualBlocks ab = actual_channel_blocks(lossy, su.nk_s, su.nk_i);
  StretchCoefficients sc;
  sc.beta = beta;
  sc.c = (beta.transpose() * stretch_cmap(su, ab, js)).transpose();
  sc.d = (beta.transpose() * stretch_dmap(su, ab, js)).transpose();
  sc.c_target_residual = (sc.c - target).cwiseAbs().maxCoeff();
  sc.d_max = sc.d.cwiseAbs().maxCoeff();
  return sc;
}

WignerGrid stretched_wigner(const FockKet& ket, const StretchCoefficients& sc,
                            const GridSpec& spec) {
  const int m = ket.basis->m_signal();
  const int total = static_cast<int>(sc.c.size());
  const int dim_s = total / 2;
  ModeCoefficients mc;
  mc.mode_ids = {0, m};  // S1, I1 in the ket
  mc.c.resize(2);
  mc.d.resize(2);
  mc.c[0] = sc.c[0];
  mc.c[1] = sc.c[dim_s];
  mc.d[0] = sc.d[0];
  mc.d[1] = sc.d[dim_s];
  mc.unret_c.resize(total - 2);
  mc.unret_d.resize(total - 2);
  int k = 0;
  for (int u = 0; u < total; ++u) {
    if (u == 0 || u == dim_s) continue;
    mc.unret_c[k] = sc.c[u];
    mc.unret_d[k] = sc.d[u];
    ++k;
  }
  return wigner(ket, mc, spec);
}

Vec stretch_target_hybrid(int dim_s, int dim_i) {
  Vec t = Vec::Zero(dim_s + dim_i);
  t[0] = 1.0 / std::sqrt(2.0);
  t[dim_s] = 1.0 / std::sqrt(2.0);
  return t;
}

Vec stretch_target_first(int dim_s, int dim_i) {
  Vec t = Vec::Zero(dim_s + dim_i);
  t[0] = 1.0;
  return t;
}

}  // namespace spdc
