#include "spdc/decomp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace spdc {

namespace {

// Hermitian generator of a (numerically) unitary matrix via Schur form.
Mat hermitian_log(const Mat& u) {
  Eigen::ComplexSchur<Mat> schur(u);
  const Mat& q = schur.matrixU();
  const Mat& t = schur.matrixT();
  const int n = static_cast<int>(u.rows());
  Vec theta(n);
  for (int i = 0; i < n; ++i) theta[i] = std::arg(t(i, i));
  Mat phi = q * theta.asDiagonal() * q.adjoint();
  return 0.5 * (phi + phi.adjoint());
}

Mat herm_exp_i(const Mat& phi) {
  Eigen::SelfAdjointEigenSolver<Mat> es(phi);
  Vec ph(phi.rows());
  for (int i = 0; i < phi.rows(); ++i) ph[i] = std::exp(I * es.eigenvalues()[i]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

// polar decomposition A = H * U with H Hermitian PSD, U unitary
void polar(const Mat& a, Mat& h, Mat& u) {
  Eigen::BDCSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  h = svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixU().adjoint();
  u = svd.matrixU() * svd.matrixV().adjoint();
}

double sinhc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

}  // namespace

double JointSvd::reconstruction_residual(const GaussianState& s) const {
  const auto ch = Eigen::VectorXd(r.array().cosh()).asDiagonal();
  const auto sh = Eigen::VectorXd(r.array().sinh()).asDiagonal();
  double res = (s.v_ss - f_s * ch * g_s).cwiseAbs().maxCoeff();
  res = std::max(res, (s.v_ii - f_i.conjugate() * ch * g_i.conjugate()).cwiseAbs().maxCoeff());
  res = std::max(res, (s.w_si - f_s * sh * g_i).cwiseAbs().maxCoeff());
  res = std::max(res, (s.w_is - f_i.conjugate() * sh * g_s.conjugate()).cwiseAbs().maxCoeff());
  return res;
}

double JointSvd::unitarity_residual() const {
  const int n = static_cast<int>(f_s.rows());
  const Mat id = Mat::Identity(n, n);
  double res = (f_s.adjoint() * f_s - id).cwiseAbs().maxCoeff();
  res = std::max(res, (f_i.adjoint() * f_i - id).cwiseAbs().maxCoeff());
  res = std::max(res, (g_s * g_s.adjoint() - id).cwiseAbs().maxCoeff());
  res = std::max(res, (g_i * g_i.adjoint() - id).cwiseAbs().maxCoeff());
  return res;
}

JointSvd joint_svd(const GaussianState& s, double identity_tol) {
  const double viol = bogoliubov_residual(s);
  if (viol > identity_tol)
    throw NumericalError("joint_svd: Bogoliubov identities violated on input (residual " +
                         std::to_string(viol) + ")");
  JointSvd js;
  Eigen::BDCSVD<Mat> svd(s.w_si, Eigen::ComputeFullU | Eigen::ComputeFullV);
  js.f_s = svd.matrixU();
  js.g_i = svd.matrixV().adjoint();
  js.r = svd.singularValues().array().asinh();
  const RVec inv_cosh = js.r.array().cosh().inverse();
  js.g_s = inv_cosh.asDiagonal() * (js.f_s.adjoint() * s.v_ss);
  js.f_i = ((s.v_ii * js.g_i.transpose()) * inv_cosh.asDiagonal()).conjugate();
  canonicalize_phases(js);
  return js;
}

void canonicalize_phases(JointSvd& js) {
  const int n = static_cast<int>(js.f_s.cols());
  for (int u = 0; u < n; ++u) {
    int imax = 0;
    js.f_s.col(u).cwiseAbs().maxCoeff(&imax);
    const cplx v = js.f_s(imax, u);
    if (std::abs(v) < 1e-300) continue;
    const cplx ph = std::conj(v) / std::abs(v);
    js.f_s.col(u) *= ph;
    js.f_i.col(u) *= ph;
    js.g_s.row(u) *= std::conj(ph);
    js.g_i.row(u) *= std::conj(ph);
  }
}

SqueezerParams extract_squeezer(const GaussianState& s) {
  SqueezerParams q;
  Mat h_s, r_s, h_i, r_i;
  polar(s.v_ss, h_s, r_s);
  polar(s.v_ii, h_i, r_i);
  q.phi_s = hermitian_log(r_s);
  q.phi_i = hermitian_log(r_i);

  Eigen::SelfAdjointEigenSolver<Mat> es(h_s);
  const int n = static_cast<int>(h_s.rows());
  RVec sigma(n), kinv(n);
  for (int i = 0; i < n; ++i) {
    const double c = std::max(1.0, es.eigenvalues()[i]);
    sigma[i] = std::acosh(c);
    kinv[i] = 1.0 / sinhc(sigma[i]);
  }
  q.u = es.eigenvectors() * sigma.asDiagonal() * es.eigenvectors().adjoint();
  const Mat k_inv = es.eigenvectors() * kinv.asDiagonal() * es.eigenvectors().adjoint();
  // J = K^{-1} W_SI exp(i phi_I*);  exp(i phi_I*) = R_I^T for Hermitian phi_I
  q.j = k_inv * s.w_si * r_i.transpose();

  Mat uj, ej;
  polar(q.j, uj, ej);
  q.alpha = hermitian_log(ej);
  return q;
}

GaussianState squeezer_forward(const SqueezerParams& q) {
  GaussianState s;
  auto rebuild = [](const Mat& j, RVec& sig, Mat& f, Mat& ej) {
    Eigen::BDCSVD<Mat> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    sig = svd.singularValues();
    f = svd.matrixU();
    ej = svd.matrixU() * svd.matrixV().adjoint();
  };
  RVec sig;
  Mat f, ej;
  rebuild(q.j, sig, f, ej);
  const Mat r_s = herm_exp_i(q.phi_s);
  const Mat r_i = herm_exp_i(q.phi_i);
  s.v_ss = f * RVec(sig.array().cosh()).asDiagonal() * f.adjoint() * r_s;
  s.w_si = f * RVec(sig.array().sinh()).asDiagonal() * f.adjoint() * ej * r_i.conjugate();

  RVec sig_t;
  Mat f_t, ej_t;
  rebuild(q.j.transpose().eval(), sig_t, f_t, ej_t);
  s.v_ii = f_t * RVec(sig_t.array().cosh()).asDiagonal() * f_t.adjoint() * r_i;
  s.w_is = f_t * RVec(sig_t.array().sinh()).asDiagonal() * f_t.adjoint() * ej_t * r_s.conjugate();
  return s;
}

Mat build_l_matrix(const JointSvd& js, const CouplingSpec& cs, double t) {
  const int ns = cs.dim_s(), ni = cs.dim_i(), np = cs.dim_p();
  Vec a_s(ns), a_i(ni), lp(np);
  for (int j = 0; j < ns; ++j)
    a_s[j] = std::conj(cs.f_signal[j] * std::exp(I * cs.ph_signal[j] * t));
  for (int j = 0; j < ni; ++j)
    a_i[j] = std::conj(cs.f_idler[j] * std::exp(I * cs.ph_idler[j] * t));
  const cplx pre = cs.scale * std::exp(-I * cs.delta_omega0 * t);
  for (int j = 0; j < np; ++j)
    lp[j] = pre * std::conj(cs.f_pump[j]) * std::exp(I * cs.ph_pump[j] * t);
  const Vec su = js.f_s.transpose() * a_s;
  const Vec wu = js.f_i.adjoint() * a_i;  // sum_mu conj(F_I[mu,u']) conj(a_I[mu])
  Mat l(np, ns * ni);
  for (int u = 0; u < ns; ++u)
    for (int v = 0; v < ni; ++v) l.col(u * ni + v) = (su[u] * wu[v]) * lp;
  return l;
}

PumpSvd pump_svd(const Mat& l, int max_rank) {
  PumpSvd ps;
  const int np = static_cast<int>(l.rows());
  const Mat gram = l * l.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  ps.d.resize(np);
  Mat xs(np, np);
  for (int i = 0; i < np; ++i) {
    const int src = np - 1 - i;  // descending
    ps.d[i] = std::sqrt(std::max(0.0, es.eigenvalues()[src]));
    xs.col(i) = es.eigenvectors().col(src);
  }
  int rank = np;
  if (max_rank > 0) rank = std::min(rank, max_rank);
  const double floor = 1e-12 * (ps.d[0] > 0 ? ps.d[0] : 1.0);
  int eff = 0;
  while (eff < rank && ps.d[eff] > floor) ++eff;
  eff = std::max(eff, std::min(rank, 1));
  ps.x = xs.leftCols(eff);
  ps.q.resize(l.cols(), eff);
  for (int i = 0; i < eff; ++i)
    ps.q.col(i) = (l.adjoint() * ps.x.col(i)) / (ps.d[i] > floor ? ps.d[i] : 1.0);
  return ps;
}

PumpSvd pump_svd_leading(const Mat& l, int rank, double tol) {
  PumpSvd ps;
  const int np = static_cast<int>(l.rows());
  rank = std::min(rank, np);
  ps.x.resize(np, rank);
  ps.q.resize(l.cols(), rank);
  ps.d.resize(rank);
  Mat deflated_basis(np, 0);
  for (int m = 0; m < rank; ++m) {
    // deterministic start: row of greatest norm, orthogonal to converged vectors
    int i0 = 0;
    l.rowwise().norm().maxCoeff(&i0);
    Vec v = Vec::Zero(np);
    v[i0] = 1.0;
    v[(i0 + m + 1) % np] += 0.5;  // break symmetry for higher vectors
    for (int it = 0; it < 200; ++it) {
      if (deflated_basis.cols() > 0) v -= deflated_basis * (deflated_basis.adjoint() * v);
      const double nv = v.norm();
      if (nv < 1e-300) break;
      v /= nv;
      Vec w = l * (l.adjoint() * v);
      if (deflated_basis.cols() > 0) w -= deflated_basis * (deflated_basis.adjoint() * w);
      const double nw = w.norm();
      if (nw < 1e-300) {
        v.setZero();
        break;
      }
      const double resid = (w - v * v.dot(w)).norm() / nw;
      v = w / nw;
      if (resid < tol) break;
    }
    Vec lv = l.adjoint() * v;
    const double d = lv.norm();
    ps.d[m] = d;
    ps.x.col(m) = v;
    ps.q.col(m) = d > 1e-300 ? Vec(lv / d) : Vec(Vec::Zero(l.cols()));
    deflated_basis.conservativeResize(np, m + 1);
    deflated_basis.col(m) = v;
  }
  return ps;
}

AlignedFrame PhaseAligner::align(double t, const JointSvd& js, const PumpSvd& ps, int pump_rank) {
  AlignedFrame fr;
  fr.t = t;
  fr.f_s = js.f_s;
  fr.f_i = js.f_i;
  fr.g_s = js.g_s;
  fr.g_i = js.g_i;
  fr.r = js.r;
  const int lrank = std::min<int>(pump_rank, static_cast<int>(ps.x.cols()));
  fr.x_p = ps.x.leftCols(lrank);
  fr.d = ps.d.head(lrank);
  fr.q_cols = ps.q.leftCols(lrank);

  const int n = static_cast<int>(fr.f_s.cols());
  if (have_prev_) {
    // greedy overlap matching of supermode columns
    RMat ov = (prev_f_s_.adjoint() * fr.f_s).cwiseAbs();
    std::vector<int> perm(n, -1);
    std::vector<bool> used_prev(n, false), used_cur(n, false);
    last_min_overlap_ = 1.0;
    for (int pick = 0; pick < n; ++pick) {
      int bi = -1, bj = -1;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        if (used_prev[i]) continue;
        for (int j = 0; j < n; ++j) {
          if (used_cur[j]) continue;
          if (ov(i, j) > best) {
            best = ov(i, j);
            bi = i;
            bj = j;
          }
        }
      }
      perm[bi] = bj;
      used_prev[bi] = true;
      used_cur[bj] = true;
      last_min_overlap_ = std::min(last_min_overlap_, best);
      if (bi != bj) ++crossings_;
    }
    auto permute = [&](Mat& cols, Mat& cols2, Mat& rows, Mat& rows2, RVec& r) {
      Mat fc(cols.rows(), n), fc2(cols2.rows(), n), gr(n, rows.cols()), gr2(n, rows2.cols());
      RVec rr(n);
      for (int i = 0; i < n; ++i) {
        fc.col(i) = cols.col(perm[i]);
        fc2.col(i) = cols2.col(perm[i]);
        gr.row(i) = rows.row(perm[i]);
        gr2.row(i) = rows2.row(perm[i]);
        rr[i] = r[perm[i]];
      }
      cols = std::move(fc);
      cols2 = std::move(fc2);
      rows = std::move(gr);
      rows2 = std::move(gr2);
      r = std::move(rr);
    };
    permute(fr.f_s, fr.f_i, fr.g_s, fr.g_i, fr.r);

    // cluster-wise unitary Procrustes onto the previous frame
    int start = 0;
    while (start < n) {
      int end = start + 1;
      while (end < n &&
             std::abs(fr.r[end] - fr.r[end - 1]) <= std::max(tol_, 1e-6 * (1.0 + fr.r[start])))
        ++end;
      const int w = end - start;
      const Mat m = fr.f_s.middleCols(start, w).adjoint() * prev_f_s_.middleCols(start, w);
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Mat b = svd.matrixU() * svd.matrixV().adjoint();
      fr.f_s.middleCols(start, w) = fr.f_s.middleCols(start, w) * b;
      fr.f_i.middleCols(start, w) = fr.f_i.middleCols(start, w) * b;
      fr.g_s.middleRows(start, w) = b.adjoint() * fr.g_s.middleRows(start, w);
      fr.g_i.middleRows(start, w) = b.adjoint() * fr.g_i.middleRows(start, w);
      start = end;
    }

    // pump columns: phase alignment on matched columns
    const int lp = static_cast<int>(fr.x_p.cols());
    for (int c = 0; c < lp && c < prev_x_.cols(); ++c) {
      const cplx o = prev_x_.col(c).dot(fr.x_p.col(c));
      if (std::abs(o) > 1e-12) {
        const cplx ph = o / std::abs(o);
        fr.x_p.col(c) *= ph;
        fr.q_cols.col(c) *= ph;
      }
    }
  }
  prev_f_s_ = fr.f_s;
  prev_x_ = fr.x_p;
  have_prev_ = true;
  return fr;
}

}  // namespace spdc
