#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "spdc/nongauss.hpp"

using namespace spdc;

namespace {

Mat ladder(int dim) {
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

TEST_CASE("effective Hamiltonian matches a dense ladder-operator construction") {
  const int cutoff = 3, dim = cutoff + 1;
  auto basis = std::make_shared<FockBasis>(FockBasis::build(1, 1, cutoff, false));
  SupermodeHamiltonian sh(basis);

  FrameCoefficients fc;
  fc.t = 0.0;
  fc.r = RVec::Constant(1, 0.73);
  fc.pump_weight = Mat::Constant(1, 1, cplx(0.21, -0.43));
  fc.gen_s = Mat::Constant(1, 1, cplx(0.0, 0.17));   // anti-Hermitian 1x1
  fc.gen_i = Mat::Constant(1, 1, cplx(0.0, -0.05));
  fc.gen_p = Mat::Constant(1, 1, cplx(0.0, 0.02));
  sh.update(fc);
  const Mat h = sh.hamiltonian().dense(basis->dim());

  // independent dense assembly
  const Mat a = ladder(dim), id = Mat::Identity(dim, dim);
  const Mat a_s = Eigen::kroneckerProduct(a, Eigen::kroneckerProduct(id, id).eval()).eval();
  const Mat a_i = Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(a, id).eval()).eval();
  const Mat b_p = Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(id, a).eval()).eval();
  const double ch = std::cosh(fc.r[0]), shr = std::sinh(fc.r[0]);
  const cplx k = fc.pump_weight(0, 0);
  Mat href = k * b_p.adjoint() *
             (ch * ch * a_i * a_s + shr * ch * a_i.adjoint() * a_i +
              ch * shr * a_s.adjoint() * a_s + shr * shr * a_i.adjoint() * a_s.adjoint());
  href += href.adjoint().eval();
  href += (-I * fc.gen_s(0, 0)) * a_s.adjoint() * a_s;
  href += (-I * fc.gen_i(0, 0)) * a_i.adjoint() * a_i;
  href += (-I * fc.gen_p(0, 0)) * b_p.adjoint() * b_p;

  CHECK((h - href).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero coupling gives a zero Hamiltonian") {
  auto basis = std::make_shared<FockBasis>(FockBasis::build(2, 1, 2, true));
  SupermodeHamiltonian sh(basis);
  FrameCoefficients fc;
  fc.r = RVec::Zero(2);
  fc.pump_weight = Mat::Zero(1, 4);
  fc.gen_s = Mat::Zero(2, 2);
  fc.gen_i = Mat::Zero(2, 2);
  fc.gen_p = Mat::Zero(1, 1);
  sh.update(fc);
  Vec v(basis->dim()), out(basis->dim());
  v.setRandom();
  sh.hamiltonian().apply(v, out);
  CHECK(out.norm() == 0.0);
}

TEST_CASE("r = 0 leaves only the pair-conversion family") {
  const int cutoff = 2;
  auto basis = std::make_shared<FockBasis>(FockBasis::build(1, 1, cutoff, false));
  SupermodeHamiltonian sh(basis);
  FrameCoefficients fc;
  fc.r = RVec::Zero(1);
  fc.pump_weight = Mat::Constant(1, 1, cplx(0.5, 0.0));
  fc.gen_s = Mat::Zero(1, 1);
  fc.gen_i = Mat::Zero(1, 1);
  fc.gen_p = Mat::Zero(1, 1);
  sh.update(fc);
  const Mat h = sh.hamiltonian().dense(basis->dim());
  // <110|H|001> = 0.5 from B+ A_I A_S + H.c., nothing else from vacuum
  const int from = basis->find({0, 0, 1});
  const int to = basis->find({1, 1, 0});
  CHECK(std::abs(h(to, from) - 0.5) < 1e-14);
  // number-nonconserving families absent: acting on vacuum gives nothing
  Vec vac = Vec::Zero(basis->dim());
  vac[basis->vacuum_index()] = 1.0;
  Vec out(basis->dim());
  sh.hamiltonian().apply(vac, out);
  CHECK(out.norm() == 0.0);
}

TEST_CASE("basis-drift generators: O(h^2) defect and exact limit") {
  // G(t) = exp(i K t) rows for Hermitian K: the exact generator is known
  const int n = 4, m = 2;
  Mat k(n, n);
  k.setRandom();
  k = 0.5 * (k + k.adjoint()).eval();
  auto frame_at = [&](double t) {
    AlignedFrame fr;
    fr.t = t;
    Eigen::SelfAdjointEigenSolver<Mat> es(k);
    Vec ph(n);
    for (int i = 0; i < n; ++i) ph[i] = std::exp(I * es.eigenvalues()[i] * t);
    const Mat g = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    fr.g_s = g;
    fr.g_i = g;
    fr.r = RVec::LinSpaced(n, 1.0, 0.2);
    fr.x_p = Mat::Identity(n, 1);
    fr.d = RVec::Ones(1);
    fr.q_cols = Mat::Zero(n * n, 1);
    return fr;
  };
  SupermodeTruncation tr;
  tr.m = m;
  tr.l = 1;
  tr.n = 2;
  auto defect_at = [&](double h) {
    FrameCoefficients fc = frame_coefficients(frame_at(0.0), tr);
    add_basis_drift(fc, frame_at(-h), frame_at(0.0), frame_at(h), tr);
    return fc;
  };
  const FrameCoefficients c1 = defect_at(0.02);
  const FrameCoefficients c2 = defect_at(0.01);
  CHECK(c1.drift_defect / c2.drift_defect > 3.0);
  CHECK(c1.drift_defect / c2.drift_defect < 5.0);
  // central difference converges to the analytic generator
  // dG*/dt G^T = -i K* at t=0
  const Mat expected = (-I * k.conjugate()).topLeftCorner(m, m);
  CHECK((c2.gen_s - expected).cwiseAbs().maxCoeff() < 1e-3);

  // a static series has no drift
  FrameCoefficients st = frame_coefficients(frame_at(0.3), tr);
  add_basis_drift(st, frame_at(0.3), frame_at(0.3), frame_at(0.3), tr);
  CHECK(st.gen_s.norm() == 0.0);
}

TEST_CASE("vacuum stays vacuum under zero Hamiltonian evolution") {
  SupermodeTruncation tr;
  tr.m = 2;
  tr.l = 1;
  tr.n = 3;
  NonGaussEvolver ev(tr);
  auto frame_at = [&](double t) {
    AlignedFrame fr;
    fr.t = t;
    const int dim = 6;
    fr.g_s = Mat::Identity(dim, dim);
    fr.g_i = Mat::Identity(dim, dim);
    fr.f_s = Mat::Identity(dim, dim);
    fr.f_i = Mat::Identity(dim, dim);
    fr.r = RVec::Zero(dim);
    fr.x_p = Mat::Identity(3, 1);
    fr.d = RVec::Zero(1);
    fr.q_cols = Mat::Zero(dim * dim, 1);
    return fr;
  };
  for (int i = 0; i < 5; ++i) ev.push_frame(frame_at(0.1 * i));
  const NonGaussResult res = ev.finish();
  CHECK(res.populations.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.max_norm_drift < 1e-14);
  CHECK(res.ket.c[res.ket.basis->vacuum_index()] == cplx(1.0, 0.0));
}
