#include <doctest.h>

#include <random>

#include "spdc/decomp.hpp"

using namespace spdc;

namespace {

// random Bogoliubov pair via the forward map, for property tests
GaussianState random_state(int n, unsigned seed, double rscale = 1.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat j(n, n), hs(n, n), hi(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      j(i, k) = rscale * cplx(g(rng), g(rng));
      hs(i, k) = cplx(g(rng), g(rng));
      hi(i, k) = cplx(g(rng), g(rng));
    }
  SqueezerParams q;
  q.j = j;
  q.phi_s = 0.5 * (hs + hs.adjoint());
  q.phi_i = 0.5 * (hi + hi.adjoint());
  GaussianState s = squeezer_forward(q);
  s.t = 0.0;
  return s;
}

}  // namespace

TEST_CASE("joint svd of the vacuum is trivial") {
  GaussianState s;
  const int n = 6;
  s.v_ss = Mat::Identity(n, n);
  s.v_ii = Mat::Identity(n, n);
  s.w_si = Mat::Zero(n, n);
  s.w_is = Mat::Zero(n, n);
  const JointSvd js = joint_svd(s);
  CHECK(js.r.maxCoeff() == doctest::Approx(0.0));
  CHECK(js.unitarity_residual() < 1e-10);
  CHECK(js.reconstruction_residual(s) < 1e-10);
}

TEST_CASE("joint svd reconstructs random Bogoliubov states") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const GaussianState s = random_state(8, seed, 0.4);
    REQUIRE(bogoliubov_residual(s) < 1e-9);
    const JointSvd js = joint_svd(s);
    CHECK(js.unitarity_residual() < 1e-9);
    CHECK(js.reconstruction_residual(s) < 1e-8);
    for (int i = 1; i < js.r.size(); ++i) CHECK(js.r[i] <= js.r[i - 1] + 1e-12);
  }
}

TEST_CASE("joint svd refuses a state violating the identities") {
  GaussianState s = random_state(6, 7u, 0.3);
  s.v_ss(0, 1) += 0.1;
  CHECK_THROWS_AS(joint_svd(s), NumericalError);
}

TEST_CASE("squeezer extraction round trip") {
  for (unsigned seed : {11u, 12u}) {
    const GaussianState s = random_state(7, seed, 0.5);
    const SqueezerParams q = extract_squeezer(s);
    CHECK((q.u - q.u.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((q.alpha - q.alpha.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    const GaussianState back = squeezer_forward(q);
    CHECK((back.v_ss - s.v_ss).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((back.v_ii - s.v_ii).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((back.w_si - s.w_si).cwiseAbs().maxCoeff() < 1e-7);
    CHECK((back.w_is - s.w_is).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("scalar squeezer extraction") {
  const double r = 0.9, phi_s = 0.4, phi_i = -0.7, alpha = 1.1;
  GaussianState s;
  s.v_ss = Mat::Constant(1, 1, std::cosh(r) * std::exp(I * phi_s));
  s.v_ii = Mat::Constant(1, 1, std::cosh(r) * std::exp(I * phi_i));
  s.w_si = Mat::Constant(1, 1, std::sinh(r) * std::exp(I * (alpha - phi_i)));
  s.w_is = Mat::Constant(1, 1, std::sinh(r) * std::exp(I * (alpha - phi_s)));
  const SqueezerParams q = extract_squeezer(s);
  CHECK(std::abs(q.j(0, 0) - r * std::exp(I * alpha)) < 1e-10);
  CHECK(std::real(q.phi_s(0, 0)) == doctest::Approx(phi_s));
  CHECK(std::real(q.phi_i(0, 0)) == doctest::Approx(phi_i));
}

TEST_CASE("sinh(sigma)/sigma limit keeps unsqueezed modes finite") {
  SqueezerParams q;
  q.j = Mat::Zero(3, 3);
  q.j(0, 0) = 0.8;
  q.j(1, 1) = 1e-12;
  q.phi_s = Mat::Zero(3, 3);
  q.phi_i = Mat::Zero(3, 3);
  const GaussianState s = squeezer_forward(q);
  const SqueezerParams back = extract_squeezer(s);
  CHECK(std::abs(back.j(0, 0) - 0.8) < 1e-8);
  CHECK(std::abs(back.j(2, 2)) < 1e-8);
}

TEST_CASE("pump svd factors and reconstructs") {
  std::mt19937 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec a1(6), a2(6), b1(20), b2(20);
  for (int i = 0; i < 6; ++i) {
    a1[i] = cplx(g(rng), g(rng));
    a2[i] = cplx(g(rng), g(rng));
  }
  for (int i = 0; i < 20; ++i) {
    b1[i] = cplx(g(rng), g(rng));
    b2[i] = cplx(g(rng), g(rng));
  }
  const Mat l = a1 * b1.adjoint() + 0.03 * a2 * b2.adjoint();

  const PumpSvd full = pump_svd(l);
  const int rank = static_cast<int>(full.x.cols());
  REQUIRE(rank >= 2);
  CHECK((full.q.adjoint() * full.q - Mat::Identity(rank, rank)).cwiseAbs().maxCoeff() < 1e-10);
  const Mat rec = full.x * full.d.head(rank).asDiagonal() * full.q.adjoint();
  CHECK((rec - l).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 1; i < full.d.size(); ++i) CHECK(full.d[i] <= full.d[i - 1] + 1e-12);

  const PumpSvd lead = pump_svd_leading(l, 2);
  CHECK(lead.d[0] == doctest::Approx(full.d[0]).epsilon(1e-9));
  CHECK(lead.d[1] == doctest::Approx(full.d[1]).epsilon(1e-6));
  CHECK(std::abs(lead.x.col(0).dot(full.x.col(0))) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("phase alignment leaves static series unchanged and undoes gauges") {
  const GaussianState s = random_state(6, 21u, 0.4);
  const JointSvd js = joint_svd(s);
  Mat l = Mat::Zero(4, 36);
  l.row(0) = Vec::Ones(36).transpose();
  const PumpSvd ps = pump_svd(l, 2);

  PhaseAligner aligner;
  const AlignedFrame f1 = aligner.align(0.0, js, ps, 1);
  const AlignedFrame f2 = aligner.align(0.1, js, ps, 1);
  CHECK((f1.f_s - f2.f_s).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f1.g_i - f2.g_i).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(aligner.last_min_overlap() > 0.999999);

  // a random per-column gauge leaves the aligned frame invariant
  JointSvd jsg = js;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 2 * M_PI);
  for (int c = 0; c < jsg.f_s.cols(); ++c) {
    const cplx ph = std::exp(I * u(rng));
    jsg.f_s.col(c) *= ph;
    jsg.f_i.col(c) *= ph;
    jsg.g_s.row(c) *= std::conj(ph);
    jsg.g_i.row(c) *= std::conj(ph);
  }
  const AlignedFrame f3 = aligner.align(0.2, jsg, ps, 1);
  CHECK(aligner.last_min_overlap() > 0.999);
  CHECK((f3.f_s - f1.f_s).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((f3.g_s - f1.g_s).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("alignment follows modes through a constructed crossing") {
  auto mk = [](double r1, double r2, double mix) {
    SqueezerParams q;
    Mat rot(2, 2);
    rot << std::cos(mix), -std::sin(mix), std::sin(mix), std::cos(mix);
    RVec rv(2);
    rv << r1, r2;
    q.j = rot * rv.asDiagonal() * rot.transpose();
    q.phi_s = Mat::Zero(2, 2);
    q.phi_i = Mat::Zero(2, 2);
    return joint_svd(squeezer_forward(q));
  };
  PhaseAligner aligner;
  Mat l = Mat::Zero(2, 4);
  l(0, 0) = 1.0;
  const PumpSvd ps = pump_svd(l, 1);
  const AlignedFrame a = aligner.align(0.0, mk(0.9, 0.3, 0.3), ps, 1);
  const AlignedFrame b = aligner.align(0.1, mk(0.31, 0.89, 0.3), ps, 1);
  CHECK(std::abs((a.f_s.col(0).adjoint() * b.f_s.col(0))(0, 0)) > 0.99);
  CHECK(std::abs((a.f_s.col(1).adjoint() * b.f_s.col(1))(0, 0)) > 0.99);
  // ordering follows the matching, not the singular-value sort
  CHECK(b.r[0] == doctest::Approx(0.31).epsilon(1e-6));
  CHECK(b.r[1] == doctest::Approx(0.89).epsilon(1e-6));
}
