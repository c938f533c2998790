#include <doctest.h>

#include "spdc/config.hpp"
#include "spdc/fock.hpp"

using namespace spdc;

TEST_CASE("basis enumeration and sector restriction") {
  const FockBasis full = FockBasis::build(1, 1, 3, false);
  CHECK(full.dim() == 4 * 4 * 4);
  const FockBasis sector = FockBasis::build(1, 1, 3, true);
  CHECK(sector.dim() == 4 * 4);  // n_S == n_I
  for (int i = 0; i < sector.dim(); ++i) {
    const auto& occ = sector.occupations(i);
    CHECK(occ[0] == occ[1]);
  }
  CHECK(sector.find({1, 2, 0}) == -1);
  CHECK(sector.find({2, 2, 1}) >= 0);
  CHECK(full.vacuum_index() == full.find({0, 0, 0}));
}

TEST_CASE("monomial operators implement ladder algebra") {
  auto basis = FockBasis::build(1, 1, 4, false);
  const MonomialOp create_s(basis, {{0}, {}});
  const MonomialOp number_s(basis, {{0}, {0}});
  Vec v = Vec::Zero(basis.dim());
  v[basis.find({2, 0, 0})] = 1.0;
  Vec out = Vec::Zero(basis.dim());
  create_s.accumulate(1.0, v, out);
  CHECK(std::abs(out[basis.find({3, 0, 0})] - std::sqrt(3.0)) < 1e-14);
  out.setZero();
  number_s.accumulate(1.0, v, out);
  CHECK(std::abs(out[basis.find({2, 0, 0})] - 2.0) < 1e-14);
  // creation at the cutoff truncates to nothing
  v.setZero();
  v[basis.find({4, 0, 0})] = 1.0;
  out.setZero();
  create_s.accumulate(1.0, v, out);
  CHECK(out.norm() == 0.0);
}

TEST_CASE("evolve_exp realizes a displacement and preserves norm") {
  auto basis = FockBasis::build(1, 0, 6, false);
  REQUIRE(basis.modes() == 2);  // one signal, one idler slot
  const MonomialOp up(basis, {{0}, {}});
  const MonomialOp dn(basis, {{}, {0}});
  const cplx beta(0.4, -0.3);
  AssembledHamiltonian h;
  h.ops = {&up, &dn};
  h.coeffs = {I * beta, std::conj(I * beta)};
  Vec psi = Vec::Zero(basis.dim());
  psi[basis.vacuum_index()] = 1.0;
  evolve_exp(h, 1.0, psi);
  CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-12);
  double err = 0.0;
  const double lognorm = -0.5 * std::norm(beta);
  for (int n = 0; n <= 6; ++n) {
    cplx amp = std::exp(lognorm) * std::pow(beta, n);
    for (int k = 1; k <= n; ++k) amp /= std::sqrt(static_cast<double>(k));
    err = std::max(err, std::abs(psi[basis.find({static_cast<uint8_t>(n), 0})] - amp));
  }
  CHECK(err < 2e-5);
}

TEST_CASE("vacuum ket and populations") {
  auto basis = std::make_shared<FockBasis>(FockBasis::build(2, 1, 3, true));
  FockKet k = vacuum_ket(basis);
  CHECK(k.norm2() == doctest::Approx(1.0));
  CHECK(mode_populations(k).maxCoeff() == 0.0);

  k.c.setZero();
  k.c[basis->find({0, 1, 0, 1, 2})] = 1.0;
  const RVec pop = mode_populations(k);
  CHECK(pop[1] == doctest::Approx(1.0));
  CHECK(pop[3] == doctest::Approx(1.0));
  CHECK(pop[4] == doctest::Approx(2.0));
  CHECK(pop[0] == 0.0);
}

TEST_CASE("schmidt reduction of product and entangled kets") {
  auto basis = std::make_shared<FockBasis>(FockBasis::build(1, 1, 2, false));
  FockKet k = vacuum_ket(basis);
  k.c.setZero();
  k.c[basis->find({1, 0, 0})] = 1.0 / std::sqrt(2.0);
  k.c[basis->find({1, 0, 1})] = 1.0 / std::sqrt(2.0);
  ReducedState red = reduce_ket(k, {0});
  CHECK(red.weights.size() == 1);
  CHECK(red.weights[0] == doctest::Approx(1.0));
  CHECK(std::abs(red.vectors(1, 0)) == doctest::Approx(1.0));

  k.c.setZero();
  k.c[basis->find({0, 0, 0})] = 1.0 / std::sqrt(2.0);
  k.c[basis->find({1, 1, 0})] = 1.0 / std::sqrt(2.0);
  red = reduce_ket(k, {0});
  REQUIRE(red.weights.size() == 2);
  CHECK(red.weights[0] == doctest::Approx(0.5));
  CHECK(red.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("cutoff guard") { CHECK_THROWS_AS(FockBasis::build(1, 1, 64, false), ConfigError); }
