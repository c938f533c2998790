#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "spdc/types.hpp"

namespace spdc {

// Occupation-number basis over M signal + M idler + L pump supermodes with
// per-mode cutoff N.  Mode order: signal 0..M-1, idler M..2M-1, pump
// 2M..2M+L-1.  The SPDC effective Hamiltonian conserves n_S - n_I, so a
// vacuum-seeded evolution can restrict to the symmetric sector.
class FockBasis {
 public:
  static FockBasis build(int m_signal, int l_pump, int cutoff, bool si_sector);

  int dim() const { return static_cast<int>(occ_.size()); }
  int modes() const { return 2 * m_ + l_; }
  int m_signal() const { return m_; }
  int l_pump() const { return l_; }
  int cutoff() const { return n_; }
  bool sector() const { return sector_; }

  const std::vector<uint8_t>& occupations(int idx) const { return occ_[idx]; }
  int find(const std::vector<uint8_t>& occ) const;
  int vacuum_index() const;

  static uint64_t pack(const std::vector<uint8_t>& occ);

 private:
  int m_ = 0, l_ = 0, n_ = 0;
  bool sector_ = false;
  std::vector<std::vector<uint8_t>> occ_;
  std::unordered_map<uint64_t, int32_t> index_;
};

// Normal-ordered ladder monomial: apply annihilations first, then
// creations; mode multiplicity by repetition.
struct LadderMonomial {
  std::vector<int> create, annihilate;
};

// Cached action of one monomial on a fixed basis, in gather form:
// (T v)[row] = amp[row] * v[src[row]].
class MonomialOp {
 public:
  MonomialOp(const FockBasis& basis, const LadderMonomial& mono);
  void accumulate(cplx coeff, const Vec& in, Vec& out) const;
  double max_amplitude() const { return max_amp_; }

 private:
  std::vector<int32_t> src_;
  std::vector<double> amp_;
  double max_amp_ = 0.0;
};

// H = sum_k coeff_k * op_k with per-step coefficients.  Hermiticity is the
// caller's responsibility (terms come in conjugate pairs).
struct AssembledHamiltonian {
  std::vector<const MonomialOp*> ops;
  std::vector<cplx> coeffs;
  void apply(const Vec& in, Vec& out) const;
  double norm_bound() const;
  Mat dense(int dim) const;  // for small-dimension tests
};

// psi <- exp(-i H dt) psi by sub-stepped Taylor summation; preserves the
// norm to machine precision for Hermitian H.
void evolve_exp(const AssembledHamiltonian& h, double dt, Vec& psi);

struct FockKet {
  std::shared_ptr<const FockBasis> basis;
  Vec c;
  double norm2() const { return c.squaredNorm(); }
};

FockKet vacuum_ket(std::shared_ptr<const FockBasis> basis);

// occupation expectation per mode
RVec mode_populations(const FockKet& ket);

// Schmidt decomposition of the pure ket across keep-modes vs the rest:
// reduced density matrix rho = sum_m weights[m] |vec_m><vec_m| on the
// row-major product space of the kept modes.
struct ReducedState {
  std::vector<int> keep_modes;
  int cutoff = 0;
  int keep_dim = 0;
  std::vector<double> weights;
  Mat vectors;  // keep_dim x n_vectors
};

ReducedState reduce_ket(const FockKet& ket, const std::vector<int>& keep_modes,
                        double weight_floor = 1e-14);

}  // namespace spdc
