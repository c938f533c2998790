#pragma once

#include <deque>

#include "spdc/decomp.hpp"
#include "spdc/fock.hpp"

namespace spdc {

struct SupermodeTruncation {
  int m = 2;        // retained signal (= idler) supermodes
  int l = 1;        // retained pump supermodes
  int n = 16;       // Fock cutoff per mode
  bool sector = true;
};

// Compressed Hamiltonian data for one time sample in the supermode basis.
struct FrameCoefficients {
  double t = 0.0;
  RVec r;           // M
  Mat pump_weight;  // L x (M*M), D_l Q^dag restricted to retained pairs
  Mat gen_s, gen_i; // M x M basis-drift generators dG* /dt G^T etc.
  Mat gen_p;        // L x L
  double drift_defect = 0.0;  // anti-Hermiticity defect of raw generators
};

FrameCoefficients frame_coefficients(const AlignedFrame& fr, const SupermodeTruncation& tr);

// Central-difference basis-drift generators; prev/next may alias mid at
// the series endpoints (one-sided differences).
void add_basis_drift(FrameCoefficients& mid, const AlignedFrame& prev, const AlignedFrame& cur,
                     const AlignedFrame& next, const SupermodeTruncation& tr);

// Fixed monomial structure of H_eff + H~_L over a Fock basis; coefficients
// refreshed per frame.
class SupermodeHamiltonian {
 public:
  SupermodeHamiltonian(std::shared_ptr<const FockBasis> basis);
  void update(const FrameCoefficients& fc);
  const AssembledHamiltonian& hamiltonian() const { return ham_; }
  double hermiticity_residual(int probe_dim = -1) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  std::vector<MonomialOp> ops_;
  struct Slot {
    int lam, u, v, family;  // family 0..3 = Heff terms, 4..6 = drift S/I/P
    bool conjugated;
    int op_index;
  };
  std::vector<Slot> slots_;
  AssembledHamiltonian ham_;
};

struct NonGaussResult {
  FockKet ket;
  std::vector<double> times;
  RMat populations;       // sample x mode
  double max_norm_drift = 0.0;
  double max_drift_defect = 0.0;
  std::vector<FrameCoefficients> frames;  // retained for measurement stages
};

// Consumes a stream of aligned frames (uniform cadence) and evolves the
// residual ket with the frozen Hamiltonian over each interval.
class NonGaussEvolver {
 public:
  NonGaussEvolver(const SupermodeTruncation& tr);
  void push_frame(AlignedFrame fr);
  NonGaussResult finish();

 private:
  void advance(const FrameCoefficients& fc, double dt);
  void record(double t);
  SupermodeTruncation tr_;
  std::deque<AlignedFrame> window_;
  std::shared_ptr<FockBasis> basis_;
  std::unique_ptr<SupermodeHamiltonian> ham_;
  FockKet ket_;
  NonGaussResult out_;
  bool first_ = true;
};

}  // namespace spdc
