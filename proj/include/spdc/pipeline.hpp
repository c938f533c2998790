#pragma once

#include "spdc/measure.hpp"
#include "spdc/nongauss.hpp"
#include "spdc/oracle.hpp"
#include "spdc/stretch.hpp"

namespace spdc {

struct GaussianRunResult {
  Model model;
  IntegrationResult integ;
  MomentSet mom;
  HomodyneResult homodyne;
  double depletion_t1 = 0.0;
  double efficiency_t1 = 0.0;
  RVec joint_spectrum;  // r at t1, descending
  RVec pump_spectrum;   // D at t1, descending
};

// Gaussian stage at t1 with homodyne and decomposition spectra.
GaussianRunResult run_gaussian(const SystemParams& p, bool with_dyson = false,
                               bool lossless_signal_idler = false,
                               bool with_spectra = true);

struct NonGaussRunResult {
  Model model;
  GaussianState state_t1;
  MomentSet mom;
  HomodyneResult homodyne;
  NonGaussResult ng;
  AlignedFrame frame_t1;
  JointSvd joint_t1;
};

// Full pipeline: Gaussian integration streaming aligned decompositions
// into the truncated supermode evolution.
NonGaussRunResult run_nongauss(const SystemParams& p);

struct StretchRunResult {
  NonGaussRunResult lossy;
  StretchUnitary unitary;
  StretchCoefficients coeffs;
  WignerGrid wigner;
  double lossless_constraint_residual = 0.0;
};

// Stretching analysis: lossless reference run for the inverse unitary,
// pseudo-inverse LO against the supplied target combination.
StretchRunResult run_stretch(const SystemParams& lossy, const Vec& target_or_empty = Vec());

struct SweepPoint {
  double energy_pj = 0.0;
  double squeezing_db = 0.0, antisqueezing_db = 0.0;
  double photon_number = 0.0, efficiency = 0.0, depletion = 0.0;
  double dyson_norm = 0.0;
  bool ok = false;
  std::string error;
};

std::vector<SweepPoint> energy_sweep(const SystemParams& base, const std::vector<double>& energies_pj,
                                     bool with_dyson, int threads);

}  // namespace spdc
