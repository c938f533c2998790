#pragma once

#include "spdc/measure.hpp"
#include "spdc/nongauss.hpp"

namespace spdc {

// Three-mode trilinear model, dimensionless units: H(t) =
//   lambda e^{i(dw0+det_s+det_i-det_p)t} a+_S a+_I b_P + H.c.
struct TinyModel {
  cplx lambda{0.0, 0.0};
  double det_s = 0.0, det_i = 0.0, det_p = 0.0;
  double delta_omega0 = 0.0;
  int cutoff = 24;  // shared per-mode cutoff
  cplx x0{3.0, 0.0};
  double t0 = 0.0, t1 = 6.0, dt = 1e-3;
};

struct TinyEvolveResult {
  FockKet ket;
  std::vector<double> times;
  RMat populations;       // sample x (signal, idler, pump)
  double charge_drift = 0.0;   // relative drift of 2N_P + N_S + N_I
  double boundary_weight = 0.0;
};

TinyEvolveResult oracle_evolve(const TinyModel& tm, int save_every = 100);

// Equivalent single-bin CouplingSpec/Model for the main pipeline (the
// phantom channel is carried with zero coupling).
Model tiny_gaussian_model(const TinyModel& tm, double identity_tol = 1e-8);

struct PipelineComparison {
  double fidelity = 0.0;            // |<oracle|U|psi~>|^2
  double fidelity_gaussian = 0.0;   // |<oracle|U|vac>|^2
  double pump_rel_err = 0.0;        // pipeline vs oracle <N_P>
  double pair_rel_err = 0.0;        // pipeline vs oracle <N_S>
  double pair_rel_err_gaussian = 0.0;
  double oracle_pump = 0.0, oracle_pairs = 0.0;
};

// Runs the Gaussian + decomposition + non-Gaussian pipeline on the tiny
// model, composes U(t1)|psi~(t1)> in the oracle basis and compares.
PipelineComparison compare_pipeline(const TinyModel& tm, int fock_cutoff_ng = 14);

}  // namespace spdc
