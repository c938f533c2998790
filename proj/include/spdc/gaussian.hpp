#pragma once

#include <functional>
#include <vector>

#include "spdc/model.hpp"

namespace spdc {

// Pump displacement and Bogoliubov matrices at one time.  Dimensions:
// x is nk_p, V/W are (2nk_s) x (2nk_i) shaped blocks (square when the
// signal and idler grids match, which build_model enforces).
struct GaussianState {
  double t = 0.0;
  Vec x;
  Mat v_ss, v_ii, w_si, w_is;
};

GaussianState initial_gaussian_state(const Model& m);

// Right-hand side of the Gaussian equations of motion.  delta and z are
// the contractions of Λ(t) defined alongside the ODEs; z is materialized
// here for inspection, the integrator itself works with its rank-1
// factors.
struct GaussianRhs {
  Vec delta;
  Mat z;
  Vec dx;
  Mat dv_ss, dv_ii, dw_si, dw_is;
};

GaussianRhs gaussian_rhs(const CouplingSpec& cs, const GaussianState& s);

// max-norm violation of the two Bogoliubov identities
double bogoliubov_residual(const GaussianState& s);

struct MomentSet {
  Mat m_si, n_ss, n_ii;
  int nk = 0;  // actual-channel block size
  Mat m_acac() const { return m_si.topLeftCorner(nk, nk); }
  Mat n_ss_acac() const { return n_ss.topLeftCorner(nk, nk); }
  Mat n_ii_acac() const { return n_ii.topLeftCorner(nk, nk); }
};

MomentSet moments(const GaussianState& s);

double pump_depletion(const Vec& x, double n_pump);

struct TimeSample {
  double t = 0.0;
  double n_pump = 0.0;
  double pair_number = 0.0;
  double depletion = 0.0;
  double identity_residual = 0.0;
};

struct PerturbativeCheck {
  double norm1 = 0.0;                       // <psi1|psi1> at t1
  std::vector<double> times;                // Gamma_P units
  std::vector<double> norm_history;         // accumulated norm up to t
  bool monotone = true;
};

struct IntegrateOptions {
  bool accumulate_dyson = false;
  // called at the save cadence with the current state
  std::function<void(const GaussianState&)> frame_observer;
  std::vector<double> snapshot_times;  // exact state copies near these times
  bool check_identities = true;
};

struct IntegrationResult {
  GaussianState state;  // at t1
  std::vector<TimeSample> series;
  PerturbativeCheck dyson;
  std::vector<GaussianState> snapshots;
  double max_identity_residual = 0.0;
};

IntegrationResult integrate(const Model& m, const IntegrateOptions& opt = {});

// Dyson first-order tensor O at time t1, materialized (index order
// mu1', mu2', mu3 row-major); used by tests and available on demand.
std::vector<cplx> dyson_tensor(const Model& m);

}  // namespace spdc
