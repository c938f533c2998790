#pragma once

#include "spdc/fock.hpp"
#include "spdc/gaussian.hpp"
#include "spdc/nongauss.hpp"

namespace spdc {

// Homodyne local oscillator over the actual-channel signal and idler
// wavenumbers, normalized to (f_S^† f_S + f_I^† f_I)/2 = 1.
struct LocalOscillator {
  Vec f_signal, f_idler;
  double norm_value() const {
    return 0.5 * (f_signal.squaredNorm() + f_idler.squaredNorm());
  }
};

// X-quadrature noise for a given LO; vacuum level is 1.
double quadrature_noise(const LocalOscillator& lo, const MomentSet& mom);

struct HomodyneResult {
  double min_noise = 1.0;
  double max_noise = 1.0;
  LocalOscillator lo;
  bool squeezed = false;  // min_noise < 1
};

// Lagrange-multiplier optimum over all normalized LO shapes.
HomodyneResult optimal_homodyne(const MomentSet& mom);

// closed-form approximation to the minimum noise
double analytic_min_noise(double r1, double eta_s, double eta_i);

inline double noise_db(double noise) { return 10.0 * std::log10(noise); }

struct GridSpec {
  int chi_points = 64;
  double chi_halfwidth = 6.0;
  int out_points = 101;
  double out_halfwidth = 4.0;
  bool auto_widen = true;
  double boundary_tol = 1e-6;
};

struct WignerGrid {
  RVec q, p;
  RMat w;
  double chi_halfwidth = 0.0;
  int chi_points = 0;
  double boundary_chi_max = 0.0;
  double normalization() const;  // quadrature of w over the grid
  double negativity_volume() const;
};

// Measured mode as a combination of retained supermodes:
//   E = sum_l c[l] A_l + d[l] A^dag_l  over ket modes mode_ids[l],
// plus closed-form Gaussian noise from coefficients on modes outside the
// ket (unret_c/unret_d).
struct ModeCoefficients {
  std::vector<int> mode_ids;
  Vec c, d;
  Vec unret_c, unret_d;
};

// hybrid pump/signal/idler mode of the three leading supermodes
ModeCoefficients hybrid_mode(double theta, double phi, const FockBasis& basis);

// Characteristic function chi(x,y) = <exp(gamma E^dag - H.c.)> times the
// unretained-mode Gaussian factor, then W = FT[chi] with kernel
// exp(2i(px-qy))/pi^2.
WignerGrid wigner(const FockKet& ket, const ModeCoefficients& mode, const GridSpec& spec);

double negativity_volume(const WignerGrid& w);

struct AngleScanResult {
  double theta = 0.0, phi = 0.0, negativity = 0.0;
  RMat values;  // theta x phi
};

AngleScanResult angle_scan(const FockKet& ket, const RVec& thetas, const RVec& phis,
                           GridSpec spec);

// Reduced Wigner function of the actual channel (pseudo-inverse LO route
// and closed-form approximation).
struct ReducedWignerResult {
  WignerGrid exact;
  WignerGrid approx;
  double path_difference = 0.0;  // max-norm between the two
};

ReducedWignerResult reduced_wigner_actual(const FockKet& ket, const JointSvd& js, double eta,
                                          int nk_actual, const GridSpec& spec);

// single-mode displacement matrix <m|D(beta)|n> up to cutoff
Mat displacement_matrix(cplx beta, int cutoff);

// moment-based Gaussian fit: half the log ratio of principal-axis widths
double effective_squeezing(const WignerGrid& w);

}  // namespace spdc
