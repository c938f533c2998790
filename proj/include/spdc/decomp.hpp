#pragma once

#include <optional>
#include <vector>

#include "spdc/gaussian.hpp"

namespace spdc {

// Joint singular-value decomposition of the Bogoliubov matrices:
//   V_SS = F_S cosh(r) G_S,   V_II = F_I* cosh(r) G_I*,
//   W_SI = F_S sinh(r) G_I,   W_IS = F_I* sinh(r) G_S*.
// r is sorted descending.
struct JointSvd {
  Mat f_s, f_i, g_s, g_i;
  RVec r;
  double reconstruction_residual(const GaussianState& s) const;
  double unitarity_residual() const;
};

JointSvd joint_svd(const GaussianState& s, double identity_tol = 1e-6);

// Squeezing matrix J and rotation matrices extracted from the polar
// decompositions of V_SS and V_II.
struct SqueezerParams {
  Mat j;              // squeezing matrix
  Mat phi_s, phi_i;   // Hermitian rotation generators
  Mat u, alpha;       // polar factors of J: J = u exp(i alpha)
};

SqueezerParams extract_squeezer(const GaussianState& s);

// Forward map: rebuild the Bogoliubov matrices from (J, phi_S, phi_I).
GaussianState squeezer_forward(const SqueezerParams& q);

// SVD of the L tensor reshaped over (pump k) x (signal, idler supermode
// pairs); pair index (u,u') flattened row-major as u*dim + u'.
struct PumpSvd {
  Mat x;    // nk_p x rank, left singular vectors
  RVec d;   // singular values, descending
  Mat q;    // (dim_s*dim_i supermode pairs) x rank, semi-unitary
};

// Contraction of Λ*(t) with the joint-SVD frames, reshaped to a matrix.
Mat build_l_matrix(const JointSvd& js, const CouplingSpec& cs, double t);
PumpSvd pump_svd(const Mat& l, int max_rank = -1);
// leading `rank` triplets by subspace iteration (for the streaming path)
PumpSvd pump_svd_leading(const Mat& l, int rank, double tol = 1e-12);

// One aligned decomposition sample: joint SVD plus the leading pump
// supermodes, with columns phase/ordering-matched to the previous sample.
struct AlignedFrame {
  double t = 0.0;
  Mat f_s, f_i, g_s, g_i;
  RVec r;
  Mat x_p;      // nk_p x L
  RVec d;       // L
  Mat q_cols;   // (pairs) x L, Q columns matching x_p
};

// Sequential gauge smoother.  Columns are greedily matched to the
// previous frame by overlap, then each degenerate r-cluster is rotated
// onto its predecessor (unitary Procrustes); all four joint factors and
// the pump factors are transformed consistently.
class PhaseAligner {
 public:
  explicit PhaseAligner(double degeneracy_tol = 1e-8) : tol_(degeneracy_tol) {}
  AlignedFrame align(double t, const JointSvd& js, const PumpSvd& ps, int pump_rank);
  // overlap quality of the last alignment (min matched |<prev|cur>|)
  double last_min_overlap() const { return last_min_overlap_; }
  int crossing_events() const { return crossings_; }

 private:
  double tol_;
  bool have_prev_ = false;
  Mat prev_f_s_, prev_x_;
  double last_min_overlap_ = 1.0;
  int crossings_ = 0;
};

// Deterministic phase convention: rotate each column of F (and the
// coupled factors) so its largest-magnitude entry is real positive.
void canonicalize_phases(JointSvd& js);

}  // namespace spdc
