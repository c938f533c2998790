#pragma once

#include "spdc/decomp.hpp"
#include "spdc/measure.hpp"

namespace spdc {

// Actual-channel Bogoliubov pair of the inverse Gaussian unitary, built
// from a lossless reference run.  Block layout: signal then idler.
struct StretchUnitary {
  Mat vbar, wbar;  // (nk_s + nk_i) square
  int nk_s = 0, nk_i = 0;
  double constraint_residual() const;
};

StretchUnitary stretch_from_lossless(const GaussianState& lossless, int nk_s, int nk_i);

// Rectangular actual-channel restrictions of the lossy V and W matrices
// (actual rows, all columns).
struct ActualBlocks {
  Mat v_ac, w_ac;  // (nk_s + nk_i) x (2nk_s + 2nk_i)
};
ActualBlocks actual_channel_blocks(const GaussianState& lossy, int nk_s, int nk_i);

// Map whose rows give C = beta^T (Vbar^dag V_ac - Wbar^T W_ac^*) G over
// the stacked supermode index (signal supermodes then idler supermodes).
Mat stretch_cmap(const StretchUnitary& su, const ActualBlocks& ab, const JointSvd& js);
Mat stretch_dmap(const StretchUnitary& su, const ActualBlocks& ab, const JointSvd& js);

struct StretchCoefficients {
  Vec c, d;   // stacked supermode coefficients
  Vec beta;   // actual-channel LO shape
  double c_target_residual = 0.0;  // |C - target|_inf
  double d_max = 0.0;              // |D|_inf
};

// beta^T = target^T * pinv(cmap)
Vec optimal_stretch_lo(const Mat& cmap, const Vec& target);

StretchCoefficients stretch_coefficients(const StretchUnitary& su, const GaussianState& lossy,
                                         const JointSvd& js, const Vec& beta,
                                         const Vec& target);

// Wigner function of the stretched full ket: retained supermodes S1/I1
// evaluated on the residual ket, all other supermodes through the
// closed-form Gaussian factor.
WignerGrid stretched_wigner(const FockKet& ket, const StretchCoefficients& sc,
                            const GridSpec& spec);

// hybrid (S1+I1)/sqrt(2) target over the stacked supermode index
Vec stretch_target_hybrid(int dim_s, int dim_i);
Vec stretch_target_first(int dim_s, int dim_i);

}  // namespace spdc
