#pragma once

#include <complex>
#include <Eigen/Dense>

namespace spdc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

// Physical constants (CODATA 2018).
namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double c0 = 2.99792458e8;        // m/s
inline constexpr double eps0 = 8.8541878128e-12;  // F/m
}  // namespace constants

}  // namespace spdc
