// types.hpp — shared scalar/matrix aliases and small numeric helpers

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>

namespace cavcnot {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Largest |eigenvalue| of a Hermitian matrix (spectral norm).
inline double spectral_norm_hermitian(const Matrix& h) {
    if (h.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

inline bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

}  // namespace cavcnot
