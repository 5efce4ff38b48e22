#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace peerimex {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

[[nodiscard]] inline double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

[[nodiscard]] inline double max_abs(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// True if every entry on or above the diagonal is exactly zero.
[[nodiscard]] bool is_strictly_lower(const Matrix& a);
/// True if every entry above the diagonal is exactly zero.
[[nodiscard]] bool is_lower(const Matrix& a);

/// Element-wise power c^j with the convention c^0 = e.
[[nodiscard]] Vector pow_elementwise(const Vector& c, int j);

/// All eigenvalues of a small dense real matrix.
[[nodiscard]] std::vector<Complex> eigenvalues(const Matrix& a);
/// All eigenvalues of a small dense complex matrix.
[[nodiscard]] std::vector<Complex> eigenvalues(const ComplexMatrix& a);
[[nodiscard]] double spectral_radius(const ComplexMatrix& a);

[[nodiscard]] Matrix from_rows(const std::vector<std::vector<double>>& rows);
[[nodiscard]] std::vector<std::vector<double>> to_rows(const Matrix& a);

}  // namespace peerimex
