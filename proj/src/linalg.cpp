#include "peerimex/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace peerimex {

bool is_strictly_lower(const Matrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i; j < a.cols(); ++j)
            if (a(i, j) != 0.0) return false;
    return true;
}

bool is_lower(const Matrix& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != 0.0) return false;
    return true;
}

Vector pow_elementwise(const Vector& c, int j) {
    Vector out(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) out(i) = j == 0 ? 1.0 : std::pow(c(i), j);
    return out;
}

std::vector<Complex> eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a, false);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const ComplexMatrix& a) {
    if (a.rows() == 1) return std::abs(a(0, 0));
    if (a.rows() == 2) {
        // Closed form keeps the two-stage sweeps cheap.
        const Complex tr = a(0, 0) + a(1, 1);
        const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const Complex disc = std::sqrt(tr * tr - 4.0 * det);
        return std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
    }
    double r = 0.0;
    for (const Complex& z : eigenvalues(a)) r = std::max(r, std::abs(z));
    return r;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = n == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
    Matrix a(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) a(i, j) = rows[static_cast<std::size_t>(i)].at(static_cast<std::size_t>(j));
    return a;
}

std::vector<std::vector<double>> to_rows(const Matrix& a) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        auto& row = rows[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(a.cols()));
        for (Eigen::Index j = 0; j < a.cols(); ++j) row[static_cast<std::size_t>(j)] = a(i, j);
    }
    return rows;
}

}  // namespace peerimex
