#include "linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace numeraire::detail {

bool symmetric(const Matrix& m) {
    if (!m.square()) return false;
    double scale = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) scale = std::max(scale, std::abs(m(i, j)));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) return false;
    return true;
}

double min_eigenvalue(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace numeraire::detail
