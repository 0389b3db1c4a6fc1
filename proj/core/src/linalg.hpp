#pragma once

#include "numeraire/model.hpp"

namespace numeraire::detail {

/// |m_ij - m_ji| <= 1e-12 max|m| for all i, j.
bool symmetric(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& m);

}  // namespace numeraire::detail
