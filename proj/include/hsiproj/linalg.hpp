#pragma once

#include "hsiproj/types.hpp"

namespace hsiproj::linalg {

/// Eigenvalues in descending order with matching eigenvector columns.
/// Each eigenvector's largest-magnitude entry is positive (first such entry
/// on ties) and equal eigenvalues keep the solver's original index order.
struct EigenSystem {
  Vector values;
  Matrix vectors;

  int size() const noexcept { return static_cast<int>(values.size()); }
};

inline constexpr double kDefaultRidge = 1e-6;

/// Symmetric eigendecomposition of (A + A^t) / 2.
EigenSystem sym_eig_desc(const Matrix& a);

/// Solves A v = lambda B' v with B' = B + ridge * (trace(B) / dim) * I.
/// Eigenvectors are B'-orthonormal. When trace(B) is zero the ridge is taken
/// relative to 1.
EigenSystem gen_eig_desc(const Matrix& a, const Matrix& b, double ridge = kDefaultRidge);

/// The regularized operand gen_eig_desc actually factors.
Matrix regularize(const Matrix& b, double ridge);

/// argmin_C ||B - A C||_F via column-pivoted QR. Throws RankDeficient when A
/// does not have full column rank.
Matrix least_squares(const Matrix& a, const Matrix& b);

/// Minimum-norm solution of the same problem; accepts rank-deficient A.
Matrix least_squares_min_norm(const Matrix& a, const Matrix& b);

/// Throws NonFinite if any entry is NaN/Inf.
void require_finite(const Matrix& m, const char* what);

}  // namespace hsiproj::linalg
