#include "hsiproj/linalg.hpp"

#include "hsiproj/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <numeric>
#include <string>

namespace hsiproj::linalg {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::NotSquare, std::string(what) + " must be a non-empty square matrix");
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v[best] < 0.0) v = -v;
}

// Eigen returns ascending eigenvalues; reorder descending, stable on ties.
EigenSystem sorted_desc(const Vector& values, const Matrix& vectors) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });
  EigenSystem out;
  out.values.resize(values.size());
  out.vectors.resize(vectors.rows(), vectors.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(k);
    out.values[j] = values[order[k]];
    out.vectors.col(j) = vectors.col(order[k]);
    fix_sign(out.vectors.col(j));
  }
  return out;
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
}

EigenSystem sym_eig_desc(const Matrix& a) {
  require_square(a, "A");
  require_finite(a, "A");
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonFinite, "symmetric eigensolver did not converge");
  return sorted_desc(solver.eigenvalues(), solver.eigenvectors());
}

Matrix regularize(const Matrix& b, double ridge) {
  const auto n = b.rows();
  double scale = b.trace() / static_cast<double>(n);
  if (!(scale > 0.0)) scale = 1.0;
  Matrix out = 0.5 * (b + b.transpose());
  out.diagonal().array() += ridge * scale;
  return out;
}

EigenSystem gen_eig_desc(const Matrix& a, const Matrix& b, double ridge) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "A and B must have the same shape");
  require_finite(a, "A");
  require_finite(b, "B");
  if (ridge < 0.0) throw Error(ErrorCode::SingularB, "ridge must be non-negative");

  const Matrix breg = regularize(b, ridge);
  Eigen::LLT<Matrix> llt(breg);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularB, "regularized B is not positive definite");
  const Matrix& l = llt.matrixLLT();
  const double dmax = l.diagonal().maxCoeff();
  const double dmin = l.diagonal().minCoeff();
  if (!(dmin > 0.0) || dmin < 1e-13 * dmax)
    throw Error(ErrorCode::SingularB, "regularized B is numerically singular");

  // C = L^-1 A L^-t, then v = L^-t y.
  const Matrix sym = 0.5 * (a + a.transpose());
  Matrix c = llt.matrixL().solve(sym);
  c = llt.matrixL().solve(c.transpose()).eval();
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NonFinite, "generalized eigensolver did not converge");
  const Matrix v = llt.matrixU().solve(solver.eigenvectors());
  return sorted_desc(solver.eigenvalues(), v);
}

Matrix least_squares(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "least_squares: row counts differ");
  require_finite(a, "A");
  require_finite(b, "B");
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < a.cols())
    throw Error(ErrorCode::RankDeficient,
                "least_squares: design has rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(a.cols()) + " columns");
  return qr.solve(b);
}

Matrix least_squares_min_norm(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "least_squares: row counts differ");
  require_finite(a, "A");
  require_finite(b, "B");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(b);
}

}  // namespace hsiproj::linalg
