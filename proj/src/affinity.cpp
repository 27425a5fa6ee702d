#include "hsiproj/affinity.hpp"

#include "hsiproj/error.hpp"
#include "hsiproj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsiproj {

Matrix pairwise_sq_distances(const Matrix& x) {
  const auto n = x.cols();
  Matrix d = Matrix::Zero(n, n);
  // Direct differences rather than the Gram expansion, so coincident samples
  // get exactly zero distance.
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.col(i) - x.col(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

AffinityMatrix heat_kernel_affinity(const Matrix& x, double sigma,
                                    const AffinityOptions& options) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::NonPositiveSigma, "heat kernel sigma must be positive and finite");
  if (x.cols() < 1 || x.rows() < 1)
    throw Error(ErrorCode::TooFewSamples, "affinity needs at least one sample");
  linalg::require_finite(x, "samples");

  AffinityMatrix out;
  out.sigma = sigma;
  out.weights = (-pairwise_sq_distances(x).array() / sigma).exp().matrix();

  if (options.knn) {
    const int k = *options.knn;
    if (k < 1) throw Error(ErrorCode::BadSpec, "knn must be at least 1");
    const auto n = out.weights.rows();
    Matrix keep = Matrix::Zero(n, n);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});
      const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), idx.size());
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                        [&](Eigen::Index a, Eigen::Index b) {
                          const double wa = out.weights(i, a), wb = out.weights(i, b);
                          return wa > wb || (wa == wb && a < b);
                        });
      for (std::size_t t = 0; t < take; ++t) keep(i, idx[t]) = out.weights(i, idx[t]);
      keep(i, i) = 1.0;
    }
    out.weights = keep.cwiseMax(keep.transpose());
  }
  return out;
}

Vector degree_diagonal(const AffinityMatrix& w) { return w.weights.rowwise().sum(); }

Matrix graph_laplacian(const AffinityMatrix& w) {
  Matrix lap = -w.weights;
  lap.diagonal() += degree_diagonal(w);
  return lap;
}

double median_heuristic_sigma(const Matrix& x) {
  if (x.cols() < 2) throw Error(ErrorCode::TooFewSamples, "median heuristic needs >= 2 samples");
  linalg::require_finite(x, "samples");
  const auto n = x.cols();
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (x.col(i) - x.col(j)).squaredNorm();
      if (v > 0.0) d2.push_back(v);
    }
  if (d2.empty()) return 1.0;
  const std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
  const double upper = d2[mid];
  if (d2.size() % 2 == 1) return upper;
  const double lower = *std::max_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace hsiproj
