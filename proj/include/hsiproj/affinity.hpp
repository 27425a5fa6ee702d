#pragma once

#include "hsiproj/types.hpp"

#include <optional>

namespace hsiproj {

/// Heat-kernel weights W_ij = exp(-||x_i - x_j||^2 / sigma).
struct AffinityMatrix {
  Matrix weights;
  double sigma = 1.0;
};

struct AffinityOptions {
  /// Keep only the k largest weights per row, then symmetrize by max.
  /// Off by default: every training pair contributes.
  std::optional<int> knn;
};

/// Columns of `x` are samples.
AffinityMatrix heat_kernel_affinity(const Matrix& x, double sigma,
                                    const AffinityOptions& options = {});

/// Row sums of the affinity matrix.
Vector degree_diagonal(const AffinityMatrix& w);

/// L = D - W.
Matrix graph_laplacian(const AffinityMatrix& w);

/// Median of the non-zero pairwise squared distances (mean of the two middle
/// values for an even count); 1 when every pair coincides.
double median_heuristic_sigma(const Matrix& x);

/// Squared Euclidean distances between all column pairs.
Matrix pairwise_sq_distances(const Matrix& x);

}  // namespace hsiproj
