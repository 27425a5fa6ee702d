#pragma once

#include "hsiproj/linalg.hpp"
#include "hsiproj/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hsiproj {

enum class Method { LSPP, SLSPP, ADA, LADA, LPP };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct FitParams {
  double sigma = 0.0;  // 0 when the method has no heat kernel
  int window = 0;      // SLSPP only
  double ridge = 0.0;
};

/// A learned d x r linear map. Columns are ordered best-first and
/// `eigenvalues` is descending. Methods that take the bottom of a pencil
/// (LPP, LADA) store the negated generalized eigenvalue so the same ordering
/// holds.
struct Projection {
  Matrix matrix;
  Vector eigenvalues;
  Method method = Method::LSPP;
  FitParams params;

  int input_dim() const noexcept { return static_cast<int>(matrix.rows()); }
  int output_dim() const noexcept { return static_cast<int>(matrix.cols()); }
};

struct ScatterMatrices {
  Matrix within;
  Matrix between;
};

struct ClassStats {
  std::vector<int> classes;  // sorted distinct labels
  Matrix class_means;        // d x c, column l is the mean of classes[l]
  Vector global_mean;
  std::vector<int> class_counts;
};

ClassStats class_stats(const SampleSet& x);

/// Angular within/between outer-product matrices, not symmetrized:
/// within = sum_l sum_{i in l} mu_l x_i^t, between = sum_l n_l mu mu_l^t.
ScatterMatrices ada_scatter(const SampleSet& x);

/// Entry (i, j) of the local within-class weight matrix: A_ij / n_l for a
/// same-class pair, 0 otherwise.
double lada_within_weight(bool same_class, double a_ij, int n_class, int n_total);
/// Local between-class weight: A_ij (1/n - 1/n_l) for a same-class pair, 1/n otherwise.
double lada_between_weight(bool same_class, double a_ij, int n_class, int n_total);

/// sum_ij W_ij x_i x_j^t for the heat-kernel weighted LADA matrices.
ScatterMatrices lada_scatter(const SampleSet& x, double sigma);

/// Maximizes tr(P^t X W X^t P) subject to P^t X D X^t P = I.
Projection fit_lspp(const SampleSet& x, double sigma, int r, double ridge = linalg::kDefaultRidge);

/// Locality preserving projection with Euclidean heat-kernel graph: minimizes
/// tr(P^t X L X^t P), L = D - W, subject to P^t X D X^t P = I.
Projection fit_lpp(const SampleSet& x, double sigma, int r, double ridge = linalg::kDefaultRidge);

/// M = sum_i sum_{k in window(i)} W_ik z_k x_i^t over the given centers,
/// windows truncated at the image edge and including the center itself.
Matrix slspp_matrix(const HyperCube& cube, const std::vector<Pixel>& centers, int window,
                    double sigma);

/// Top-r eigenvectors of (M + M^t) / 2; columns orthonormal.
Projection fit_slspp(const HyperCube& cube, const std::vector<Pixel>& centers, int window,
                     double sigma, int r);

/// Angular discriminant analysis: minimizes the between/within trace ratio.
/// The between matrix has rank one, so the pencil is taken the other way up:
/// top-r of (within, between + ridge).
Projection fit_ada(const SampleSet& x, int r, double ridge = linalg::kDefaultRidge);

/// Local angular discriminant analysis with heat-kernel weights: bottom-r of
/// (between, within + ridge). The local between matrix is indefinite.
Projection fit_lada(const SampleSet& x, double sigma, int r, double ridge = linalg::kDefaultRidge);

/// Default reduced dimension for the supervised methods: min(d, c - 1).
int default_supervised_dim(const SampleSet& x);

/// P^t x for every sample; labels and coordinates are carried through.
SampleSet project(const Projection& p, const SampleSet& x);
Matrix project(const Projection& p, const Matrix& x);

/// Text form: header `method d r sigma window ridge`, then d rows of r
/// numbers, then one row of r eigenvalues. Numbers use 17 significant digits.
std::string serialize(const Projection& p);
Projection deserialize(const std::string& text);

}  // namespace hsiproj
