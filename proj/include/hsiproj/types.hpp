#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

namespace hsiproj {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Pixel {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Reflectance cube stored pixel-interleaved: the spectrum of pixel (r, c)
/// is the contiguous run of `bands` values starting at (r * cols + c) * bands.
class HyperCube {
 public:
  HyperCube() = default;
  HyperCube(int rows, int cols, int bands);
  HyperCube(int rows, int cols, int bands, std::vector<double> values);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int bands() const noexcept { return bands_; }

  bool contains(Pixel p) const noexcept {
    return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_;
  }

  double& at(int row, int col, int band) {
    return values_[offset(row, col) + static_cast<std::size_t>(band)];
  }
  double at(int row, int col, int band) const {
    return values_[offset(row, col) + static_cast<std::size_t>(band)];
  }

  Eigen::Map<const Vector> spectrum(Pixel p) const {
    return {values_.data() + offset(p.row, p.col), bands_};
  }
  Eigen::Map<Vector> spectrum(Pixel p) {
    return {values_.data() + offset(p.row, p.col), bands_};
  }

  const std::vector<double>& values() const noexcept { return values_; }

  /// Returns a copy with every spectrum scaled to unit l2 norm (zero spectra
  /// are left untouched).
  HyperCube normalized() const;

  friend bool operator==(const HyperCube&, const HyperCube&) = default;

 private:
  std::size_t offset(int row, int col) const noexcept {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(cols_) +
            static_cast<std::size_t>(col)) *
           static_cast<std::size_t>(bands_);
  }

  int rows_ = 0;
  int cols_ = 0;
  int bands_ = 0;
  std::vector<double> values_;
};

/// Per-pixel class ids, 0 = unlabeled, labeled classes are 1..c.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(int rows, int cols, std::vector<int> labels);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int at(Pixel p) const { return labels_[index(p)]; }
  int& at(Pixel p) { return labels_[index(p)]; }
  int num_classes() const noexcept { return num_classes_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  /// Recomputes the class count and checks that ids form 1..c.
  void validate();

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;

 private:
  std::size_t index(Pixel p) const noexcept {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(p.col);
  }

  int rows_ = 0;
  int cols_ = 0;
  int num_classes_ = 0;
  std::vector<int> labels_;
};

/// Spectra as columns (d x n) with optional labels and source coordinates.
struct SampleSet {
  Matrix features;
  std::vector<int> labels;
  std::vector<Pixel> coords;

  int dim() const noexcept { return static_cast<int>(features.rows()); }
  int size() const noexcept { return static_cast<int>(features.cols()); }
  bool labeled() const noexcept { return !labels.empty(); }

  /// Throws DimensionMismatch when labels/coords disagree with the column count.
  void check() const;
};

/// Gathers the spectra at `coords`, attaching the ground-truth labels when
/// `gt` is given.
SampleSet gather_samples(const HyperCube& cube, const std::vector<Pixel>& coords,
                         const GroundTruth* gt = nullptr);

}  // namespace hsiproj
