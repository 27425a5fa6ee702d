#include "hsiproj/types.hpp"

#include "hsiproj/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsiproj {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SingularB: return "SingularB";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::ReducedDimTooLarge: return "ReducedDimTooLarge";
    case ErrorCode::ReducedDimTooSmall: return "ReducedDimTooSmall";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidSparsity: return "InvalidSparsity";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::UnsupportedDataType: return "UnsupportedDataType";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

HyperCube::HyperCube(int rows, int cols, int bands)
    : HyperCube(rows, cols, bands,
                std::vector<double>(static_cast<std::size_t>(std::max(rows, 0)) *
                                    static_cast<std::size_t>(std::max(cols, 0)) *
                                    static_cast<std::size_t>(std::max(bands, 0))))
{}

HyperCube::HyperCube(int rows, int cols, int bands, std::vector<double> values)
    : rows_(rows), cols_(cols), bands_(bands), values_(std::move(values)) {
  if (rows < 1 || cols < 1 || bands < 1)
    throw Error(ErrorCode::BadSpec, "cube dimensions must be positive");
  const auto expected = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) *
                        static_cast<std::size_t>(bands);
  if (values_.size() != expected)
    throw Error(ErrorCode::SizeMismatch,
                "cube payload has " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(expected));
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::NonFinite, "cube contains NaN or Inf");
}

HyperCube HyperCube::normalized() const {
  HyperCube out = *this;
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) {
      auto s = out.spectrum({r, c});
      const double n = s.norm();
      if (n > 0.0) s /= n;
    }
  return out;
}

GroundTruth::GroundTruth(int rows, int cols, std::vector<int> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
  if (rows < 1 || cols < 1)
    throw Error(ErrorCode::BadSpec, "ground truth dimensions must be positive");
  if (labels_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw Error(ErrorCode::SizeMismatch, "ground truth label count does not match its shape");
  validate();
}

void GroundTruth::validate() {
  int max_id = 0;
  for (int v : labels_) {
    if (v < 0) throw Error(ErrorCode::BadSpec, "negative class id in ground truth");
    max_id = std::max(max_id, v);
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
  for (int v : labels_) seen[static_cast<std::size_t>(v)] = true;
  for (int k = 1; k <= max_id; ++k)
    if (!seen[static_cast<std::size_t>(k)])
      throw Error(ErrorCode::BadSpec,
                  "class ids are not contiguous: id " + std::to_string(k) + " is missing");
  num_classes_ = max_id;
}

void SampleSet::check() const {
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != features.cols())
    throw Error(ErrorCode::DimensionMismatch, "label count differs from sample count");
  if (!coords.empty() && static_cast<Eigen::Index>(coords.size()) != features.cols())
    throw Error(ErrorCode::DimensionMismatch, "coordinate count differs from sample count");
}

SampleSet gather_samples(const HyperCube& cube, const std::vector<Pixel>& coords,
                         const GroundTruth* gt) {
  SampleSet out;
  out.features.resize(cube.bands(), static_cast<Eigen::Index>(coords.size()));
  out.coords = coords;
  if (gt) out.labels.reserve(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!cube.contains(coords[i]))
      throw Error(ErrorCode::OutOfBounds, "sample coordinate outside the cube");
    out.features.col(static_cast<Eigen::Index>(i)) = cube.spectrum(coords[i]);
    if (gt) out.labels.push_back(gt->at(coords[i]));
  }
  return out;
}

}  // namespace hsiproj
