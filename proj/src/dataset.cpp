#include "hsiproj/dataset.hpp"

#include "hsiproj/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hsiproj {

void require_odd_window(int window) {
  if (window < 1 || window % 2 == 0)
    throw Error(ErrorCode::EvenWindow,
                "window must be a positive odd number, got " + std::to_string(window));
}

std::vector<Pixel> window_members(int rows, int cols, Pixel center, int window) {
  require_odd_window(window);
  if (center.row < 0 || center.row >= rows || center.col < 0 || center.col >= cols)
    throw Error(ErrorCode::OutOfBounds, "neighborhood center (" + std::to_string(center.row) +
                                            "," + std::to_string(center.col) +
                                            ") outside the image");
  const int half = window / 2;
  std::vector<Pixel> members{center};
  for (int r = center.row - half; r <= center.row + half; ++r) {
    if (r < 0 || r >= rows) continue;
    for (int c = center.col - half; c <= center.col + half; ++c) {
      if (c < 0 || c >= cols) continue;
      if (r == center.row && c == center.col) continue;
      members.push_back({r, c});
    }
  }
  return members;
}

NeighborhoodBlock extract_neighborhood(const HyperCube& cube, Pixel center, int window) {
  NeighborhoodBlock block;
  block.center = center;
  block.member_coords = window_members(cube.rows(), cube.cols(), center, window);
  block.spectra.resize(cube.bands(), static_cast<Eigen::Index>(block.member_coords.size()));
  for (std::size_t k = 0; k < block.member_coords.size(); ++k)
    block.spectra.col(static_cast<Eigen::Index>(k)) = cube.spectrum(block.member_coords[k]);
  return block;
}

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix(seed ^ mix(stream + kGolden))) {}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

TrainTestSplit split_train_test(const GroundTruth& gt, int n_train, int n_test,
                                std::uint64_t seed) {
  if (n_train < 0 || n_test < 0)
    throw Error(ErrorCode::BadSpec, "sample counts must be non-negative");
  const int classes = gt.num_classes();
  std::vector<std::vector<Pixel>> by_class(static_cast<std::size_t>(classes) + 1);
  for (int r = 0; r < gt.rows(); ++r)
    for (int c = 0; c < gt.cols(); ++c) {
      const int label = gt.at({r, c});
      if (label > 0) by_class[static_cast<std::size_t>(label)].push_back({r, c});
    }

  const auto need = static_cast<std::size_t>(n_train) + static_cast<std::size_t>(n_test);
  TrainTestSplit split;
  for (int k = 1; k <= classes; ++k) {
    auto& pool = by_class[static_cast<std::size_t>(k)];
    if (pool.size() < need)
      throw Error(ErrorCode::InsufficientSamples,
                  "class " + std::to_string(k) + " has " + std::to_string(pool.size()) +
                      " labeled pixels, need " + std::to_string(need));
    CounterRng rng(seed, static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < need; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    for (std::size_t i = 0; i < need; ++i) {
      const bool train = i < static_cast<std::size_t>(n_train);
      (train ? split.train : split.test).push_back(pool[i]);
      (train ? split.train_labels : split.test_labels).push_back(k);
    }
  }
  return split;
}

Matrix class_signatures(int bands, int classes) {
  Matrix sig(bands, classes);
  const double spacing = static_cast<double>(bands) / classes;
  const double width = spacing / 4.0;
  for (int k = 0; k < classes; ++k) {
    const double center = (k + 0.5) * spacing;
    for (int b = 0; b < bands; ++b) {
      const double t = (b + 0.5 - center) / width;
      sig(b, k) = std::exp(-0.5 * t * t);
    }
    sig.col(k).normalize();
  }
  return sig;
}

std::pair<HyperCube, GroundTruth> synth_scene(const SceneSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || spec.patch_size < 1)
    throw Error(ErrorCode::BadSpec, "scene dimensions and patch size must be positive");
  if (spec.classes < 2) throw Error(ErrorCode::BadSpec, "scene needs at least 2 classes");
  if (spec.bands < spec.classes) throw Error(ErrorCode::BadSpec, "scene needs bands >= classes");
  if (!(spec.noise_sd >= 0.0) || !(spec.amplitude_jitter >= 0.0) || spec.amplitude_jitter >= 1.0)
    throw Error(ErrorCode::BadSpec, "noise_sd must be >= 0 and amplitude_jitter in [0, 1)");

  const Matrix sig = class_signatures(spec.bands, spec.classes);
  const int patches_per_row = (spec.cols + spec.patch_size - 1) / spec.patch_size;

  HyperCube cube(spec.rows, spec.cols, spec.bands);
  std::vector<int> labels(static_cast<std::size_t>(spec.rows) * static_cast<std::size_t>(spec.cols));
  CounterRng amp_rng(spec.seed, 1);
  CounterRng noise_rng(spec.seed, 2);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      const int patch = (r / spec.patch_size) * patches_per_row + c / spec.patch_size;
      const int k = patch % spec.classes;
      labels[static_cast<std::size_t>(r) * static_cast<std::size_t>(spec.cols) +
             static_cast<std::size_t>(c)] = k + 1;
      const double amp = 1.0 + spec.amplitude_jitter * (2.0 * amp_rng.uniform() - 1.0);
      auto s = cube.spectrum({r, c});
      s = amp * sig.col(k);
      if (spec.noise_sd > 0.0)
        for (int b = 0; b < spec.bands; ++b) s[b] += spec.noise_sd * noise_rng.normal();
    }
  return {std::move(cube), GroundTruth(spec.rows, spec.cols, std::move(labels))};
}

}  // namespace hsiproj
