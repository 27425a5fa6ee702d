#pragma once

#include "hsiproj/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hsiproj {

/// Spectra in a square window around one pixel. The center is column 0, the
/// remaining in-bounds members follow in row-major order; windows are
/// truncated at image edges.
struct NeighborhoodBlock {
  Pixel center;
  Matrix spectra;
  std::vector<Pixel> member_coords;
};

/// Throws EvenWindow for even or non-positive windows.
void require_odd_window(int window);

/// In-bounds members of the window, center first.
std::vector<Pixel> window_members(int rows, int cols, Pixel center, int window);

NeighborhoodBlock extract_neighborhood(const HyperCube& cube, Pixel center, int window);

/// Counter-based generator: output i is splitmix64(key + (i + 1) * golden)
/// where key mixes the seed with a stream id. Identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal() noexcept;

  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct TrainTestSplit {
  std::vector<Pixel> train;
  std::vector<int> train_labels;
  std::vector<Pixel> test;
  std::vector<int> test_labels;
};

/// Per class (in class-id order): row-major list of labeled pixels, partial
/// Fisher-Yates shuffle with CounterRng(seed, class), first n_train go to
/// train, next n_test to test.
TrainTestSplit split_train_test(const GroundTruth& gt, int n_train, int n_test,
                                std::uint64_t seed);

struct SceneSpec {
  int rows = 24;
  int cols = 24;
  int bands = 20;
  int classes = 4;
  double noise_sd = 0.05;
  int patch_size = 6;
  std::uint64_t seed = 7;
  /// Per-pixel amplitude factor is 1 + U(-jitter, jitter).
  double amplitude_jitter = 0.2;
};

/// Class signature k (0-based): Gaussian bump over the band axis centered at
/// (k + 0.5) * bands / classes with width bands / (4 * classes), unit l2 norm.
Matrix class_signatures(int bands, int classes);

/// Patches of patch_size x patch_size pixels cycle through the classes in
/// row-major patch order: patch (pr, pc) holds class
/// 1 + (pr * patches_per_row + pc) mod classes.
std::pair<HyperCube, GroundTruth> synth_scene(const SceneSpec& spec);

}  // namespace hsiproj
