#pragma once

#include "hsiproj/classifiers.hpp"
#include "hsiproj/dataset.hpp"
#include "hsiproj/projections.hpp"
#include "hsiproj/sparse_recovery.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hsiproj {

/// One projection + classifier combination and all of its parameters.
struct PipelineSpec {
  Method method = Method::SLSPP;
  ClassifierKind classifier = ClassifierKind::SBOMP;
  int r = 0;                    // 0: min(d, c - 1) for ADA/LADA, required otherwise
  std::optional<double> sigma;  // unset: median heuristic on the training spectra
  int window = 3;               // SLSPP neighborhoods and pursuit blocks
  int sparsity = 3;             // K for the pursuit classifiers
  double ridge = linalg::kDefaultRidge;
  bool normalize = false;       // l2-normalize every spectrum first
  bool unit_atoms = true;       // pursuit: unit-norm projected atoms and test columns
};

std::string describe(const PipelineSpec& p);

struct ExperimentConfig {
  PipelineSpec pipeline;
  int n_train = 10;
  int n_test = 100;
  int trials = 10;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

/// A fitted pipeline ready to label pixels of the cube it was trained on.
struct PipelineModel {
  PipelineSpec spec;
  double sigma = 0.0;
  Projection projection;
  BlockDictionary dictionary;  // pursuit classifiers
  SampleSet projected_train;   // nearest neighbor
};

/// Fits the projection on the training pixels (SLSPP also reads their
/// neighborhoods) and builds the classifier's training structure. The cube
/// should already be normalized when spec.normalize is set.
PipelineModel build_model(const HyperCube& cube, const SampleSet& train, const PipelineSpec& spec);

/// Labels the pixel at `p`; the pursuit classifiers use its projected
/// neighborhood, nearest neighbor only its own spectrum.
Prediction predict(const PipelineModel& model, const HyperCube& cube, Pixel p);

/// Deterministic split seed for trial `t` of an experiment seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

struct TrialResult {
  std::uint64_t split_seed = 0;
  double sigma = 0.0;
  /// confusion[true - 1][predicted - 1]
  std::vector<std::vector<int>> confusion;
  double accuracy = 0.0;  // correct / total, in [0, 1]
  double seconds = 0.0;
};

struct AccuracyReport {
  ExperimentConfig config;
  int num_classes = 0;
  std::vector<TrialResult> trials;
  std::vector<double> class_accuracy;  // mean over trials, in [0, 1]
  double overall_accuracy = 0.0;       // mean over trials of correct / total
};

/// Passed to a classifier hook: everything known in one trial.
struct TrialContext {
  const HyperCube& cube;
  const TrainTestSplit& split;
  const PipelineModel& model;
};

/// Replaces the configured classifier; returns the label for test pixel `i`.
using ClassifierHook = std::function<int(const TrialContext&, std::size_t i)>;

/// Repeated random subsampling: each trial draws a fresh split, fits on the
/// training pixels only and classifies every test pixel.
AccuracyReport run_experiment(const HyperCube& cube, const GroundTruth& gt,
                              const ExperimentConfig& config, const ClassifierHook& hook = {});

/// Recomputes class and overall accuracies from the stored confusion matrices.
void summarize(AccuracyReport& report);

/// Empty axes keep the value from the base configuration.
struct SweepAxes {
  std::vector<int> r;
  std::vector<double> sigma;
  std::vector<int> sparsity;
  std::vector<int> window;
};

/// One report per point of the Cartesian product (r outermost, window
/// innermost). Every point reuses the same per-trial splits.
std::vector<AccuracyReport> sweep(const HyperCube& cube, const GroundTruth& gt,
                                  const ExperimentConfig& base, const SweepAxes& axes);

struct SphereRow {
  std::string source;  // "original" or the projection's method name
  int sample = 0;
  int label = 0;
  double u1 = 0.0, u2 = 0.0, u3 = 0.0;
};

/// Unit-norm 3-D coordinates: the first three features of the original
/// samples, then the first three projected components for each projection.
std::vector<SphereRow> export_sphere_coords(const SampleSet& train,
                                            const std::vector<Projection>& projections);

// Report formatting.
std::string report_json(const AccuracyReport& report, bool include_timing = false);
std::string reports_json(const std::vector<AccuracyReport>& reports, bool include_timing = false);
/// Class rows by pipeline columns in percent, with an "Overall Accuracy" row.
std::string accuracy_table(const std::vector<AccuracyReport>& reports,
                           const std::vector<std::string>& class_names = {});
/// One line per report: r,sigma,sparsity,window,overall_accuracy_percent.
std::string sweep_csv(const std::vector<AccuracyReport>& reports);
std::string sphere_csv(const std::vector<SphereRow>& rows);

}  // namespace hsiproj
