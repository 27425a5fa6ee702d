#include "hsiproj/eval.hpp"

#include "hsiproj/affinity.hpp"
#include "hsiproj/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

namespace hsiproj {

namespace {

Matrix unit_columns(Matrix m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double n = m.col(j).norm();
    if (n > 0.0) m.col(j) /= n;
  }
  return m;
}

}  // namespace

std::string describe(const PipelineSpec& p) {
  std::string name(to_string(p.method));
  for (auto& ch : name) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  switch (p.classifier) {
    case ClassifierKind::SBOMP: return name + "--SBOMP-C";
    case ClassifierKind::SOMP: return name + "--SOMP-C";
    case ClassifierKind::NNCosine: return name + "--NN";
  }
  return name;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(ErrorCode::BadSpec, "trials must be >= 1");
  if (n_train < 1 || n_test < 1) throw Error(ErrorCode::BadSpec, "n_train and n_test must be >= 1");
  if (threads < 1) throw Error(ErrorCode::BadSpec, "threads must be >= 1");
  require_odd_window(pipeline.window);
  if (pipeline.sparsity < 1) throw Error(ErrorCode::InvalidSparsity, "sparsity must be >= 1");
  if (pipeline.sigma && !(*pipeline.sigma > 0.0))
    throw Error(ErrorCode::NonPositiveSigma, "sigma must be positive");
  if (pipeline.ridge < 0.0) throw Error(ErrorCode::BadSpec, "ridge must be non-negative");
  if (pipeline.r < 0) throw Error(ErrorCode::ReducedDimTooSmall, "r must be >= 1");
}

PipelineModel build_model(const HyperCube& cube, const SampleSet& train, const PipelineSpec& spec) {
  train.check();
  PipelineModel model;
  model.spec = spec;
  model.sigma = spec.sigma ? *spec.sigma : median_heuristic_sigma(train.features);

  const bool supervised = spec.method == Method::ADA || spec.method == Method::LADA;
  int r = spec.r;
  if (r == 0) {
    if (!supervised)
      throw Error(ErrorCode::ReducedDimTooSmall,
                  "r must be given for " + std::string(to_string(spec.method)));
    r = default_supervised_dim(train);
  }

  switch (spec.method) {
    case Method::LSPP: model.projection = fit_lspp(train, model.sigma, r, spec.ridge); break;
    case Method::LPP: model.projection = fit_lpp(train, model.sigma, r, spec.ridge); break;
    case Method::ADA: model.projection = fit_ada(train, r, spec.ridge); break;
    case Method::LADA: model.projection = fit_lada(train, model.sigma, r, spec.ridge); break;
    case Method::SLSPP:
      if (train.coords.empty())
        throw Error(ErrorCode::BadSpec, "SLSPP needs the training pixel coordinates");
      model.projection = fit_slspp(cube, train.coords, spec.window, model.sigma, r);
      break;
  }
  if (spec.method != Method::ADA) model.projection.params.sigma = model.sigma;

  switch (spec.classifier) {
    case ClassifierKind::NNCosine:
      model.projected_train = project(model.projection, train);
      break;
    case ClassifierKind::SOMP:
      if (!train.labeled()) throw Error(ErrorCode::SingleClass, "classifier needs training labels");
      for (int i = 0; i < train.size(); ++i) {
        Matrix atom = project(model.projection, Matrix(train.features.col(i)));
        model.dictionary.blocks.push_back(spec.unit_atoms ? unit_columns(std::move(atom)) : atom);
        model.dictionary.class_of_block.push_back(train.labels[static_cast<std::size_t>(i)]);
      }
      break;
    case ClassifierKind::SBOMP:
      if (!train.labeled()) throw Error(ErrorCode::SingleClass, "classifier needs training labels");
      if (train.coords.empty())
        throw Error(ErrorCode::BadSpec, "SBOMP needs the training pixel coordinates");
      for (int i = 0; i < train.size(); ++i) {
        const auto block =
            extract_neighborhood(cube, train.coords[static_cast<std::size_t>(i)], spec.window);
        Matrix atoms = project(model.projection, block.spectra);
        model.dictionary.blocks.push_back(spec.unit_atoms ? unit_columns(std::move(atoms)) : atoms);
        model.dictionary.class_of_block.push_back(train.labels[static_cast<std::size_t>(i)]);
      }
      break;
  }
  return model;
}

Prediction predict(const PipelineModel& model, const HyperCube& cube, Pixel p) {
  if (model.spec.classifier == ClassifierKind::NNCosine) {
    if (!cube.contains(p)) throw Error(ErrorCode::OutOfBounds, "pixel outside the cube");
    const Vector x = model.projection.matrix.transpose() * cube.spectrum(p);
    return nn_cosine_classify(model.projected_train, x);
  }
  const auto block = extract_neighborhood(cube, p, model.spec.window);
  Matrix s = project(model.projection, block.spectra);
  if (model.spec.unit_atoms) s = unit_columns(std::move(s));
  const int k = std::min(model.spec.sparsity, model.dictionary.size());
  if (model.spec.classifier == ClassifierKind::SOMP)
    return somp_classify(model.dictionary, s, k);
  return sbomp_classify(model.dictionary, s, k);
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return CounterRng(seed, 0x7472ULL + static_cast<std::uint64_t>(trial)).next();
}

namespace {

TrialResult run_trial(const HyperCube& cube, const GroundTruth& gt, const ExperimentConfig& config,
                      int t, const ClassifierHook& hook) {
  const auto start = std::chrono::steady_clock::now();
  TrialResult result;
  result.split_seed = trial_seed(config.seed, t);
  const TrainTestSplit split = split_train_test(gt, config.n_train, config.n_test, result.split_seed);
  SampleSet train = gather_samples(cube, split.train, &gt);
  const PipelineModel model = build_model(cube, train, config.pipeline);
  result.sigma = model.sigma;

  const int c = gt.num_classes();
  result.confusion.assign(static_cast<std::size_t>(c), std::vector<int>(static_cast<std::size_t>(c), 0));
  const TrialContext ctx{cube, split, model};
  int correct = 0;
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const int truth = split.test_labels[i];
    const int label = hook ? hook(ctx, i) : predict(model, cube, split.test[i]).label;
    if (label < 1 || label > c)
      throw Error(ErrorCode::BadSpec, "classifier returned unknown class " + std::to_string(label));
    ++result.confusion[static_cast<std::size_t>(truth - 1)][static_cast<std::size_t>(label - 1)];
    if (label == truth) ++correct;
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(split.test.size());
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

void summarize(AccuracyReport& report) {
  const int c = report.num_classes;
  report.class_accuracy.assign(static_cast<std::size_t>(c), 0.0);
  report.overall_accuracy = 0.0;
  for (const TrialResult& t : report.trials) {
    long correct = 0, total = 0;
    for (int k = 0; k < c; ++k) {
      const auto& row = t.confusion[static_cast<std::size_t>(k)];
      long row_total = 0;
      for (int v : row) row_total += v;
      const int hit = row[static_cast<std::size_t>(k)];
      correct += hit;
      total += row_total;
      if (row_total > 0)
        report.class_accuracy[static_cast<std::size_t>(k)] +=
            static_cast<double>(hit) / static_cast<double>(row_total);
    }
    report.overall_accuracy += total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  }
  const double n = static_cast<double>(report.trials.size());
  if (n > 0) {
    for (double& a : report.class_accuracy) a /= n;
    report.overall_accuracy /= n;
  }
}

AccuracyReport run_experiment(const HyperCube& cube_in, const GroundTruth& gt,
                              const ExperimentConfig& config, const ClassifierHook& hook) {
  config.validate();
  if (gt.rows() != cube_in.rows() || gt.cols() != cube_in.cols())
    throw Error(ErrorCode::DimensionMismatch, "ground truth shape differs from the cube");
  if (gt.num_classes() < 1) throw Error(ErrorCode::InsufficientSamples, "ground truth has no labels");
  const HyperCube normalized = config.pipeline.normalize ? cube_in.normalized() : HyperCube{};
  const HyperCube& cube = config.pipeline.normalize ? normalized : cube_in;

  AccuracyReport report;
  report.config = config;
  report.num_classes = gt.num_classes();
  report.trials.resize(static_cast<std::size_t>(config.trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.trials));

  auto work = [&](int first, int stride) {
    for (int t = first; t < config.trials; t += stride) {
      try {
        report.trials[static_cast<std::size_t>(t)] = run_trial(cube, gt, config, t, hook);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  const int threads = std::min(config.threads, config.trials);
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }

  for (int t = 0; t < config.trials; ++t) {
    if (!errors[static_cast<std::size_t>(t)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(t)]);
    } catch (const Error& e) {
      throw Error(e.code(), "trial " + std::to_string(t) + " (" + describe(config.pipeline) +
                                "): " + e.what());
    }
  }
  summarize(report);
  return report;
}

std::vector<AccuracyReport> sweep(const HyperCube& cube, const GroundTruth& gt,
                                  const ExperimentConfig& base, const SweepAxes& axes) {
  const std::vector<int> rs = axes.r.empty() ? std::vector<int>{base.pipeline.r} : axes.r;
  std::vector<std::optional<double>> sigmas;
  if (axes.sigma.empty()) sigmas.push_back(base.pipeline.sigma);
  for (double s : axes.sigma) sigmas.emplace_back(s);
  const std::vector<int> ks =
      axes.sparsity.empty() ? std::vector<int>{base.pipeline.sparsity} : axes.sparsity;
  const std::vector<int> ws = axes.window.empty() ? std::vector<int>{base.pipeline.window} : axes.window;

  std::vector<AccuracyReport> out;
  for (int r : rs)
    for (const auto& sigma : sigmas)
      for (int k : ks)
        for (int w : ws) {
          ExperimentConfig cfg = base;
          cfg.pipeline.r = r;
          cfg.pipeline.sigma = sigma;
          cfg.pipeline.sparsity = k;
          cfg.pipeline.window = w;
          out.push_back(run_experiment(cube, gt, cfg));
        }
  return out;
}

std::vector<SphereRow> export_sphere_coords(const SampleSet& train,
                                            const std::vector<Projection>& projections) {
  train.check();
  if (train.dim() < 3)
    throw Error(ErrorCode::ReducedDimTooSmall, "original samples need at least 3 features");
  for (const Projection& p : projections)
    if (p.output_dim() < 3)
      throw Error(ErrorCode::ReducedDimTooSmall,
                  std::string(to_string(p.method)) + " projection has fewer than 3 components");

  std::vector<SphereRow> rows;
  auto emit = [&](const std::string& source, const Matrix& coords) {
    for (int i = 0; i < train.size(); ++i) {
      Eigen::Vector3d u = coords.col(i).head<3>();
      const double n = u.norm();
      if (!(n > 0.0))
        throw Error(ErrorCode::ZeroVector, source + ": sample " + std::to_string(i) +
                                               " has zero leading components");
      u /= n;
      rows.push_back({source, i, train.labeled() ? train.labels[static_cast<std::size_t>(i)] : 0,
                      u[0], u[1], u[2]});
    }
  };
  emit("original", train.features);
  for (const Projection& p : projections) emit(std::string(to_string(p.method)), project(p, train.features));
  return rows;
}

}  // namespace hsiproj
