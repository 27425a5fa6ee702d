#include "hsiproj/affinity.hpp"
#include "hsiproj/error.hpp"
#include "hsiproj/eval.hpp"
#include "hsiproj/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace hsiproj;

namespace {

struct Options {
  std::string cube, gt, format = "csv_bands", out;
  std::string method = "slspp", classifier = "sbomp", sigma = "auto";
  int r = 0, window = 3, sparsity = 3, n_train = 10, n_test = 100, trials = 10, threads = 1;
  double ridge = linalg::kDefaultRidge;
  std::uint64_t seed = 0;
  bool normalize = false, raw_atoms = false, timing = false, labeled_only = false;
  // synth
  SceneSpec scene;
  // sweep
  std::vector<int> r_values, sparsity_values, window_values;
  std::vector<std::string> sigma_values;
  std::string table;
  // export-sphere
  std::vector<std::string> methods;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else io::write_text(path, text);
}

double parse_sigma(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::BadSpec, "sigma must be a number or 'auto', got '" + s + "'");
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveSigma, "sigma must be positive");
  return v;
}

PipelineSpec pipeline(const Options& o) {
  PipelineSpec p;
  p.method = parse_method(o.method);
  p.classifier = parse_classifier(o.classifier);
  p.r = o.r;
  if (o.sigma != "auto") p.sigma = parse_sigma(o.sigma);
  p.window = o.window;
  p.sparsity = o.sparsity;
  p.ridge = o.ridge;
  p.normalize = o.normalize;
  p.unit_atoms = !o.raw_atoms;
  return p;
}

ExperimentConfig experiment(const Options& o) {
  ExperimentConfig c;
  c.pipeline = pipeline(o);
  c.n_train = o.n_train;
  c.n_test = o.n_test;
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  return c;
}

struct Data {
  HyperCube cube;
  GroundTruth gt;
};

Data load(const Options& o) {
  if (o.cube.empty()) throw Error(ErrorCode::BadSpec, "--cube is required");
  if (o.gt.empty()) throw Error(ErrorCode::BadSpec, "--gt is required");
  std::vector<std::string> warnings;
  Data d{io::load_cube(o.cube, io::parse_cube_format(o.format), &warnings), io::load_ground_truth(o.gt)};
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (d.gt.rows() != d.cube.rows() || d.gt.cols() != d.cube.cols())
    throw Error(ErrorCode::DimensionMismatch, "ground truth shape differs from the cube");
  return d;
}

// Training pixels for fit/classify/export: the first split of the seed.
SampleSet training_set(const Data& d, const Options& o, const HyperCube& cube) {
  const TrainTestSplit split = split_train_test(d.gt, o.n_train, 0, trial_seed(o.seed, 0));
  return gather_samples(cube, split.train, &d.gt);
}

void run_synth(const Options& o) {
  if (o.out.empty()) throw Error(ErrorCode::BadSpec, "--out is required");
  const auto [cube, gt] = synth_scene(o.scene);
  io::write_cube(o.out, cube, io::parse_cube_format(o.format));
  if (!o.gt.empty()) io::write_ground_truth_csv(o.gt, gt);
}

void run_fit(const Options& o) {
  const Data d = load(o);
  const PipelineSpec spec = pipeline(o);
  const HyperCube cube = spec.normalize ? d.cube.normalized() : d.cube;
  const SampleSet train = training_set(d, o, cube);
  PipelineSpec fit_only = spec;
  fit_only.classifier = ClassifierKind::NNCosine;
  emit(o.out, serialize(build_model(cube, train, fit_only).projection));
}

void run_classify(const Options& o) {
  const Data d = load(o);
  const PipelineSpec spec = pipeline(o);
  const HyperCube cube = spec.normalize ? d.cube.normalized() : d.cube;
  const SampleSet train = training_set(d, o, cube);
  const PipelineModel model = build_model(cube, train, spec);
  std::vector<int> labels(static_cast<std::size_t>(cube.rows()) * static_cast<std::size_t>(cube.cols()), 0);
  for (int r = 0; r < cube.rows(); ++r)
    for (int c = 0; c < cube.cols(); ++c) {
      if (o.labeled_only && d.gt.at({r, c}) == 0) continue;
      labels[static_cast<std::size_t>(r * cube.cols() + c)] = predict(model, cube, {r, c}).label;
    }
  std::ostringstream text;
  for (int r = 0; r < cube.rows(); ++r) {
    for (int c = 0; c < cube.cols(); ++c)
      text << (c ? "," : "") << labels[static_cast<std::size_t>(r * cube.cols() + c)];
    text << '\n';
  }
  emit(o.out, text.str());
}

void run_eval(const Options& o) {
  const Data d = load(o);
  const AccuracyReport rep = run_experiment(d.cube, d.gt, experiment(o));
  emit(o.out, report_json(rep, o.timing));
  if (!o.table.empty()) emit(o.table, accuracy_table({rep}));
}

void run_sweep(const Options& o) {
  const Data d = load(o);
  SweepAxes axes;
  axes.r = o.r_values;
  axes.sparsity = o.sparsity_values;
  axes.window = o.window_values;
  for (const auto& s : o.sigma_values) axes.sigma.push_back(parse_sigma(s));
  const auto reports = sweep(d.cube, d.gt, experiment(o), axes);
  emit(o.out, sweep_csv(reports));
  if (!o.table.empty()) emit(o.table, reports_json(reports, o.timing));
}

void run_export_sphere(const Options& o) {
  const Data d = load(o);
  const PipelineSpec base = pipeline(o);
  const HyperCube cube = base.normalize ? d.cube.normalized() : d.cube;
  const SampleSet train = training_set(d, o, cube);
  std::vector<Projection> projections;
  for (const auto& m : o.methods.empty() ? std::vector<std::string>{o.method} : o.methods) {
    PipelineSpec spec = base;
    spec.method = parse_method(m);
    spec.classifier = ClassifierKind::NNCosine;
    projections.push_back(build_model(cube, train, spec).projection);
  }
  emit(o.out, sphere_csv(export_sphere_coords(train, projections)));
}

void print_error(std::string_view code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"]["code"] = std::string(code);
  j["error"]["message"] = message;
  std::cerr << j.dump() << '\n';
}

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--cube", o.cube, "Cube file (payload for ENVI)");
  cmd->add_option("--gt", o.gt, "Ground truth (CSV grid or ENVI raster)");
  cmd->add_option("--format", o.format, "envi_bsq | envi_bil | envi_bip | csv_bands")
      ->capture_default_str();
}

void add_pipeline_flags(CLI::App* cmd, Options& o, bool classifier) {
  cmd->add_option("--method", o.method, "lspp | slspp | ada | lada | lpp")->capture_default_str();
  if (classifier)
    cmd->add_option("--classifier", o.classifier, "sbomp | somp | nn-cos")->capture_default_str();
  cmd->add_option("--r", o.r, "Reduced dimension (0: c-1 for ada/lada)")->capture_default_str();
  cmd->add_option("--sigma", o.sigma, "Heat kernel sigma or 'auto'")->capture_default_str();
  cmd->add_option("--window", o.window, "Odd neighborhood width")->capture_default_str();
  if (classifier) {
    cmd->add_option("--sparsity", o.sparsity, "Blocks selected (K)")->capture_default_str();
    cmd->add_flag("--raw-atoms", o.raw_atoms, "Pursuit on unnormalized projected atoms");
  }
  cmd->add_option("--ridge", o.ridge, "Relative ridge on the constraint matrix")->capture_default_str();
  cmd->add_flag("--normalize", o.normalize, "Scale every spectrum to unit norm first");
  cmd->add_option("--n-train", o.n_train, "Training pixels per class")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_experiment_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--n-test", o.n_test, "Test pixels per class")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Random subsampling trials")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  cmd->add_flag("--timing", o.timing, "Include per-trial runtimes in JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angle-preserving projections and block sparse classification for hyperspectral cubes"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Write a synthetic patch scene");
  synth->add_option("--out", o.out, "Cube output path")->required();
  synth->add_option("--gt", o.gt, "Ground truth CSV output path");
  synth->add_option("--format", o.format, "Output format")->capture_default_str();
  synth->add_option("--rows", o.scene.rows)->capture_default_str();
  synth->add_option("--cols", o.scene.cols)->capture_default_str();
  synth->add_option("--bands", o.scene.bands)->capture_default_str();
  synth->add_option("--classes", o.scene.classes)->capture_default_str();
  synth->add_option("--noise-sd", o.scene.noise_sd)->capture_default_str();
  synth->add_option("--patch-size", o.scene.patch_size)->capture_default_str();
  synth->add_option("--jitter", o.scene.amplitude_jitter)->capture_default_str();
  synth->add_option("--seed", o.scene.seed)->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Fit a projection and write it as text");
  add_data_flags(fit, o);
  add_pipeline_flags(fit, o, false);
  fit->add_option("--out", o.out, "Projection file (default stdout)");

  auto* classify = app.add_subcommand("classify", "Label every pixel, write a CSV label map");
  add_data_flags(classify, o);
  add_pipeline_flags(classify, o, true);
  classify->add_flag("--labeled-only", o.labeled_only, "Skip pixels without ground truth");
  classify->add_option("--out", o.out, "Label map CSV (default stdout)");

  auto* eval = app.add_subcommand("eval", "Repeated random subsampling, JSON report");
  add_data_flags(eval, o);
  add_pipeline_flags(eval, o, true);
  add_experiment_flags(eval, o);
  eval->add_option("--out", o.out, "JSON report (default stdout)");
  eval->add_option("--table", o.table, "Also write an accuracy table here");

  auto* sw = app.add_subcommand("sweep", "Grid sweep with shared splits, CSV curve");
  add_data_flags(sw, o);
  add_pipeline_flags(sw, o, true);
  add_experiment_flags(sw, o);
  sw->add_option("--r-values", o.r_values)->delimiter(',');
  sw->add_option("--sigma-values", o.sigma_values)->delimiter(',');
  sw->add_option("--sparsity-values", o.sparsity_values)->delimiter(',');
  sw->add_option("--window-values", o.window_values)->delimiter(',');
  sw->add_option("--out", o.out, "CSV curve (default stdout)");
  sw->add_option("--json", o.table, "Also write the full reports as JSON");

  auto* sphere = app.add_subcommand("export-sphere", "Unit-sphere 3-D coordinates as CSV");
  add_data_flags(sphere, o);
  add_pipeline_flags(sphere, o, false);
  sphere->add_option("--methods", o.methods, "Several methods, comma separated")->delimiter(',');
  sphere->add_option("--out", o.out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("Usage", e.what());
    return 2;
  }

  try {
    if (*synth) run_synth(o);
    else if (*fit) run_fit(o);
    else if (*classify) run_classify(o);
    else if (*eval) run_eval(o);
    else if (*sw) run_sweep(o);
    else if (*sphere) run_export_sphere(o);
  } catch (const Error& e) {
    print_error(to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
  return 0;
}
