// Acceptance runner: one PASS/FAIL/SKIP line per criterion, nonzero exit on
// any failure. Optional real-data run:
//   acceptance --pavia-cube PATH --pavia-gt PATH [--pavia-format envi_bsq]

#include "hsiproj/affinity.hpp"
#include "hsiproj/error.hpp"
#include "hsiproj/eval.hpp"
#include "hsiproj/io.hpp"
#include "hsiproj/linalg.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace hsiproj;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum { Pass, Fail, Skip } status = Pass;
  std::string detail;
};

int failures = 0;

void run(const std::string& id, const std::string& name, double limit_s,
         const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {Outcome::Fail, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.status == Outcome::Pass && limit_s > 0 && secs > limit_s) {
    out.status = Outcome::Fail;
    out.detail += "; over time limit";
  }
  const char* tag = out.status == Outcome::Pass ? "PASS" : out.status == Outcome::Fail ? "FAIL" : "SKIP";
  if (out.status == Outcome::Fail) ++failures;
  char timing[64];
  if (limit_s > 0) std::snprintf(timing, sizeof timing, " [%.2f s, limit %.0f s]", secs, limit_s);
  else std::snprintf(timing, sizeof timing, " [%.2f s]", secs);
  std::cout << tag << "  " << id << "  " << name << ": " << out.detail << timing << std::endl;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Outcome fail_if(bool failed, std::string detail) {
  return {failed ? Outcome::Fail : Outcome::Pass, std::move(detail)};
}

// 1. Numerical kernels --------------------------------------------------------

Outcome numerical_kernels() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 12);
  double worst_sym = 0, worst_gen = 0, worst_ls = 0;
  int bad = 0;

  for (int t = 0; t < 500; ++t) {
    const int n = dim(rng);
    const Matrix a = oracle::random_symmetric(rng, n);
    const auto es = linalg::sym_eig_desc(a);
    const double scale = std::max(1.0, a.norm());
    for (int k = 0; k < n; ++k) {
      const double res = (a * es.vectors.col(k) - es.values[k] * es.vectors.col(k)).norm() / scale;
      worst_sym = std::max(worst_sym, res);
      if (res > 1e-8 || std::abs(es.vectors.col(k).norm() - 1) > 1e-10) ++bad;
      if (k > 0 && es.values[k] > es.values[k - 1]) ++bad;
    }
    const double orth = (es.vectors.transpose() * es.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (orth > 1e-8) ++bad;
  }

  for (int t = 0; t < 500; ++t) {
    const int n = dim(rng);
    const Matrix a = oracle::random_symmetric(rng, n);
    Matrix b;
    if (t % 2 == 0) {
      b = oracle::random_spd(rng, n);
    } else {
      // Rank-deficient PSD, as XDX^t is when d exceeds n.
      const int m = std::uniform_int_distribution<int>(1, n)(rng);
      const Matrix g = oracle::random_matrix(rng, n, m);
      b = g * g.transpose();
    }
    const double ridge = 1e-6;
    Matrix breg = 0.5 * (b + b.transpose());
    const double tr = breg.trace();
    breg.diagonal().array() += ridge * (tr > 0 ? tr / n : 1.0);
    const auto es = linalg::gen_eig_desc(a, b, ridge);
    const double scale = std::max(1.0, a.norm());
    for (int k = 0; k < n; ++k) {
      const Vector v = es.vectors.col(k);
      const double res = (a * v - es.values[k] * breg * v).norm() / scale;
      worst_gen = std::max(worst_gen, res);
      if (res > 1e-6) ++bad;
    }
    const double borth =
        (es.vectors.transpose() * breg * es.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (borth > 1e-6) ++bad;
  }

  for (int t = 0; t < 500; ++t) {
    const int m = dim(rng);
    const int k = std::uniform_int_distribution<int>(1, m)(rng);
    const int p = std::uniform_int_distribution<int>(1, 4)(rng);
    const Matrix a = oracle::random_matrix(rng, m, k);
    const Matrix b = oracle::random_matrix(rng, m, p);
    const Matrix c = linalg::least_squares(a, b);
    const double res = (a.transpose() * (b - a * c)).cwiseAbs().maxCoeff() / (a.norm() * b.norm());
    worst_ls = std::max(worst_ls, res);
    if (res > 1e-8) ++bad;
  }
  return fail_if(bad > 0, "1500 instances, " + std::to_string(bad) + " violations; worst scaled residuals sym " +
                              sci(worst_sym) + ", gen " + sci(worst_gen) + ", lsq " + sci(worst_ls));
}

// 2. Reduction oracles -------------------------------------------------------

struct Reduction {
  int support_mismatch = 0;
  double worst_coef = 0;
};

void compare(Reduction& red, const SparseSolution& sol, const oracle::Greedy& ref) {
  if (sol.support != ref.support) {
    ++red.support_mismatch;
    return;
  }
  red.worst_coef = std::max(red.worst_coef, (sol.coefficients - ref.coefficients).cwiseAbs().maxCoeff());
}

Outcome reduction_oracles() {
  std::mt19937_64 rng(777);
  Reduction omp, somp, bomp;
  for (int t = 0; t < 200; ++t) {
    Matrix atoms = oracle::random_matrix(rng, 12, 30);
    atoms.colwise().normalize();
    BlockDictionary d;
    for (int j = 0; j < 30; ++j) {
      d.blocks.push_back(atoms.col(j));
      d.class_of_block.push_back(1 + j % 3);
    }
    const Vector y = oracle::random_matrix(rng, 12, 1).col(0);
    compare(omp, sbomp(d, y, 5, {RankPolicy::Strict}), oracle::omp(atoms, y, 5));
    const Matrix s = oracle::random_matrix(rng, 12, 6);
    compare(somp, sbomp(d, s, 5, {RankPolicy::Strict}), oracle::somp(atoms, s, 5));
  }
  for (int t = 0; t < 200; ++t) {
    const int width = 3, blocks = 10;
    Matrix atoms = oracle::random_matrix(rng, 40, width * blocks);
    atoms.colwise().normalize();
    BlockDictionary d;
    std::vector<std::vector<int>> groups;
    for (int b = 0; b < blocks; ++b) {
      d.blocks.push_back(atoms.middleCols(b * width, width));
      d.class_of_block.push_back(1 + b % 2);
      groups.push_back({b * width, b * width + 1, b * width + 2});
    }
    const Vector y = oracle::random_matrix(rng, 40, 1).col(0);
    compare(bomp, sbomp(d, y, 4, {RankPolicy::Strict}), oracle::bomp(atoms, groups, y, 4));
  }
  const bool ok = omp.support_mismatch + somp.support_mismatch + bomp.support_mismatch == 0 &&
                  std::max({omp.worst_coef, somp.worst_coef, bomp.worst_coef}) <= 1e-8;
  std::ostringstream s;
  s << "OMP/SOMP/BOMP x200 each; support mismatches " << omp.support_mismatch << "/"
    << somp.support_mismatch << "/" << bomp.support_mismatch << ", worst coefficient gap "
    << sci(std::max({omp.worst_coef, somp.worst_coef, bomp.worst_coef}));
  return fail_if(!ok, s.str());
}

// 3. Grid-search optimality --------------------------------------------------

Outcome grid_optimality() {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> jitter(0.0, 0.03);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  SampleSet x;
  x.features.resize(2, 40);
  for (int i = 0; i < 40; ++i) {
    const double angle = (i < 20 ? 0.0 : M_PI / 2) + jitter(rng);
    const double r = radius(rng);
    x.features.col(i) << r * std::cos(angle), r * std::sin(angle);
  }
  const double sigma = median_heuristic_sigma(x.features), ridge = 1e-6;
  Matrix a = Matrix::Zero(2, 2), lap = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) {
      const double w = oracle::heat(x.features.col(i), x.features.col(j), sigma);
      a += w * x.features.col(i) * x.features.col(j).transpose();
      b += w * x.features.col(i) * x.features.col(i).transpose();
    }
  lap = b - a;
  b.diagonal().array() += ridge * b.trace() / 2;

  const Vector u = fit_lspp(x, sigma, 1, ridge).matrix.col(0);
  const double lspp = u.dot(a * u) / u.dot(b * u);
  const double lspp_grid = oracle::grid_ratio_2d(a, b, 3600, true);
  const Vector v = fit_lpp(x, sigma, 1, ridge).matrix.col(0);
  const double lpp = v.dot(lap * v) / v.dot(b * v);
  const double lpp_grid = oracle::grid_ratio_2d(lap, b, 3600, false);
  const double gap_lspp = std::abs(lspp - lspp_grid) / std::abs(lspp_grid);
  const double gap_lpp = std::abs(lpp - lpp_grid) / std::max(std::abs(lpp_grid), 1e-300);

  // SLSPP on a 2-band cube against the brute-force M.
  HyperCube cube(8, 8, 2);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      const double angle = (c < 4 ? 0.2 : 1.3) + jitter(rng), rad = radius(rng);
      cube.at(r, c, 0) = rad * std::cos(angle);
      cube.at(r, c, 1) = rad * std::sin(angle);
    }
  const std::vector<Pixel> centers{{0, 0}, {2, 3}, {4, 4}, {7, 7}, {5, 1}, {1, 6}};
  Matrix m = Matrix::Zero(2, 2);
  for (Pixel ci : centers)
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const Pixel z{ci.row + dr, ci.col + dc};
        if (!cube.contains(z)) continue;
        const Vector xi = cube.spectrum(ci), zk = cube.spectrum(z);
        m += oracle::heat(xi, zk, 0.8) * zk * xi.transpose();
      }
  const Vector top = oracle::top_eigvec_2x2(0.5 * (m + m.transpose()));
  const Vector s = fit_slspp(cube, centers, 3, 0.8, 1).matrix.col(0);
  const double slspp_gap = 1.0 - std::abs(top.dot(s));

  const bool ok = gap_lspp <= 1e-3 && gap_lpp <= 1e-3 && slspp_gap <= 1e-9;
  return fail_if(!ok, "relative gap LSPP " + sci(gap_lspp) + ", LPP " + sci(gap_lpp) +
                          "; SLSPP 1-|cos| vs brute-force sym(M) " + sci(slspp_gap));
}

// 4. LADA weights ------------------------------------------------------------

Outcome lada_weights() {
  int cases = 0, bad = 0, negative = 0;
  for (int n = 2; n <= 30; ++n)
    for (int nl = 1; nl <= n; ++nl)
      for (double a : {0.0, 1e-3, 0.25, std::exp(-1.0), 0.5, 0.9, 1.0}) {
        cases += 2;
        if (lada_within_weight(true, a, nl, n) != a / nl) ++bad;
        if (lada_within_weight(false, a, nl, n) != 0.0) ++bad;
        const double lb = lada_between_weight(true, a, nl, n);
        if (lb != a * (1.0 / n - 1.0 / nl)) ++bad;
        if (nl < n && a > 0 && !(lb < 0)) ++bad;
        if (lb < 0) ++negative;
        if (lada_between_weight(false, a, nl, n) != 1.0 / n) ++bad;
      }
  // The assembled matrices agree with the double sum.
  std::mt19937_64 rng(4);
  SampleSet x;
  x.features = oracle::random_matrix(rng, 4, 9);
  x.labels = {1, 2, 2, 3, 1, 3, 3, 2, 1};
  const ScatterMatrices s = lada_scatter(x, 2.0);
  Matrix lw = Matrix::Zero(4, 4), lb = Matrix::Zero(4, 4);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      const Matrix outer = x.features.col(i) * x.features.col(j).transpose();
      if (x.labels[static_cast<std::size_t>(i)] == x.labels[static_cast<std::size_t>(j)]) {
        const double aij = oracle::heat(x.features.col(i), x.features.col(j), 2.0);
        lw += aij / 3 * outer;
        lb += aij * (1.0 / 9 - 1.0 / 3) * outer;
      } else {
        lb += outer / 9;
      }
    }
  const double gap = std::max((s.within - lw).cwiseAbs().maxCoeff(), (s.between - lb).cwiseAbs().maxCoeff());
  if (gap > 1e-12) ++bad;
  return fail_if(bad > 0, std::to_string(cases) + " enumerated cases, " + std::to_string(bad) +
                              " mismatches, " + std::to_string(negative) +
                              " negative same-class between-weights; assembled matrices gap " + sci(gap));
}

// 5. Synthetic end-to-end ----------------------------------------------------

ExperimentConfig synthetic_config(Method m, ClassifierKind k, int r) {
  ExperimentConfig c;
  c.pipeline.method = m;
  c.pipeline.classifier = k;
  c.pipeline.r = r;
  c.n_train = 10;
  c.n_test = 50;
  c.trials = 10;
  c.seed = 2024;
  c.threads = static_cast<int>(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));
  return c;
}

Outcome synthetic_noiseless() {
  SceneSpec spec;
  spec.noise_sd = 0.0;
  const auto [cube, gt] = synth_scene(spec);
  int total = 0, perfect = 0;
  std::string worst;
  double worst_acc = 2;
  for (Method m : {Method::LSPP, Method::SLSPP, Method::ADA, Method::LADA})
    for (ClassifierKind k : {ClassifierKind::SBOMP, ClassifierKind::SOMP, ClassifierKind::NNCosine})
      for (int r : {3, 5}) {
        ++total;
        const double acc = run_experiment(cube, gt, synthetic_config(m, k, r)).overall_accuracy;
        if (acc == 1.0) ++perfect;
        if (acc < worst_acc) {
          worst_acc = acc;
          worst = describe({m, k}) + " r=" + std::to_string(r);
        }
      }
  std::ostringstream s;
  s << perfect << "/" << total << " pipelines at 100% (r in {3,5}); lowest " << worst << " "
    << 100 * worst_acc << "%";
  return fail_if(perfect != total, s.str());
}

Outcome synthetic_noisy() {
  const auto [cube, gt] = synth_scene(SceneSpec{});
  const double slspp =
      run_experiment(cube, gt, synthetic_config(Method::SLSPP, ClassifierKind::SBOMP, 3)).overall_accuracy;
  const double lspp =
      run_experiment(cube, gt, synthetic_config(Method::LSPP, ClassifierKind::NNCosine, 3)).overall_accuracy;
  std::ostringstream s;
  s.precision(4);
  s << "SLSPP--SBOMP-C " << 100 * slspp << "% vs LSPP--NN " << 100 * lspp << "% (r=3, K=3, window 3)";
  return fail_if(slspp < lspp - 0.01, s.str());
}

// 6. Pavia (optional) --------------------------------------------------------

struct PaviaArgs {
  std::string cube, gt, format = "envi_bsq";
};

Outcome pavia(const PaviaArgs& args) {
  if (args.cube.empty() || args.gt.empty())
    return {Outcome::Skip, "no Pavia data supplied (--pavia-cube, --pavia-gt)"};
  const HyperCube cube = io::load_cube(args.cube, io::parse_cube_format(args.format));
  const GroundTruth gt = io::load_ground_truth(args.gt);
  ExperimentConfig base;
  base.pipeline.method = Method::SLSPP;
  base.pipeline.classifier = ClassifierKind::SBOMP;
  base.n_train = 10;
  base.n_test = 100;
  base.trials = 10;
  base.seed = 1;
  base.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  SweepAxes axes;
  axes.r = {10, 20, 30};
  axes.sparsity = {3, 5, 10};
  axes.window = {1, 3, 5, 7, 9};
  const auto reports = sweep(cube, gt, base, axes);
  const auto best = std::max_element(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return a.overall_accuracy < b.overall_accuracy;
  });
  const double acc = 100 * best->overall_accuracy;
  const int window = best->config.pipeline.window;
  std::ostringstream s;
  s.precision(4);
  s << "best SLSPP--SBOMP-C " << acc << "% at r=" << best->config.pipeline.r << " K="
    << best->config.pipeline.sparsity << " window=" << window << " (target 80.0 +/- 4, window 5 +/- 2)";
  return fail_if(std::abs(acc - 80.0) > 4.0 || std::abs(window - 5) > 2, s.str());
}

// 7. Determinism -------------------------------------------------------------

std::string slurp(const fs::path& p) { return io::read_text(p); }

Outcome determinism() {
#ifdef HSIPROJ_CLI_PATH
  const fs::path cli = HSIPROJ_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / ("hsiproj_accept_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::string q = "\"";
  auto sh = [&](const std::string& args) {
    const std::string cmd = q + cli.string() + q + " " + args + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + cmd);
  };
  const std::string cube = (dir / "scene.csv").string(), gt = (dir / "scene_gt.csv").string();
  sh("synth --out " + cube + " --gt " + gt);
  const std::vector<std::string> invocations{
      "--method slspp --classifier sbomp --r 3 --n-test 50",
      "--method lada --classifier nn-cos --n-test 50 --threads 4 --sigma 0.5",
      "--method lspp --classifier somp --r 4 --n-test 40 --trials 6 --seed 9 --threads 3 --normalize"};
  int same = 0;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const std::string base = "eval --cube " + cube + " --gt " + gt + " " + invocations[i] + " --out ";
    const fs::path a = dir / ("a" + std::to_string(i) + ".json"), b = dir / ("b" + std::to_string(i) + ".json");
    sh(base + a.string());
    sh(base + b.string());
    if (slurp(a) == slurp(b) && !slurp(a).empty()) ++same;
  }
  fs::remove_all(dir);
  return fail_if(same != static_cast<int>(invocations.size()),
                 std::to_string(same) + "/" + std::to_string(invocations.size()) +
                     " eval invocations byte-identical across two runs");
#else
  const auto [cube, gt] = synth_scene(SceneSpec{});
  const auto cfg = synthetic_config(Method::SLSPP, ClassifierKind::SBOMP, 3);
  const bool ok = report_json(run_experiment(cube, gt, cfg)) == report_json(run_experiment(cube, gt, cfg));
  return fail_if(!ok, "CLI not built; library-level JSON reports compared");
#endif
}

}  // namespace

int main(int argc, char** argv) {
  PaviaArgs pav;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string k = argv[i];
    if (k == "--pavia-cube") pav.cube = argv[i + 1];
    else if (k == "--pavia-gt") pav.gt = argv[i + 1];
    else if (k == "--pavia-format") pav.format = argv[i + 1];
  }

  run("1", "numerical kernels", 10, numerical_kernels);
  run("2", "reduction oracles", 30, reduction_oracles);
  run("3", "grid-search optimality", 5, grid_optimality);
  run("4", "LADA weight formulas", 0, lada_weights);
  run("5a", "synthetic noiseless, every pipeline", 120, synthetic_noiseless);
  run("5b", "synthetic noisy ordering", 120, synthetic_noisy);
  run("6", "Pavia University (optional)", 0, [&] { return pavia(pav); });
  run("7", "eval determinism", 0, determinism);

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
