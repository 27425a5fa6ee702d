#include "hsiproj/affinity.hpp"
#include "hsiproj/classifiers.hpp"
#include "hsiproj/error.hpp"
#include "hsiproj/eval.hpp"
#include "hsiproj/io.hpp"
#include "hsiproj/linalg.hpp"
#include "hsiproj/projections.hpp"
#include "hsiproj/sparse_recovery.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hsiproj;

namespace {

using CubeArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

HyperCube to_cube(const CubeArray& a) {
  if (a.ndim() != 3) throw Error(ErrorCode::BadSpec, "cube must be a (rows, cols, bands) array");
  std::vector<double> values(a.data(), a.data() + a.size());
  return HyperCube(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                   static_cast<int>(a.shape(2)), std::move(values));
}

py::array_t<double> from_cube(const HyperCube& c) {
  py::array_t<double> out({c.rows(), c.cols(), c.bands()});
  std::copy(c.values().begin(), c.values().end(), out.mutable_data());
  return out;
}

GroundTruth to_gt(const LabelArray& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::BadSpec, "ground truth must be a (rows, cols) array");
  return GroundTruth(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                     std::vector<int>(a.data(), a.data() + a.size()));
}

py::array_t<int> from_gt(const GroundTruth& g) {
  py::array_t<int> out({g.rows(), g.cols()});
  std::copy(g.labels().begin(), g.labels().end(), out.mutable_data());
  return out;
}

SampleSet samples(const Matrix& x, std::vector<int> labels = {}) {
  SampleSet s;
  s.features = x;
  s.labels = std::move(labels);
  return s;
}

std::vector<Pixel> to_pixels(const std::vector<std::pair<int, int>>& coords) {
  std::vector<Pixel> out;
  out.reserve(coords.size());
  for (auto [r, c] : coords) out.push_back({r, c});
  return out;
}

BlockDictionary dictionary(const std::vector<Matrix>& blocks, const std::vector<int>& classes) {
  BlockDictionary d;
  d.blocks = blocks;
  d.class_of_block = classes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of hsiproj";

  // Raised as Error(code, message).
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<Error>(m, "Error")); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      const py::object err = type(std::string(to_string(e.code())), e.what());
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  py::enum_<Method>(m, "Method")
      .value("LSPP", Method::LSPP)
      .value("SLSPP", Method::SLSPP)
      .value("ADA", Method::ADA)
      .value("LADA", Method::LADA)
      .value("LPP", Method::LPP);

  py::class_<Projection>(m, "Projection")
      .def(py::init<>())
      .def_readwrite("matrix", &Projection::matrix)
      .def_readwrite("eigenvalues", &Projection::eigenvalues)
      .def_property_readonly("method", [](const Projection& p) { return std::string(to_string(p.method)); })
      .def_property_readonly("sigma", [](const Projection& p) { return p.params.sigma; })
      .def_property_readonly("window", [](const Projection& p) { return p.params.window; })
      .def_property_readonly("ridge", [](const Projection& p) { return p.params.ridge; })
      .def("project", [](const Projection& p, const Matrix& x) { return project(p, x); }, py::arg("x"))
      .def("serialize", [](const Projection& p) { return serialize(p); })
      .def_static("deserialize", [](const std::string& s) { return deserialize(s); });

  // linalg
  m.def("sym_eig_desc", [](const Matrix& a) {
    const auto es = linalg::sym_eig_desc(a);
    return py::make_tuple(es.values, es.vectors);
  });
  m.def(
      "gen_eig_desc",
      [](const Matrix& a, const Matrix& b, double ridge) {
        const auto es = linalg::gen_eig_desc(a, b, ridge);
        return py::make_tuple(es.values, es.vectors);
      },
      py::arg("a"), py::arg("b"), py::arg("ridge") = linalg::kDefaultRidge);
  m.def("least_squares", &linalg::least_squares, py::arg("a"), py::arg("b"));

  // affinity
  m.def(
      "heat_kernel_affinity",
      [](const Matrix& x, double sigma, std::optional<int> knn) {
        AffinityOptions o;
        o.knn = knn;
        return heat_kernel_affinity(x, sigma, o).weights;
      },
      py::arg("x"), py::arg("sigma"), py::arg("knn") = py::none());
  m.def("median_heuristic_sigma", &median_heuristic_sigma, py::arg("x"));

  // projections (columns of x are samples)
  m.def(
      "fit_lspp", [](const Matrix& x, double sigma, int r, double ridge) { return fit_lspp(samples(x), sigma, r, ridge); },
      py::arg("x"), py::arg("sigma"), py::arg("r"), py::arg("ridge") = linalg::kDefaultRidge);
  m.def(
      "fit_lpp", [](const Matrix& x, double sigma, int r, double ridge) { return fit_lpp(samples(x), sigma, r, ridge); },
      py::arg("x"), py::arg("sigma"), py::arg("r"), py::arg("ridge") = linalg::kDefaultRidge);
  m.def(
      "fit_ada",
      [](const Matrix& x, std::vector<int> labels, int r, double ridge) {
        return fit_ada(samples(x, std::move(labels)), r, ridge);
      },
      py::arg("x"), py::arg("labels"), py::arg("r"), py::arg("ridge") = linalg::kDefaultRidge);
  m.def(
      "fit_lada",
      [](const Matrix& x, std::vector<int> labels, double sigma, int r, double ridge) {
        return fit_lada(samples(x, std::move(labels)), sigma, r, ridge);
      },
      py::arg("x"), py::arg("labels"), py::arg("sigma"), py::arg("r"), py::arg("ridge") = linalg::kDefaultRidge);
  m.def(
      "fit_slspp",
      [](const CubeArray& cube, const std::vector<std::pair<int, int>>& centers, int window, double sigma, int r) {
        return fit_slspp(to_cube(cube), to_pixels(centers), window, sigma, r);
      },
      py::arg("cube"), py::arg("centers"), py::arg("window"), py::arg("sigma"), py::arg("r"));

  // sparse recovery and classifiers
  m.def("selection_score", &selection_score, py::arg("block"), py::arg("residual"));
  m.def(
      "sbomp",
      [](const std::vector<Matrix>& blocks, const std::vector<int>& classes, const Matrix& s, int k, bool strict) {
        const BlockDictionary d = dictionary(blocks, classes);
        const SparseSolution sol =
            sbomp(d, s, k, {strict ? RankPolicy::Strict : RankPolicy::MinimumNorm});
        py::dict out;
        out["support"] = sol.support;
        out["coefficients"] = sol.coefficients;
        out["residual_norms"] = sol.residual_norms;
        out["residual"] = sol.residual;
        out["class_residuals"] = residual_by_class(d, s, sol);
        return out;
      },
      py::arg("blocks"), py::arg("classes"), py::arg("s"), py::arg("k"), py::arg("strict") = false);
  m.def(
      "sbomp_classify",
      [](const std::vector<Matrix>& blocks, const std::vector<int>& classes, const Matrix& s, int k) {
        return sbomp_classify(dictionary(blocks, classes), s, k).label;
      },
      py::arg("blocks"), py::arg("classes"), py::arg("s"), py::arg("k"));
  m.def(
      "nn_cosine_classify",
      [](const Matrix& train, std::vector<int> labels, const Vector& x) {
        return nn_cosine_classify(samples(train, std::move(labels)), x).label;
      },
      py::arg("train"), py::arg("labels"), py::arg("x"));

  // data
  m.def(
      "synth_scene",
      [](int rows, int cols, int bands, int classes, double noise_sd, int patch_size, std::uint64_t seed,
         double jitter) {
        SceneSpec s{rows, cols, bands, classes, noise_sd, patch_size, seed, jitter};
        const auto [cube, gt] = synth_scene(s);
        return py::make_tuple(from_cube(cube), from_gt(gt));
      },
      py::arg("rows") = 24, py::arg("cols") = 24, py::arg("bands") = 20, py::arg("classes") = 4,
      py::arg("noise_sd") = 0.05, py::arg("patch_size") = 6, py::arg("seed") = 7,
      py::arg("amplitude_jitter") = 0.2);
  m.def(
      "load_cube",
      [](const std::string& path, const std::string& format) {
        return from_cube(io::load_cube(path, io::parse_cube_format(format)));
      },
      py::arg("path"), py::arg("format") = "csv_bands");
  m.def(
      "write_cube",
      [](const std::string& path, const CubeArray& cube, const std::string& format) {
        io::write_cube(path, to_cube(cube), io::parse_cube_format(format));
      },
      py::arg("path"), py::arg("cube"), py::arg("format") = "csv_bands");
  m.def("load_ground_truth", [](const std::string& path) { return from_gt(io::load_ground_truth(path)); },
        py::arg("path"));

  // evaluation; the report comes back as the JSON text the CLI writes
  m.def(
      "run_experiment",
      [](const CubeArray& cube, const LabelArray& gt, const std::string& method, const std::string& classifier,
         int r, std::optional<double> sigma, int window, int sparsity, double ridge, bool normalize,
         int n_train, int n_test, int trials, std::uint64_t seed, int threads) {
        ExperimentConfig c;
        c.pipeline.method = parse_method(method);
        c.pipeline.classifier = parse_classifier(classifier);
        c.pipeline.r = r;
        c.pipeline.sigma = sigma;
        c.pipeline.window = window;
        c.pipeline.sparsity = sparsity;
        c.pipeline.ridge = ridge;
        c.pipeline.normalize = normalize;
        c.n_train = n_train;
        c.n_test = n_test;
        c.trials = trials;
        c.seed = seed;
        c.threads = threads;
        const HyperCube hc = to_cube(cube);
        const GroundTruth g = to_gt(gt);
        py::gil_scoped_release release;
        return report_json(run_experiment(hc, g, c));
      },
      py::arg("cube"), py::arg("gt"), py::arg("method") = "slspp", py::arg("classifier") = "sbomp",
      py::arg("r") = 0, py::arg("sigma") = py::none(), py::arg("window") = 3, py::arg("sparsity") = 3,
      py::arg("ridge") = linalg::kDefaultRidge, py::arg("normalize") = false, py::arg("n_train") = 10,
      py::arg("n_test") = 100, py::arg("trials") = 10, py::arg("seed") = 0, py::arg("threads") = 1);
}
