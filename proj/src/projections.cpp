#include "hsiproj/projections.hpp"

#include "hsiproj/affinity.hpp"
#include "hsiproj/dataset.hpp"
#include "hsiproj/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace hsiproj {

namespace {

void check_reduced_dim(int r, int d) {
  if (r < 1) throw Error(ErrorCode::ReducedDimTooSmall, "reduced dimension must be >= 1");
  if (r > d)
    throw Error(ErrorCode::ReducedDimTooLarge, "reduced dimension " + std::to_string(r) +
                                                   " exceeds feature dimension " + std::to_string(d));
}

Projection top_columns(const linalg::EigenSystem& es, int r, Method m, FitParams params) {
  Projection p;
  p.matrix = es.vectors.leftCols(r);
  p.eigenvalues = es.values.head(r);
  p.method = m;
  p.params = params;
  return p;
}

// Bottom r of a descending system, smallest first, eigenvalues negated.
Projection bottom_columns(const linalg::EigenSystem& es, int r, Method m, FitParams params) {
  const int n = es.size();
  Projection p;
  p.matrix.resize(es.vectors.rows(), r);
  p.eigenvalues.resize(r);
  for (int k = 0; k < r; ++k) {
    p.matrix.col(k) = es.vectors.col(n - 1 - k);
    p.eigenvalues[k] = -es.values[n - 1 - k];
  }
  p.method = m;
  p.params = params;
  return p;
}

void check_supervised(const SampleSet& x) {
  x.check();
  if (!x.labeled()) throw Error(ErrorCode::SingleClass, "supervised fit needs labels");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::LSPP: return "lspp";
    case Method::SLSPP: return "slspp";
    case Method::ADA: return "ada";
    case Method::LADA: return "lada";
    case Method::LPP: return "lpp";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::LSPP, Method::SLSPP, Method::ADA, Method::LADA, Method::LPP})
    if (name == to_string(m)) return m;
  throw Error(ErrorCode::BadSpec, "unknown projection method '" + std::string(name) + "'");
}

ClassStats class_stats(const SampleSet& x) {
  check_supervised(x);
  std::map<int, int> index;
  for (int y : x.labels) index.emplace(y, 0);
  ClassStats s;
  for (auto& [label, idx] : index) {
    idx = static_cast<int>(s.classes.size());
    s.classes.push_back(label);
  }
  const int c = static_cast<int>(s.classes.size());
  s.class_means = Matrix::Zero(x.dim(), c);
  s.class_counts.assign(static_cast<std::size_t>(c), 0);
  for (int i = 0; i < x.size(); ++i) {
    const int l = index[x.labels[static_cast<std::size_t>(i)]];
    s.class_means.col(l) += x.features.col(i);
    ++s.class_counts[static_cast<std::size_t>(l)];
  }
  for (int l = 0; l < c; ++l) s.class_means.col(l) /= s.class_counts[static_cast<std::size_t>(l)];
  s.global_mean = x.features.rowwise().mean();
  return s;
}

ScatterMatrices ada_scatter(const SampleSet& x) {
  const ClassStats s = class_stats(x);
  const int d = x.dim();
  ScatterMatrices out{Matrix::Zero(d, d), Matrix::Zero(d, d)};
  std::map<int, int> index;
  for (std::size_t l = 0; l < s.classes.size(); ++l) index[s.classes[l]] = static_cast<int>(l);
  for (int i = 0; i < x.size(); ++i) {
    const int l = index[x.labels[static_cast<std::size_t>(i)]];
    out.within.noalias() += s.class_means.col(l) * x.features.col(i).transpose();
  }
  for (std::size_t l = 0; l < s.classes.size(); ++l)
    out.between.noalias() += static_cast<double>(s.class_counts[l]) * s.global_mean *
                             s.class_means.col(static_cast<Eigen::Index>(l)).transpose();
  return out;
}

double lada_within_weight(bool same_class, double a_ij, int n_class, int /*n_total*/) {
  return same_class ? a_ij / n_class : 0.0;
}

double lada_between_weight(bool same_class, double a_ij, int n_class, int n_total) {
  return same_class ? a_ij * (1.0 / n_total - 1.0 / n_class) : 1.0 / n_total;
}

ScatterMatrices lada_scatter(const SampleSet& x, double sigma) {
  const ClassStats s = class_stats(x);
  const AffinityMatrix a = heat_kernel_affinity(x.features, sigma);
  std::map<int, int> count;
  for (std::size_t l = 0; l < s.classes.size(); ++l) count[s.classes[l]] = s.class_counts[l];
  const int n = x.size();
  Matrix ww(n, n), wb(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int yi = x.labels[static_cast<std::size_t>(i)];
      const bool same = yi == x.labels[static_cast<std::size_t>(j)];
      ww(i, j) = lada_within_weight(same, a.weights(i, j), count[yi], n);
      wb(i, j) = lada_between_weight(same, a.weights(i, j), count[yi], n);
    }
  return {x.features * ww * x.features.transpose(), x.features * wb * x.features.transpose()};
}

Projection fit_lspp(const SampleSet& x, double sigma, int r, double ridge) {
  if (x.size() < 2) throw Error(ErrorCode::TooFewSamples, "LSPP needs at least 2 samples");
  check_reduced_dim(r, x.dim());
  const AffinityMatrix w = heat_kernel_affinity(x.features, sigma);
  const Vector deg = degree_diagonal(w);
  const Matrix a = x.features * w.weights * x.features.transpose();
  const Matrix b = x.features * deg.asDiagonal() * x.features.transpose();
  return top_columns(linalg::gen_eig_desc(a, b, ridge), r, Method::LSPP, {sigma, 0, ridge});
}

Projection fit_lpp(const SampleSet& x, double sigma, int r, double ridge) {
  if (x.size() < 2) throw Error(ErrorCode::TooFewSamples, "LPP needs at least 2 samples");
  check_reduced_dim(r, x.dim());
  const AffinityMatrix w = heat_kernel_affinity(x.features, sigma);
  const Vector deg = degree_diagonal(w);
  const Matrix lap = graph_laplacian(w);
  const Matrix a = x.features * lap * x.features.transpose();
  const Matrix b = x.features * deg.asDiagonal() * x.features.transpose();
  return bottom_columns(linalg::gen_eig_desc(a, b, ridge), r, Method::LPP, {sigma, 0, ridge});
}

Matrix slspp_matrix(const HyperCube& cube, const std::vector<Pixel>& centers, int window,
                    double sigma) {
  require_odd_window(window);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorCode::NonPositiveSigma, "heat kernel sigma must be positive and finite");
  const int d = cube.bands();
  Matrix m = Matrix::Zero(d, d);
  Vector acc(d);
  for (const Pixel& center : centers) {
    const auto members = window_members(cube.rows(), cube.cols(), center, window);
    const auto xi = cube.spectrum(center);
    // sum_k W_ik z_k, then one rank-1 update per center.
    acc.setZero();
    for (const Pixel& p : members) {
      const auto zk = cube.spectrum(p);
      acc += std::exp(-(xi - zk).squaredNorm() / sigma) * zk;
    }
    m.noalias() += acc * xi.transpose();
  }
  return m;
}

Projection fit_slspp(const HyperCube& cube, const std::vector<Pixel>& centers, int window,
                     double sigma, int r) {
  if (centers.empty()) throw Error(ErrorCode::TooFewSamples, "SLSPP needs at least one center");
  check_reduced_dim(r, cube.bands());
  const Matrix m = slspp_matrix(cube, centers, window, sigma);
  return top_columns(linalg::sym_eig_desc(m), r, Method::SLSPP, {sigma, window, 0.0});
}

Projection fit_ada(const SampleSet& x, int r, double ridge) {
  const ClassStats s = class_stats(x);
  if (s.classes.size() < 2) throw Error(ErrorCode::SingleClass, "ADA needs at least 2 classes");
  check_reduced_dim(r, x.dim());
  const ScatterMatrices sc = ada_scatter(x);
  const Matrix within = 0.5 * (sc.within + sc.within.transpose());
  const Matrix between = 0.5 * (sc.between + sc.between.transpose());
  return top_columns(linalg::gen_eig_desc(within, between, ridge), r, Method::ADA,
                     {0.0, 0, ridge});
}

Projection fit_lada(const SampleSet& x, double sigma, int r, double ridge) {
  const ClassStats s = class_stats(x);
  if (s.classes.size() < 2) throw Error(ErrorCode::SingleClass, "LADA needs at least 2 classes");
  check_reduced_dim(r, x.dim());
  const ScatterMatrices sc = lada_scatter(x, sigma);
  const Matrix within = 0.5 * (sc.within + sc.within.transpose());
  const Matrix between = 0.5 * (sc.between + sc.between.transpose());
  return bottom_columns(linalg::gen_eig_desc(between, within, ridge), r, Method::LADA,
                        {sigma, 0, ridge});
}

int default_supervised_dim(const SampleSet& x) {
  const ClassStats s = class_stats(x);
  return std::max(1, std::min(x.dim(), static_cast<int>(s.classes.size()) - 1));
}

Matrix project(const Projection& p, const Matrix& x) {
  if (x.rows() != p.matrix.rows())
    throw Error(ErrorCode::DimensionMismatch, "projection expects " + std::to_string(p.matrix.rows()) +
                                                  " features, got " + std::to_string(x.rows()));
  return p.matrix.transpose() * x;
}

SampleSet project(const Projection& p, const SampleSet& x) {
  SampleSet out;
  out.features = project(p, x.features);
  out.labels = x.labels;
  out.coords = x.coords;
  return out;
}

std::string serialize(const Projection& p) {
  std::string s;
  s += std::string(to_string(p.method)) + ' ' + std::to_string(p.input_dim()) + ' ' +
       std::to_string(p.output_dim()) + ' ' + fmt17(p.params.sigma) + ' ' +
       std::to_string(p.params.window) + ' ' + fmt17(p.params.ridge) + '\n';
  for (Eigen::Index i = 0; i < p.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.matrix.cols(); ++j) {
      if (j) s += ' ';
      s += fmt17(p.matrix(i, j));
    }
    s += '\n';
  }
  for (Eigen::Index j = 0; j < p.eigenvalues.size(); ++j) {
    if (j) s += ' ';
    s += fmt17(p.eigenvalues[j]);
  }
  s += '\n';
  return s;
}

Projection deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string method;
  long d = 0, r = 0, window = 0;
  std::string sigma_tok, ridge_tok;
  if (!(in >> method >> d >> r >> sigma_tok >> window >> ridge_tok) || d < 1 || r < 1 || r > d)
    throw Error(ErrorCode::MalformedHeader, "projection file: bad header line");
  auto number = [&](const std::string& tok) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v))
      throw Error(ErrorCode::MalformedHeader, "projection file: bad number '" + tok + "'");
    return v;
  };
  auto next = [&] {
    std::string tok;
    if (!(in >> tok)) throw Error(ErrorCode::SizeMismatch, "projection file: truncated payload");
    return number(tok);
  };
  Projection p;
  p.method = parse_method(method);
  p.params = {number(sigma_tok), static_cast<int>(window), number(ridge_tok)};
  p.matrix.resize(d, r);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < r; ++j) p.matrix(i, j) = next();
  p.eigenvalues.resize(r);
  for (long j = 0; j < r; ++j) p.eigenvalues[j] = next();
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::SizeMismatch, "projection file: trailing data");
  return p;
}

}  // namespace hsiproj
