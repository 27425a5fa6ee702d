#include "hsiproj/classifiers.hpp"

#include "hsiproj/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hsiproj {

namespace {

bool close(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

Prediction argmin_residual(std::map<int, double> residuals) {
  Prediction p;
  bool first = true;
  double best = 0.0;
  for (const auto& [cls, r] : residuals) {
    if (first || (r < best && !close(r, best))) {
      best = r;
      p.label = cls;
      first = false;
    }
  }
  int ties = 0;
  for (const auto& [cls, r] : residuals)
    if (close(r, best)) ++ties;
  p.tie_broken = ties > 1;
  p.scores = std::move(residuals);
  return p;
}

}  // namespace

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::SBOMP: return "sbomp";
    case ClassifierKind::SOMP: return "somp";
    case ClassifierKind::NNCosine: return "nn-cos";
  }
  return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
  for (ClassifierKind k : {ClassifierKind::SBOMP, ClassifierKind::SOMP, ClassifierKind::NNCosine})
    if (name == to_string(k)) return k;
  throw Error(ErrorCode::BadSpec, "unknown classifier '" + std::string(name) + "'");
}

Prediction sbomp_classify(const BlockDictionary& dict, const Matrix& s, int k,
                          const PursuitOptions& options) {
  const SparseSolution sol = sbomp(dict, s, k, options);
  return argmin_residual(residual_by_class(dict, s, sol));
}

Prediction somp_classify(const BlockDictionary& dict, const Matrix& s, int k,
                         const PursuitOptions& options) {
  for (const Matrix& b : dict.blocks)
    if (b.cols() != 1)
      throw Error(ErrorCode::DimensionMismatch, "SOMP classification needs single-atom blocks");
  return sbomp_classify(dict, s, k, options);
}

Prediction nn_cosine_classify(const SampleSet& train, const Vector& x) {
  train.check();
  if (!train.labeled() || train.size() == 0)
    throw Error(ErrorCode::TooFewSamples, "nearest neighbor needs labeled training samples");
  if (x.size() != train.dim())
    throw Error(ErrorCode::DimensionMismatch, "test vector has " + std::to_string(x.size()) +
                                                  " features, training has " + std::to_string(train.dim()));
  const double xn = x.norm();
  if (!(xn > 0.0)) throw Error(ErrorCode::ZeroVector, "test vector is zero");

  Prediction p;
  double best = -2.0;
  int best_index = -1;
  for (int i = 0; i < train.size(); ++i) {
    const double yn = train.features.col(i).norm();
    if (!(yn > 0.0))
      throw Error(ErrorCode::ZeroVector, "training sample " + std::to_string(i) + " is zero");
    const double cosine = x.dot(train.features.col(i)) / (xn * yn);
    const int label = train.labels[static_cast<std::size_t>(i)];
    auto [it, inserted] = p.scores.emplace(label, cosine);
    if (!inserted && cosine > it->second) it->second = cosine;
    if (best_index < 0 || (cosine > best && !close(cosine, best))) {
      best = cosine;
      best_index = i;
    }
  }
  p.label = train.labels[static_cast<std::size_t>(best_index)];
  for (const auto& [cls, score] : p.scores)
    if (cls != p.label && close(score, best)) p.tie_broken = true;
  return p;
}

}  // namespace hsiproj
