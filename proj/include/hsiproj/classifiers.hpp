#pragma once

#include "hsiproj/sparse_recovery.hpp"
#include "hsiproj/types.hpp"

#include <map>

namespace hsiproj {

enum class ClassifierKind { SBOMP, SOMP, NNCosine };

std::string_view to_string(ClassifierKind k);
ClassifierKind parse_classifier(std::string_view name);

struct Prediction {
  int label = 0;
  /// Per-class residuals for the pursuit classifiers (lower wins), best cosine
  /// similarity per class for nearest neighbor (higher wins).
  std::map<int, double> scores;
  bool tie_broken = false;
};

/// Relative tolerance under which two class scores count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Runs sbomp, then labels S by the class with the smallest residual (lowest
/// class id on ties).
Prediction sbomp_classify(const BlockDictionary& dict, const Matrix& s, int k,
                          const PursuitOptions& options = {});

/// sbomp_classify restricted to single-atom training blocks.
Prediction somp_classify(const BlockDictionary& dict, const Matrix& s, int k,
                         const PursuitOptions& options = {});

/// Label of the training sample with the largest cosine similarity to x
/// (lowest training index on ties).
Prediction nn_cosine_classify(const SampleSet& train, const Vector& x);

}  // namespace hsiproj
