#pragma once

#include "hsiproj/types.hpp"

#include <map>
#include <vector>

namespace hsiproj {

/// Training atoms grouped into blocks (one block per training pixel's
/// neighborhood), each tagged with the class of its center pixel.
struct BlockDictionary {
  std::vector<Matrix> blocks;
  std::vector<int> class_of_block;

  int size() const noexcept { return static_cast<int>(blocks.size()); }
  int dim() const noexcept { return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows()); }

  void check() const;
};

/// How each coefficient refit treats a selected support whose atoms are
/// linearly dependent.
enum class RankPolicy {
  Strict,       // raise RankDeficient
  MinimumNorm,  // minimum-norm least-squares solution
};

struct PursuitOptions {
  RankPolicy rank_policy = RankPolicy::MinimumNorm;
};

struct SparseSolution {
  std::vector<int> support;     // block indices in selection order
  Matrix coefficients;          // rows follow the concatenated support blocks
  std::vector<double> residual_norms;  // ||R||_F after each iteration
  Matrix residual;
};

/// l2,1 norm of A_i^t R: the sum of the row-wise l2 norms.
double selection_score(const Matrix& block, const Matrix& residual);

/// Simultaneous block OMP. Each iteration selects the unselected block with
/// the largest selection score (lowest index on ties), refits coefficients
/// over the whole support and updates the residual. Stops after K
/// iterations, when ||R||_F <= 1e-10 ||S||_F, or when no block scores above 0.
SparseSolution sbomp(const BlockDictionary& dict, const Matrix& s, int k,
                     const PursuitOptions& options = {});

/// Frobenius residual of S against the reconstruction that keeps only the
/// coefficient rows of class-k blocks, for every class in the dictionary.
std::map<int, double> residual_by_class(const BlockDictionary& dict, const Matrix& s,
                                        const SparseSolution& sol);

}  // namespace hsiproj
