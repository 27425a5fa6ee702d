#include "hsiproj/sparse_recovery.hpp"

#include "hsiproj/error.hpp"
#include "hsiproj/linalg.hpp"

#include <set>
#include <string>

namespace hsiproj {

void BlockDictionary::check() const {
  if (blocks.empty()) throw Error(ErrorCode::TooFewSamples, "dictionary has no blocks");
  if (class_of_block.size() != blocks.size())
    throw Error(ErrorCode::DimensionMismatch, "dictionary needs one class id per block");
  const auto d = blocks.front().rows();
  for (const Matrix& b : blocks) {
    if (b.rows() != d || b.rows() < 1)
      throw Error(ErrorCode::DimensionMismatch, "dictionary blocks must share their row count");
    if (b.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "dictionary block with no atoms");
  }
}

double selection_score(const Matrix& block, const Matrix& residual) {
  if (block.rows() != residual.rows())
    throw Error(ErrorCode::DimensionMismatch, "selection_score: row counts differ");
  return (block.transpose() * residual).rowwise().norm().sum();
}

namespace {

Matrix concat_support(const BlockDictionary& dict, const std::vector<int>& support) {
  Eigen::Index cols = 0;
  for (int i : support) cols += dict.blocks[static_cast<std::size_t>(i)].cols();
  Matrix a(dict.dim(), cols);
  Eigen::Index at = 0;
  for (int i : support) {
    const Matrix& b = dict.blocks[static_cast<std::size_t>(i)];
    a.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return a;
}

}  // namespace

SparseSolution sbomp(const BlockDictionary& dict, const Matrix& s, int k,
                     const PursuitOptions& options) {
  dict.check();
  if (k < 1 || k > dict.size())
    throw Error(ErrorCode::InvalidSparsity, "sparsity must be in [1, " + std::to_string(dict.size()) +
                                                "], got " + std::to_string(k));
  if (s.rows() != dict.dim())
    throw Error(ErrorCode::DimensionMismatch, "test block has " + std::to_string(s.rows()) +
                                                  " rows, dictionary has " + std::to_string(dict.dim()));
  linalg::require_finite(s, "S");

  SparseSolution sol;
  sol.residual = s;
  sol.coefficients.resize(0, s.cols());
  const double stop = 1e-10 * s.norm();
  std::vector<bool> used(static_cast<std::size_t>(dict.size()), false);

  for (int m = 0; m < k; ++m) {
    if (sol.residual.norm() <= stop) break;
    int best = -1;
    double best_score = 0.0;
    for (int i = 0; i < dict.size(); ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double score = selection_score(dict.blocks[static_cast<std::size_t>(i)], sol.residual);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best < 0) break;

    used[static_cast<std::size_t>(best)] = true;
    sol.support.push_back(best);
    const Matrix a = concat_support(dict, sol.support);
    sol.coefficients = options.rank_policy == RankPolicy::Strict
                           ? linalg::least_squares(a, s)
                           : linalg::least_squares_min_norm(a, s);
    sol.residual = s - a * sol.coefficients;
    sol.residual_norms.push_back(sol.residual.norm());
  }
  return sol;
}

std::map<int, double> residual_by_class(const BlockDictionary& dict, const Matrix& s,
                                        const SparseSolution& sol) {
  std::map<int, double> out;
  for (int c : dict.class_of_block) out.emplace(c, 0.0);
  for (auto& [cls, residual] : out) {
    Matrix recon = Matrix::Zero(s.rows(), s.cols());
    Eigen::Index row = 0;
    for (int i : sol.support) {
      const Matrix& b = dict.blocks[static_cast<std::size_t>(i)];
      if (dict.class_of_block[static_cast<std::size_t>(i)] == cls)
        recon.noalias() += b * sol.coefficients.middleRows(row, b.cols());
      row += b.cols();
    }
    residual = (s - recon).norm();
  }
  return out;
}

}  // namespace hsiproj
