#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lanegraph/geometry.hpp"

namespace lanegraph {

/// One prediction-head output: existence likelihood in [0,1] and n_cp
/// control points in normalized image coordinates.
struct PathProposal {
  double likelihood = 0.0;
  std::vector<Point> control_points;
};

/// Ground-truth path as n_cp normalized control points.
struct GroundTruthPath {
  std::vector<Point> control_points;
};

/// alpha weighs control-point distance, beta weighs the likelihood term.
/// Both default to 1; neither value is pinned by any reference setup.
struct MatchWeights {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Row-major dense matrix of matching costs, rows = ground truth,
/// columns = proposals.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Throws Error(kSizeMismatch) for ragged input.
  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// pairs[i] = (gt_index, proposal_index), sorted by gt_index.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost = 0.0;
};

/// alpha * sum_k |y^k - a^k|_1 + beta * (1 - l). The likelihood term is added
/// once, not per control point.
double match_cost(const GroundTruthPath& gt, const PathProposal& prop, const MatchWeights& w);

CostMatrix build_cost_matrix(const std::vector<GroundTruthPath>& gts,
                             const std::vector<PathProposal>& props, const MatchWeights& w);

/// Minimum-cost assignment of every row to a distinct column (rows <= cols).
/// Among equal-cost optima the lexicographically smallest pair list wins.
/// total_cost is the row-ordered sum of the chosen entries.
///
/// Throws Error(kSizeMismatch) when rows > cols, Error(kInvalidArgument)
/// for non-finite entries.
Assignment hungarian(const CostMatrix& costs);

/// Exhaustive enumeration of injective row->column maps; same contract and
/// tie-break as hungarian. Throws Error(kInvalidArgument) for rows > 8.
Assignment brute_force_assignment(const CostMatrix& costs);

inline constexpr std::size_t kBruteForceMaxRows = 8;
inline constexpr double kBceEpsilon = 1e-7;

struct SetLoss {
  double total = 0.0;
  double regression = 0.0;
  double classification = 0.0;
  Assignment assignment;
};

/// Binary cross-entropy of one likelihood against a 0/1 target; the log
/// argument is floored at kBceEpsilon.
double binary_cross_entropy(double likelihood, bool target);

/// Mean squared error over all 2 * n_cp coordinates of two point lists.
double control_point_mse(const std::vector<Point>& a, const std::vector<Point>& b);

/// Hungarian-matched set loss:
///   regression     = sum over gt paths of control_point_mse(gt, matched proposal)
///   classification = mean BCE over all proposals, target 1 iff matched
///   total          = alpha * regression + beta * classification
/// Throws Error(kSizeMismatch) for n_cp disagreements or |gts| > |props|,
/// Error(kInvalidArgument) for likelihoods outside [0,1].
SetLoss set_loss(const std::vector<GroundTruthPath>& gts, const std::vector<PathProposal>& props,
                 const MatchWeights& w);

}  // namespace lanegraph
