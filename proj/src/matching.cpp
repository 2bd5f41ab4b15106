#include "lanegraph/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lanegraph/error.hpp"

namespace lanegraph {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kSizeMismatch, "control-point count mismatch: " + std::to_string(a) +
                                              " vs " + std::to_string(b));
  }
}

void require_assignable(const CostMatrix& c) {
  if (c.rows() > c.cols()) {
    throw Error(ErrorCode::kSizeMismatch, "more ground-truth paths (" + std::to_string(c.rows()) +
                                              ") than proposals (" + std::to_string(c.cols()) + ")");
  }
  for (std::size_t r = 0; r < c.rows(); ++r) {
    for (std::size_t k = 0; k < c.cols(); ++k) {
      if (!std::isfinite(c(r, k))) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite cost at (" + std::to_string(r) + "," +
                                                     std::to_string(k) + ")");
      }
    }
  }
}

// Shortest-augmenting-path Hungarian method on the sub-matrix selected by
// `rows` x `cols` (rows.size() <= cols.size()). Returns, per selected row,
// the position in `cols` it is assigned to.
std::vector<std::size_t> solve_assignment(const CostMatrix& c, const std::vector<std::size_t>& rows,
                                          const std::vector<std::size_t>& cols) {
  const std::size_t n = rows.size();
  const std::size_t m = cols.size();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = c(rows[i0 - 1], cols[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) result[owner[j] - 1] = j - 1;
  }
  return result;
}

double solve_cost(const CostMatrix& c, const std::vector<std::size_t>& rows,
                  const std::vector<std::size_t>& cols) {
  const auto pick = solve_assignment(c, rows, cols);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) total += c(rows[i], cols[pick[i]]);
  return total;
}

void brute_force(const CostMatrix& c, std::size_t row, double acc, std::vector<bool>& used,
                 std::vector<std::size_t>& current, double& best,
                 std::vector<std::size_t>& best_pick) {
  if (row == c.rows()) {
    if (acc < best) {
      best = acc;
      best_pick = current;
    }
    return;
  }
  for (std::size_t col = 0; col < c.cols(); ++col) {
    if (used[col]) continue;
    used[col] = true;
    current.push_back(col);
    brute_force(c, row + 1, acc + c(row, col), used, current, best, best_pick);
    current.pop_back();
    used[col] = false;
  }
}

}  // namespace

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  CostMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::kSizeMismatch, "ragged cost matrix");
    for (std::size_t k = 0; k < cols; ++k) m(r, k) = rows[r][k];
  }
  return m;
}

double match_cost(const GroundTruthPath& gt, const PathProposal& prop, const MatchWeights& w) {
  require_same_size(gt.control_points.size(), prop.control_points.size());
  double dist = 0.0;
  for (std::size_t k = 0; k < gt.control_points.size(); ++k) {
    dist += manhattan(gt.control_points[k], prop.control_points[k]);
  }
  return w.alpha * dist + w.beta * (1.0 - prop.likelihood);
}

CostMatrix build_cost_matrix(const std::vector<GroundTruthPath>& gts,
                             const std::vector<PathProposal>& props, const MatchWeights& w) {
  CostMatrix m(gts.size(), props.size());
  for (std::size_t r = 0; r < gts.size(); ++r) {
    for (std::size_t k = 0; k < props.size(); ++k) m(r, k) = match_cost(gts[r], props[k], w);
  }
  return m;
}

Assignment hungarian(const CostMatrix& costs) {
  require_assignable(costs);
  const std::size_t n = costs.rows();
  Assignment out;
  if (n == 0) return out;

  std::vector<std::size_t> all_rows(n), all_cols(costs.cols());
  for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;
  for (std::size_t j = 0; j < costs.cols(); ++j) all_cols[j] = j;
  const double optimum = solve_cost(costs, all_rows, all_cols);

  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < costs.cols(); ++j) scale = std::max(scale, std::abs(costs(i, j)));
  }
  const double tol = 1e-12 * scale * static_cast<double>(n);

  // Fix rows in order to the smallest column that still admits an optimum.
  std::vector<bool> used(costs.cols(), false);
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rest_rows(all_rows.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                       all_rows.end());
    std::size_t chosen = costs.cols();
    for (std::size_t j = 0; j < costs.cols() && chosen == costs.cols(); ++j) {
      if (used[j]) continue;
      std::vector<std::size_t> rest_cols;
      for (std::size_t k = 0; k < costs.cols(); ++k) {
        if (!used[k] && k != j) rest_cols.push_back(k);
      }
      const double rest = rest_rows.empty() ? 0.0 : solve_cost(costs, rest_rows, rest_cols);
      if (prefix + costs(i, j) + rest <= optimum + tol) chosen = j;
    }
    if (chosen == costs.cols()) {
      // Numerical corner case: fall back to the plain solver's choice.
      const auto pick = solve_assignment(costs, all_rows, all_cols);
      out.pairs.clear();
      out.total_cost = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        out.pairs.emplace_back(r, pick[r]);
        out.total_cost += costs(r, pick[r]);
      }
      return out;
    }
    used[chosen] = true;
    prefix += costs(i, chosen);
    out.pairs.emplace_back(i, chosen);
  }
  out.total_cost = 0.0;
  for (const auto& [r, k] : out.pairs) out.total_cost += costs(r, k);
  return out;
}

Assignment brute_force_assignment(const CostMatrix& costs) {
  if (costs.rows() > kBruteForceMaxRows) {
    throw Error(ErrorCode::kInvalidArgument,
                "brute-force assignment limited to " + std::to_string(kBruteForceMaxRows) + " rows");
  }
  require_assignable(costs);
  Assignment out;
  if (costs.rows() == 0) return out;
  std::vector<bool> used(costs.cols(), false);
  std::vector<std::size_t> current, best_pick;
  double best = kInf;
  brute_force(costs, 0, 0.0, used, current, best, best_pick);
  for (std::size_t r = 0; r < best_pick.size(); ++r) out.pairs.emplace_back(r, best_pick[r]);
  out.total_cost = best;
  return out;
}

double binary_cross_entropy(double likelihood, bool target) {
  const double p = target ? likelihood : 1.0 - likelihood;
  return -std::log(std::max(p, kBceEpsilon));
}

double control_point_mse(const std::vector<Point>& a, const std::vector<Point>& b) {
  require_same_size(a.size(), b.size());
  if (a.empty()) return 0.0;
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Point d = a[k] - b[k];
    sq += d.x * d.x + d.y * d.y;
  }
  return sq / static_cast<double>(2 * a.size());
}

SetLoss set_loss(const std::vector<GroundTruthPath>& gts, const std::vector<PathProposal>& props,
                 const MatchWeights& w) {
  for (const auto& p : props) {
    if (!(p.likelihood >= 0.0 && p.likelihood <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "likelihood " + std::to_string(p.likelihood) + " outside [0,1]");
    }
  }
  SetLoss out;
  out.assignment = hungarian(build_cost_matrix(gts, props, w));

  std::vector<bool> matched(props.size(), false);
  for (const auto& [g, k] : out.assignment.pairs) {
    matched[k] = true;
    out.regression += control_point_mse(gts[g].control_points, props[k].control_points);
  }
  for (std::size_t k = 0; k < props.size(); ++k) {
    out.classification += binary_cross_entropy(props[k].likelihood, matched[k]);
  }
  if (!props.empty()) out.classification /= static_cast<double>(props.size());
  out.total = w.alpha * out.regression + w.beta * out.classification;
  return out;
}

}  // namespace lanegraph
