#pragma once

// Rate versus content-information trade-off for transmitting one message of a
// partition: minimize I(s; s^) - beta * I_cont(s; s^) over channels p(s^ | s)
// by Blahut-Arimoto alternating minimization, where
// I_cont = sum_s,s^ p(s) p(s^|s) transcont(s, s^) in normalized units.

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <vector>

#include "semcomm/cell_measure.hpp"
#include "semcomm/inductive.hpp"
#include "semcomm/measures.hpp"

namespace semcomm {

struct LossyConfig {
  double d_star = 0.0;
  std::vector<double> beta_grid;  // ascending
  int max_iters = 2000;
  double tol = 1e-12;
};

struct BAResult {
  Eigen::MatrixXd conditional;  // rows: sources, columns: reconstructions
  Eigen::VectorXd marginal;
  double rate_bits = 0.0;
  double cont_info = 0.0;
  double lagrangian = 0.0;
  std::vector<double> trace;  // Lagrangian after every iteration
  bool monotone = true;       // trace nonincreasing up to rounding
  int iterations = 0;
};

/// p: source probabilities; gain(s, j) = transcont(s, s^_j).
BAResult ba_solve(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, double beta, int max_iters = 2000,
                  double tol = 1e-12);

/// I(s; s^) in bits for a channel.
double mutual_information_bits(const Eigen::VectorXd& p, const Eigen::MatrixXd& conditional);
/// sum_s p(s) sum_j Q(s, j) gain(s, j).
double expected_gain(const Eigen::VectorXd& p, const Eigen::MatrixXd& conditional, const Eigen::MatrixXd& gain);

struct RDPoint {
  double rate_bits = 0.0;
  double cont_info = 0.0;
  double beta = 0.0;  // +inf for the deterministic fallback channel
  Eigen::MatrixXd conditional;
  double lagrangian = 0.0;
};

/// Sum_s p(s) max_j gain(s, j).
double max_cont_info(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain);

/// Smallest-rate point with cont_info >= d_star over the beta grid, also
/// considering the best constant map and the deterministic argmax channel.
/// Throws InfeasibleError when d_star exceeds max_cont_info.
RDPoint lossy_optimize(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, const LossyConfig& cfg);
RDPoint lossy_optimize(const MessagePartition& source, const std::vector<Sentence>& reconstructions,
                       const LossyConfig& cfg, const CellMeasure& mu);

/// gain(i, j) = transcont(members[i], reconstructions[j]).
Eigen::MatrixXd transcont_matrix(const MessagePartition& source, const std::vector<Sentence>& reconstructions,
                                 const CellMeasure& mu);

/// Indices of non-dominated points, ordered by rate.
std::vector<std::size_t> pareto_frontier(const std::vector<RDPoint>& points);

struct RDSweep {
  std::vector<RDPoint> points;     // one per beta, in grid order
  std::vector<std::size_t> frontier;
  double source_cont_entropy = 0.0;  // normalized
  double relative(std::size_t i) const {
    return source_cont_entropy > 0.0 ? points[i].cont_info / source_cont_entropy : 0.0;
  }
};

/// One BA solve per beta, run concurrently.
RDSweep rd_sweep(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, const LossyConfig& cfg);

/// Lossy problem for a story: constituents of a (coarse) sub-language as the
/// source, and sub-conjunctions of the source constituents as reconstructions.
/// A constituent asserts that each of its kinds exists and that no other kind
/// does; a sub-conjunction keeps some existence claims W' and optionally the
/// closure, i.e. the set of constituents V' with W' <= V' (<= V with closure).
struct StoryLossyProblem {
  CellMeasure measure;
  MessagePartition source;
  std::vector<Sentence> reconstructions;
  Eigen::MatrixXd gain;
};

/// Candidates come from greedy drop chains (each step drops the conjunct
/// that keeps transcont highest), most probable sources first, deduplicated
/// and capped at `budget`. Needs K <= 20.
StoryLossyProblem story_lossy_problem(const InductiveModel& model, std::size_t budget = 4096);

}  // namespace semcomm
