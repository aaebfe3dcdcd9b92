#pragma once

// Carnapian content measures and the volume-normalized content entropy.
//
// Probabilities live in a CellMeasure over a finite partition; sentences are
// sets of cells. Quantities that pick up the 2^(p*e) volume factor are carried
// as ExtremeReal and the factor is applied only when reporting.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "semcomm/cell_measure.hpp"
#include "semcomm/errors.hpp"
#include "semcomm/extreme_real.hpp"
#include "semcomm/inductive.hpp"
#include "semcomm/sublanguage.hpp"

namespace semcomm {

/// 1 - p.
double cont(double p);
/// 1 / p; +infinity at p = 0.
double inf_measure(double p);

/// Probability mass of the cells outside s.
double cont(const Sentence& s, const CellMeasure& mu);

/// sum_i p_i log2(1/p_i) in bits.
template <typename Derived>
typename Derived::Scalar inf_entropy(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  if (probs.size() == 0) throw DomainError("empty distribution");
  if ((probs.array() < Scalar(0)).any()) throw DomainError("negative probability");
  if (std::abs(probs.sum() - Scalar(1)) > Scalar(1e-9)) throw DomainError("probabilities must sum to 1");
  Scalar h(0);
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const Scalar p = probs.derived().coeff(i);
    if (p > Scalar(0)) h -= p * std::log2(p);
  }
  return h;
}

struct UniverseSignature {
  std::uint64_t n_pred = 0;
  std::uint64_t n_ent = 0;

  std::uint64_t volume_exponent() const { return n_pred * n_ent; }
  /// 2^(p*e).
  ExtremeReal volume() const { return ExtremeReal::exp2(static_cast<std::int64_t>(volume_exponent())); }
};

/// Disjoint messages with their degrees of confirmation.
class MessagePartition {
 public:
  /// Throws DomainError unless members are pairwise disjoint and probs sum to 1 within 1e-9.
  MessagePartition(std::vector<Sentence> members, Eigen::VectorXd probs);

  /// One member per cell of the measure.
  static MessagePartition from_measure(const CellMeasure& mu);
  /// Anonymous singleton members.
  static MessagePartition from_probs(Eigen::VectorXd probs);

  const std::vector<Sentence>& members() const { return members_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<Sentence> members_;
  Eigen::VectorXd probs_;
};

struct ContEntropy {
  /// sum_i p_i (1 - p_i).
  ExtremeReal normalized;
  /// normalized * 2^(p*e).
  ExtremeReal raw;
};

ContEntropy cont_entropy(const MessagePartition& partition, const UniverseSignature& sig);

/// Over the constituent partition of the model, using its width classes so K
/// may exceed the enumeration limit. 1 - p for the dominant class is summed
/// from the other masses, keeping tiny entropies at full relative precision.
ContEntropy cont_entropy(const InductiveModel& model, const UniverseSignature& sig);

/// Uniform measure over the 2^(p*e) state descriptions.
ContEntropy cont_entropy_state_descriptions(const UniverseSignature& sig);

struct ScaledEntropies {
  std::vector<ExtremeReal> min_scaled;
  std::vector<ExtremeReal> max_scaled;
};

ScaledEntropies scale_entropies(const std::vector<ExtremeReal>& normalized);

/// cont(s2 | s1) = p(s1) - p(s1 and s2), summed over the cells of s1 outside s2.
double cond_cont(const Sentence& s2, const Sentence& s1, const CellMeasure& mu);
/// 1 - p(s1 or s2), summed over the cells outside both.
double transcont(const Sentence& s2, const Sentence& s1, const CellMeasure& mu);

/// Joint distribution of a transmitted message s_i and a received r_j, with the
/// confirmation values the content measures need.
class JointMessageDistribution {
 public:
  /// Raw form: union_conf(i, j) = c(s_i or r_j), row_conf(i) = c(s_i), col_conf(j) = c(r_j).
  JointMessageDistribution(Eigen::MatrixXd joint, Eigen::MatrixXd union_conf, Eigen::VectorXd row_conf,
                           Eigen::VectorXd col_conf);
  /// Confirmation values read off a measure.
  JointMessageDistribution(std::vector<Sentence> rows, std::vector<Sentence> cols, Eigen::MatrixXd joint,
                           const CellMeasure& mu);

  const Eigen::MatrixXd& joint() const { return joint_; }
  const Eigen::MatrixXd& union_conf() const { return union_conf_; }
  const Eigen::VectorXd& row_conf() const { return row_conf_; }
  const Eigen::VectorXd& col_conf() const { return col_conf_; }

 private:
  void validate() const;
  Eigen::MatrixXd joint_;
  Eigen::MatrixXd union_conf_;
  Eigen::VectorXd row_conf_;
  Eigen::VectorXd col_conf_;
};

struct VolumeScaled {
  double normalized = 0.0;
  ExtremeReal raw;
};

/// sum_ij p(s_i, r_j) cont(s_i | r_j), scaled by 2^(p*e).
VolumeScaled cond_cont_entropy(const JointMessageDistribution& joint, const UniverseSignature& sig);
/// sum_ij p(s_i, r_j) transcont(s_i, r_j), scaled by 2^(p*e).
VolumeScaled mutual_cont_information(const JointMessageDistribution& joint, const UniverseSignature& sig);

bool is_l_exclusive(const Sentence& m1, const Sentence& m2);
bool is_inductively_independent(const Sentence& m1, const Sentence& m2, const CellMeasure& mu,
                                double tol = 1e-9);

}  // namespace semcomm
