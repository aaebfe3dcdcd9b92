#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "semcomm/sublanguage.hpp"

namespace semcomm {

/// A probability measure over the cells of one finite partition. Sentence
/// probabilities are sums over their cells.
class CellMeasure {
 public:
  CellMeasure() = default;
  /// `ids` need not be sorted; probabilities must be >= 0 and sum to 1 within 1e-9.
  CellMeasure(LanguageTag tag, std::vector<std::uint64_t> ids, Eigen::VectorXd probs);

  static CellMeasure uniform(LanguageTag tag, std::vector<std::uint64_t> ids);

  const LanguageTag& tag() const { return tag_; }
  const std::vector<std::uint64_t>& ids() const { return ids_; }
  const Eigen::VectorXd& probs() const { return probs_; }

  double probability(std::uint64_t id) const;
  double probability(const Sentence& s) const;
  Sentence tautology() const { return Sentence(tag_, ids_); }

 private:
  LanguageTag tag_;
  std::vector<std::uint64_t> ids_;  // sorted
  Eigen::VectorXd probs_;
};

}  // namespace semcomm
