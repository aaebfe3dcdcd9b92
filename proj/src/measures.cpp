#include "semcomm/measures.hpp"

#include <algorithm>
#include <numeric>

namespace semcomm {

CellMeasure::CellMeasure(LanguageTag tag, std::vector<std::uint64_t> ids, Eigen::VectorXd probs)
    : tag_(tag) {
  if (Eigen::Index(ids.size()) != probs.size()) throw DomainError("one probability per cell required");
  if ((probs.array() < 0.0).any()) throw DomainError("negative cell probability");
  if (ids.empty() || std::abs(probs.sum() - 1.0) > 1e-9) throw DomainError("cell probabilities must sum to 1");
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
  ids_.reserve(ids.size());
  probs_.resize(probs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && ids[order[i]] == ids_.back()) throw DomainError("duplicate cell id");
    ids_.push_back(ids[order[i]]);
    probs_[Eigen::Index(i)] = probs[Eigen::Index(order[i])];
  }
}

CellMeasure CellMeasure::uniform(LanguageTag tag, std::vector<std::uint64_t> ids) {
  const auto m = Eigen::Index(ids.size());
  if (m == 0) throw DomainError("empty partition");
  return CellMeasure(tag, std::move(ids), Eigen::VectorXd::Constant(m, 1.0 / double(m)));
}

double CellMeasure::probability(std::uint64_t id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return 0.0;
  return probs_[it - ids_.begin()];
}

double CellMeasure::probability(const Sentence& s) const {
  if (!(s.tag() == tag_)) throw DomainError("sentence belongs to a different partition");
  double total = 0.0;
  auto it = ids_.begin();
  for (auto id : s.ids()) {
    it = std::lower_bound(it, ids_.end(), id);
    if (it == ids_.end()) break;
    if (*it == id) total += probs_[it - ids_.begin()];
  }
  return total;
}

double cont(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  return 1.0 - p;
}

double inf_measure(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / p;
}

double cont(const Sentence& s, const CellMeasure& mu) {
  if (!(s.tag() == mu.tag())) throw DomainError("sentence belongs to a different partition");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.ids().size(); ++i)
    if (!s.contains(mu.ids()[i])) total += mu.probs()[Eigen::Index(i)];
  return total;
}

MessagePartition::MessagePartition(std::vector<Sentence> members, Eigen::VectorXd probs)
    : members_(std::move(members)), probs_(std::move(probs)) {
  if (Eigen::Index(members_.size()) != probs_.size()) throw DomainError("one probability per member required");
  if (members_.empty()) throw DomainError("empty partition");
  if ((probs_.array() < 0.0).any()) throw DomainError("negative member probability");
  if (std::abs(probs_.sum() - 1.0) > 1e-9) throw DomainError("member probabilities must sum to 1");
  std::vector<std::uint64_t> seen;
  for (const auto& m : members_) {
    if (!(m.tag() == members_.front().tag())) throw DomainError("members from different partitions");
    seen.insert(seen.end(), m.ids().begin(), m.ids().end());
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw DomainError("partition members overlap");
}

MessagePartition MessagePartition::from_measure(const CellMeasure& mu) {
  std::vector<Sentence> members;
  members.reserve(mu.ids().size());
  for (auto id : mu.ids()) members.emplace_back(mu.tag(), std::vector<std::uint64_t>{id});
  return MessagePartition(std::move(members), mu.probs());
}

MessagePartition MessagePartition::from_probs(Eigen::VectorXd probs) {
  std::vector<Sentence> members;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    members.emplace_back(LanguageTag{}, std::vector<std::uint64_t>{std::uint64_t(i)});
  return MessagePartition(std::move(members), std::move(probs));
}

ContEntropy cont_entropy(const MessagePartition& partition, const UniverseSignature& sig) {
  const auto& p = partition.probs();
  ContEntropy out;
  out.normalized = ExtremeReal((p.array() * (1.0 - p.array())).sum());
  out.raw = out.normalized * sig.volume();
  return out;
}

ContEntropy cont_entropy(const InductiveModel& model, const UniverseSignature& sig) {
  const std::size_t k = model.big_k();
  ExtremeReal total_mass;
  for (std::size_t w = model.min_width(); w <= k; ++w) total_mass += model.class_mass(w);
  ContEntropy out;
  for (std::size_t w = model.min_width(); w <= k; ++w) {
    const ExtremeReal& pw = model.posterior_by_width(w);
    if (pw.is_zero()) continue;
    const ExtremeReal size = model.class_size(w);
    ExtremeReal rest = (size - ExtremeReal(1.0)) * pw;
    for (std::size_t v = model.min_width(); v <= k; ++v)
      if (v != w) rest += model.class_mass(v);
    out.normalized += size * pw * rest;
  }
  out.raw = out.normalized * sig.volume();
  return out;
}

ContEntropy cont_entropy_state_descriptions(const UniverseSignature& sig) {
  // M = 2^(pe) equiprobable cells: sum p(1-p) = 1 - 1/M.
  const auto pe = static_cast<std::int64_t>(sig.volume_exponent());
  ContEntropy out;
  if (pe <= 60) {
    out.normalized = ExtremeReal(1.0 - std::ldexp(1.0, -int(pe)));
  } else {
    out.normalized = ExtremeReal(1.0);  // 2^-pe is below double resolution next to 1
  }
  out.raw = sig.volume() - ExtremeReal(1.0);
  return out;
}

ScaledEntropies scale_entropies(const std::vector<ExtremeReal>& normalized) {
  if (normalized.empty()) throw DomainError("no entropies to scale");
  for (const auto& v : normalized)
    if (v.sign() <= 0) throw DomainError("scaled entropies must be positive");
  const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  ScaledEntropies out;
  for (const auto& v : normalized) {
    out.min_scaled.push_back(v / *lo);
    out.max_scaled.push_back(v / *hi);
  }
  return out;
}

double cond_cont(const Sentence& s2, const Sentence& s1, const CellMeasure& mu) {
  if (!(s1.tag() == mu.tag()) || !(s2.tag() == mu.tag()))
    throw DomainError("sentence belongs to a different partition");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.ids().size(); ++i) {
    const auto id = mu.ids()[i];
    if (s1.contains(id) && !s2.contains(id)) total += mu.probs()[Eigen::Index(i)];
  }
  return total;
}

double transcont(const Sentence& s2, const Sentence& s1, const CellMeasure& mu) {
  if (!(s1.tag() == mu.tag()) || !(s2.tag() == mu.tag()))
    throw DomainError("sentence belongs to a different partition");
  double total = 0.0;
  for (std::size_t i = 0; i < mu.ids().size(); ++i) {
    const auto id = mu.ids()[i];
    if (!s1.contains(id) && !s2.contains(id)) total += mu.probs()[Eigen::Index(i)];
  }
  return total;
}

JointMessageDistribution::JointMessageDistribution(Eigen::MatrixXd joint, Eigen::MatrixXd union_conf,
                                                   Eigen::VectorXd row_conf, Eigen::VectorXd col_conf)
    : joint_(std::move(joint)),
      union_conf_(std::move(union_conf)),
      row_conf_(std::move(row_conf)),
      col_conf_(std::move(col_conf)) {
  validate();
}

JointMessageDistribution::JointMessageDistribution(std::vector<Sentence> rows, std::vector<Sentence> cols,
                                                   Eigen::MatrixXd joint, const CellMeasure& mu)
    : joint_(std::move(joint)) {
  const auto r = Eigen::Index(rows.size());
  const auto c = Eigen::Index(cols.size());
  if (joint_.rows() != r || joint_.cols() != c) throw DomainError("joint shape does not match the messages");
  row_conf_.resize(r);
  col_conf_.resize(c);
  union_conf_.resize(r, c);
  for (Eigen::Index i = 0; i < r; ++i) row_conf_[i] = mu.probability(rows[std::size_t(i)]);
  for (Eigen::Index j = 0; j < c; ++j) col_conf_[j] = mu.probability(cols[std::size_t(j)]);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      union_conf_(i, j) = 1.0 - transcont(rows[std::size_t(i)], cols[std::size_t(j)], mu);
  validate();
}

void JointMessageDistribution::validate() const {
  if (joint_.size() == 0) throw DomainError("empty joint distribution");
  if (union_conf_.rows() != joint_.rows() || union_conf_.cols() != joint_.cols() ||
      row_conf_.size() != joint_.rows() || col_conf_.size() != joint_.cols())
    throw DomainError("joint, union and marginal confirmation shapes disagree");
  if ((joint_.array() < 0.0).any()) throw DomainError("negative joint probability");
  if (std::abs(joint_.sum() - 1.0) > 1e-9) throw DomainError("joint probabilities must sum to 1");
  constexpr double slack = 1e-12;
  for (Eigen::Index i = 0; i < joint_.rows(); ++i)
    for (Eigen::Index j = 0; j < joint_.cols(); ++j) {
      const double u = union_conf_(i, j);
      if (u < -slack || u > 1.0 + slack || u + slack < std::max(row_conf_[i], col_conf_[j]))
        throw DomainError("c(s or r) must lie in [max(c(s), c(r)), 1]");
    }
}

VolumeScaled cond_cont_entropy(const JointMessageDistribution& jd, const UniverseSignature& sig) {
  // cont(s_i | r_j) = c(s_i or r_j) - c(s_i)
  const Eigen::MatrixXd cc =
      (jd.union_conf().colwise() - jd.row_conf()).cwiseMax(0.0);
  VolumeScaled out;
  out.normalized = (jd.joint().array() * cc.array()).sum();
  out.raw = ExtremeReal(out.normalized) * sig.volume();
  return out;
}

VolumeScaled mutual_cont_information(const JointMessageDistribution& jd, const UniverseSignature& sig) {
  VolumeScaled out;
  out.normalized = (jd.joint().array() * (1.0 - jd.union_conf().array())).sum();
  out.raw = ExtremeReal(out.normalized) * sig.volume();
  return out;
}

bool is_l_exclusive(const Sentence& m1, const Sentence& m2) {
  if (!(m1.tag() == m2.tag())) throw DomainError("sentences from different partitions");
  return conjunction(m1, m2).empty();
}

bool is_inductively_independent(const Sentence& m1, const Sentence& m2, const CellMeasure& mu, double tol) {
  const double joint = mu.probability(conjunction(m1, m2));
  return std::abs(joint - mu.probability(m1) * mu.probability(m2)) <= tol;
}

}  // namespace semcomm
