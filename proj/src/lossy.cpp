#include "semcomm/lossy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "semcomm/errors.hpp"

namespace semcomm {

namespace {

void check_problem(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain) {
  if (p.size() == 0 || gain.cols() == 0) throw DomainError("empty source or reconstruction alphabet");
  if (gain.rows() != p.size()) throw DomainError("gain matrix needs one row per source message");
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-9)
    throw DomainError("source probabilities must be a distribution");
  if (!gain.allFinite()) throw DomainError("gain matrix must be finite");
}

Eigen::Index argmax_gain_column(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain) {
  Eigen::Index best = 0;
  (gain.transpose() * p).maxCoeff(&best);
  return best;
}

}  // namespace

double mutual_information_bits(const Eigen::VectorXd& p, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd marginal = q.transpose() * p;
  double total = 0.0;
  for (Eigen::Index s = 0; s < q.rows(); ++s) {
    if (p[s] <= 0.0) continue;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const double v = q(s, j);
      if (v > 0.0 && marginal[j] > 0.0) total += p[s] * v * std::log2(v / marginal[j]);
    }
  }
  return std::max(total, 0.0);
}

double expected_gain(const Eigen::VectorXd& p, const Eigen::MatrixXd& q, const Eigen::MatrixXd& gain) {
  return p.dot((q.array() * gain.array()).rowwise().sum().matrix());
}

double max_cont_info(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain) {
  return p.dot(gain.rowwise().maxCoeff());
}

BAResult ba_solve(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, double beta, int max_iters, double tol) {
  check_problem(p, gain);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and non-negative");
  if (max_iters < 1 || !(tol > 0.0)) throw DomainError("need max_iters >= 1 and tol > 0");
  const Eigen::Index m = p.size();
  const Eigen::Index r = gain.cols();

  BAResult res;
  res.marginal = Eigen::VectorXd::Constant(r, 1.0 / double(r));
  res.conditional.resize(m, r);
  Eigen::VectorXd logits(r);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    for (Eigen::Index s = 0; s < m; ++s) {
      for (Eigen::Index j = 0; j < r; ++j)
        logits[j] = res.marginal[j] > 0.0 ? std::log2(res.marginal[j]) + beta * gain(s, j)
                                          : -std::numeric_limits<double>::infinity();
      const double top = logits.maxCoeff();
      for (Eigen::Index j = 0; j < r; ++j) res.conditional(s, j) = std::exp2(logits[j] - top);
      res.conditional.row(s) /= res.conditional.row(s).sum();
    }
    res.marginal = res.conditional.transpose() * p;
    res.rate_bits = mutual_information_bits(p, res.conditional);
    res.cont_info = expected_gain(p, res.conditional, gain);
    res.lagrangian = res.rate_bits - beta * res.cont_info;
    res.trace.push_back(res.lagrangian);
    res.iterations = it + 1;
    if (std::isfinite(prev)) {
      if (res.lagrangian > prev + 1e-12 * (1.0 + std::abs(prev))) res.monotone = false;
      if (std::abs(prev - res.lagrangian) < tol) break;
    }
    prev = res.lagrangian;
  }
  return res;
}

RDPoint lossy_optimize(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, const LossyConfig& cfg) {
  check_problem(p, gain);
  if (!(cfg.d_star >= 0.0)) throw DomainError("d* must be non-negative");
  const double max_info = max_cont_info(p, gain);
  if (cfg.d_star > max_info * (1.0 + 1e-12) + 1e-300)
    throw InfeasibleError("d* exceeds the maximum achievable content information", max_info);

  const Eigen::Index m = p.size();
  const Eigen::Index r = gain.cols();
  const Eigen::Index best_const = argmax_gain_column(p, gain);
  const double const_info = (gain.transpose() * p)[best_const];
  if (const_info >= cfg.d_star) {
    RDPoint pt;
    pt.conditional = Eigen::MatrixXd::Zero(m, r);
    pt.conditional.col(best_const).setOnes();
    pt.cont_info = const_info;
    return pt;
  }

  bool found = false;
  RDPoint best;
  for (double beta : cfg.beta_grid) {
    BAResult res = ba_solve(p, gain, beta, cfg.max_iters, cfg.tol);
    if (res.cont_info < cfg.d_star) continue;
    if (!found || res.rate_bits < best.rate_bits) {
      best = RDPoint{res.rate_bits, res.cont_info, beta, std::move(res.conditional), res.lagrangian};
      found = true;
    }
  }
  if (found) return best;

  RDPoint det;
  det.conditional = Eigen::MatrixXd::Zero(m, r);
  for (Eigen::Index s = 0; s < m; ++s) {
    Eigen::Index j = 0;
    gain.row(s).maxCoeff(&j);
    det.conditional(s, j) = 1.0;
  }
  det.rate_bits = mutual_information_bits(p, det.conditional);
  det.cont_info = expected_gain(p, det.conditional, gain);
  det.beta = std::numeric_limits<double>::infinity();
  det.lagrangian = det.rate_bits;
  return det;
}

Eigen::MatrixXd transcont_matrix(const MessagePartition& source, const std::vector<Sentence>& reconstructions,
                                 const CellMeasure& mu) {
  Eigen::MatrixXd gain(Eigen::Index(source.size()), Eigen::Index(reconstructions.size()));
  for (std::size_t i = 0; i < source.size(); ++i)
    for (std::size_t j = 0; j < reconstructions.size(); ++j)
      gain(Eigen::Index(i), Eigen::Index(j)) = transcont(source.members()[i], reconstructions[j], mu);
  return gain;
}

RDPoint lossy_optimize(const MessagePartition& source, const std::vector<Sentence>& reconstructions,
                       const LossyConfig& cfg, const CellMeasure& mu) {
  return lossy_optimize(source.probs(), transcont_matrix(source, reconstructions, mu), cfg);
}

std::vector<std::size_t> pareto_frontier(const std::vector<RDPoint>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (points[a].rate_bits != points[b].rate_bits) return points[a].rate_bits < points[b].rate_bits;
    return points[a].cont_info > points[b].cont_info;
  });
  std::vector<std::size_t> out;
  double best_info = -std::numeric_limits<double>::infinity();
  for (auto i : order) {
    if (points[i].cont_info > best_info) {
      out.push_back(i);
      best_info = points[i].cont_info;
    }
  }
  return out;
}

RDSweep rd_sweep(const Eigen::VectorXd& p, const Eigen::MatrixXd& gain, const LossyConfig& cfg) {
  check_problem(p, gain);
  if (cfg.beta_grid.empty()) throw DomainError("beta grid is empty");
  if (!std::is_sorted(cfg.beta_grid.begin(), cfg.beta_grid.end())) throw DomainError("beta grid must be ascending");
  RDSweep sweep;
  sweep.points.resize(cfg.beta_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.beta_grid.size(); i = next++) {
      BAResult res = ba_solve(p, gain, cfg.beta_grid[i], cfg.max_iters, cfg.tol);
      sweep.points[i] = RDPoint{res.rate_bits, res.cont_info, cfg.beta_grid[i], std::move(res.conditional),
                                res.lagrangian};
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(cfg.beta_grid.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  sweep.frontier = pareto_frontier(sweep.points);
  sweep.source_cont_entropy = (p.array() * (1.0 - p.array())).sum();
  return sweep;
}

namespace {

// Constituents V' with must <= V' and, when closed, V' <= upper.
std::vector<std::uint64_t> interval_ids(KindMask must, KindMask upper, bool closed, std::size_t big_k) {
  const KindMask full = (KindMask{1} << big_k) - 1;
  const KindMask free = (closed ? upper : full) & ~must;
  std::vector<std::uint64_t> ids;
  for (KindMask sub = free;; sub = (sub - 1) & free) {
    const KindMask v = must | sub;
    if (v != 0) ids.push_back(v);
    if (sub == 0) break;
  }
  return ids;
}

}  // namespace

StoryLossyProblem story_lossy_problem(const InductiveModel& model, std::size_t budget) {
  if (budget == 0) throw DomainError("candidate budget must be positive");
  const std::size_t k = model.big_k();
  CellMeasure mu = model.measure(20);
  const LanguageTag tag = mu.tag();

  std::vector<Sentence> members;
  std::vector<double> probs;
  for (std::size_t i = 0; i < mu.ids().size(); ++i) {
    const double pr = mu.probs()[Eigen::Index(i)];
    if (pr <= 0.0) continue;
    members.emplace_back(tag, std::vector<std::uint64_t>{mu.ids()[i]});
    probs.push_back(pr);
  }
  Eigen::VectorXd pv = Eigen::Map<Eigen::VectorXd>(probs.data(), Eigen::Index(probs.size()));
  pv /= pv.sum();
  MessagePartition source(members, pv);

  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return probs[a] > probs[b]; });

  std::vector<Sentence> recon;
  std::set<std::vector<std::uint64_t>> seen;
  auto add = [&](Sentence s) {
    if (recon.size() < budget && seen.insert(s.ids()).second) recon.push_back(std::move(s));
  };
  for (auto idx : order) {
    if (recon.size() >= budget) break;
    const Sentence& s = members[idx];
    const KindMask v = s.ids().front();
    KindMask must = v;
    bool closed = true;
    add(s);
    while (must != 0 || closed) {
      // Try every single drop; keep the one with the highest transcont.
      double best_gain = -1.0;
      KindMask best_must = must;
      bool best_closed = closed;
      for (std::size_t j = 0; j < k; ++j) {
        if (!(must >> j & 1)) continue;
        const KindMask cand = must & ~(KindMask{1} << j);
        const double g = transcont(s, Sentence(tag, interval_ids(cand, v, closed, k)), mu);
        if (g > best_gain) {
          best_gain = g;
          best_must = cand;
          best_closed = closed;
        }
      }
      if (closed) {
        const double g = transcont(s, Sentence(tag, interval_ids(must, v, false, k)), mu);
        if (g > best_gain) {
          best_gain = g;
          best_must = must;
          best_closed = false;
        }
      }
      must = best_must;
      closed = best_closed;
      add(Sentence(tag, interval_ids(must, v, closed, k)));
    }
  }

  Eigen::MatrixXd gain = transcont_matrix(source, recon, mu);
  return StoryLossyProblem{std::move(mu), std::move(source), std::move(recon), std::move(gain)};
}

}  // namespace semcomm
