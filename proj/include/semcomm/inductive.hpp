#pragma once

// Inductive probabilities over constituents.
//
// Everything is computed through log-gamma ratios and held in ExtremeReal, so
// posteriors stay meaningful for evidence sizes where factorials overflow.
// Because prior and likelihood depend on a constituent only through its width
// and whether it covers the exemplified kinds, the model keeps one posterior
// per width class instead of one per constituent.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "semcomm/cell_measure.hpp"
#include "semcomm/extreme_real.hpp"
#include "semcomm/sublanguage.hpp"

namespace semcomm {

class LambdaPolicy {
 public:
  enum class Kind { constant, proportional, unbounded };

  /// lambda(w) = value for every width.
  static LambdaPolicy constant(double value);
  /// lambda(w) = w.
  static LambdaPolicy proportional() { return LambdaPolicy(Kind::proportional, 0.0); }
  /// The lambda -> infinity limit: each kind of a width-w constituent is drawn
  /// with probability 1/w regardless of the sample.
  static LambdaPolicy unbounded() { return LambdaPolicy(Kind::unbounded, 0.0); }

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  double at(std::size_t width) const;
  bool is_unbounded() const { return kind_ == Kind::unbounded; }

  /// "w", "const:<v>" or "inf".
  std::string to_string() const;
  static LambdaPolicy parse(const std::string& text);

  bool operator==(const LambdaPolicy&) const = default;

 private:
  LambdaPolicy(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_ = Kind::proportional;
  double value_ = 0.0;
};

struct InductiveParams {
  LambdaPolicy lambda = LambdaPolicy::proportional();
  std::uint64_t alpha = 0;
  std::size_t big_k = 0;
  /// The prior's pseudo-sample uses lambda(K) (mixed notation, default); when
  /// set, lambda(w) is used there instead.
  bool single_lambda_prior = false;
};

/// (n_i + lambda/k) / (n + lambda). lambda = +inf gives 1/k.
double carnap_characteristic(std::uint64_t n_i, std::uint64_t n, double lambda, std::size_t k);

/// Normalized prior of one constituent of width w (same for every constituent
/// of that width).
ExtremeReal constituent_prior(std::size_t w, const InductiveParams& params);

/// p(e | C): zero unless C covers every exemplified kind.
ExtremeReal constituent_likelihood(const Constituent& c, const EvidenceSummary& summary,
                                   const InductiveParams& params);

/// Immutable posterior over the constituents of one sub-language.
class InductiveModel {
 public:
  /// Throws InconsistencyError when no constituent is compatible with the evidence.
  InductiveModel(EvidenceSummary summary, InductiveParams params, LanguageTag tag = {});

  const EvidenceSummary& summary() const { return summary_; }
  const InductiveParams& params() const { return params_; }
  const LanguageTag& tag() const { return tag_; }
  std::size_t big_k() const { return params_.big_k; }
  std::size_t min_width() const { return min_width_; }

  /// Posterior of a single compatible constituent of width w (zero for w
  /// below the number of exemplified kinds).
  const ExtremeReal& posterior_by_width(std::size_t w) const;
  /// Total posterior mass of all compatible constituents of width w.
  const ExtremeReal& class_mass(std::size_t w) const;
  /// Number of compatible constituents of width w.
  ExtremeReal class_size(std::size_t w) const;

  ExtremeReal posterior(const Constituent& c) const;
  double posterior_value(const Constituent& c) const { return posterior(c).to_double(); }

  /// p(C_c | e) for the minimal constituent and its complement 1 - p(C_c | e),
  /// the latter summed directly so it keeps full relative precision.
  const ExtremeReal& minimal_posterior() const { return class_mass_.at(min_width_); }
  ExtremeReal minimal_error() const;

  /// Enumerated posterior measure (K <= max_enum_k).
  CellMeasure measure(std::size_t max_enum_k = 20) const;

 private:
  EvidenceSummary summary_;
  InductiveParams params_;
  LanguageTag tag_;
  std::size_t min_width_ = 1;
  KindMask exemplified_ = 0;
  std::vector<ExtremeReal> posterior_;   // indexed by width
  std::vector<ExtremeReal> class_mass_;  // indexed by width
};

/// Sum of posteriors of h's constituents.
double degree_of_confirmation(const Sentence& h, const InductiveModel& model);

/// Closed form for the next individual being of exemplified kind j; requires
/// lambda(w) = w and alpha = 0 (throws UnsupportedConfigError otherwise).
double predictive_probability(std::size_t kind, const InductiveModel& model);

/// Posterior mixture sum_C p(C | e) * P(next is kind j | C); valid for every
/// parameter choice and for unexemplified kinds.
double predictive_mixture(std::size_t kind, const InductiveModel& model);

/// (n_i + 2) / (n + w).
double sublanguage_predictive(std::uint64_t n_i, std::uint64_t n, std::size_t w);

/// Worst-case error bound max_{0<=c<K} sum_i C(K-c, i) (c/(c+i))^(n-alpha).
double pac_error(std::size_t big_k, std::uint64_t n, std::uint64_t alpha);
/// Same sum at a fixed c.
double pac_error_given(std::size_t big_k, std::size_t c, std::uint64_t n, std::uint64_t alpha);
/// Least n > alpha whose worst-case bound is <= epsilon / (1 - epsilon).
std::uint64_t pac_sample_bound(std::size_t big_k, std::uint64_t alpha, double epsilon);
/// Same search against an odds target epsilon' directly.
std::uint64_t pac_sample_bound_odds(std::size_t big_k, std::uint64_t alpha, double epsilon_prime);

struct ConvergenceRow {
  std::uint64_t n = 0;
  std::size_t c = 0;
  double minimal_posterior = 0.0;
  ExtremeReal minimal_error;
  double below_c_mass = 0.0;  // mass on constituents narrower than c
  double pac_bound = 0.0;     // worst-case odds bound at this n (0 when n <= alpha)
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// Nondecreasing from the last change of c onwards.
  bool eventually_monotone = false;
  /// Final error <= bound / (1 + bound).
  bool final_within_pac = false;
  /// First n at which p(C_c | e) >= threshold with c already final; 0 if never.
  std::uint64_t crossing_n = 0;
};

/// Posterior of the minimal constituent along every prefix of a kind stream.
ConvergenceReport check_convergence(std::span<const std::size_t> kinds, std::size_t big_k,
                                    const InductiveParams& params, double threshold = 0.99);

/// Kind stream over kinds 0..c-1: each kind once in order, then uniform draws.
std::vector<std::size_t> synthetic_stream(std::size_t c, std::size_t n, std::uint64_t seed);

}  // namespace semcomm
