#include "semcomm/inductive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "semcomm/errors.hpp"

namespace semcomm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ln_binomial(std::size_t n, std::size_t k) {
  if (k > n) return -kInf;
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

// ln of the rising factorial x (x+1) ... (x+m-1) = Gamma(x+m)/Gamma(x).
double ln_rising(double m, double x) {
  if (m == 0) return 0.0;
  return std::lgamma(x + m) - std::lgamma(x);
}

// Unnormalized ln prior of one width-w constituent.
double ln_prior_weight(std::size_t w, const InductiveParams& p) {
  if (p.alpha == 0) return 0.0;
  const double a = double(p.alpha);
  const double k = double(p.big_k);
  if (p.lambda.is_unbounded()) return a * std::log(double(w) / k);
  const double lam = p.single_lambda_prior ? p.lambda.at(w) : p.lambda.at(p.big_k);
  return ln_rising(a, double(w) * lam / k) - ln_rising(a, lam);
}

// ln likelihood of a compatible width-w constituent.
double ln_likelihood(std::size_t w, const EvidenceSummary& s, const InductiveParams& p) {
  if (s.n == 0) return 0.0;
  if (p.lambda.is_unbounded()) return -double(s.n) * std::log(double(w));
  const double lam = p.lambda.at(w);
  double out = -ln_rising(double(s.n), lam);
  for (auto nj : s.counts)
    if (nj > 0) out += ln_rising(double(nj), lam / double(w));
  return out;
}

void check_params(const InductiveParams& p) {
  if (p.big_k == 0) throw DomainError("K must be at least 1");
}

}  // namespace

LambdaPolicy LambdaPolicy::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError("constant lambda must be a positive finite number");
  return LambdaPolicy(Kind::constant, value);
}

double LambdaPolicy::at(std::size_t width) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::proportional: return double(width);
    case Kind::unbounded: return kInf;
  }
  return 0.0;
}

std::string LambdaPolicy::to_string() const {
  switch (kind_) {
    case Kind::constant: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "const:%.17g", value_);
      return buf;
    }
    case Kind::proportional: return "w";
    case Kind::unbounded: return "inf";
  }
  return "";
}

LambdaPolicy LambdaPolicy::parse(const std::string& text) {
  if (text == "w") return proportional();
  if (text == "inf") return unbounded();
  std::string num = text.rfind("const:", 0) == 0 ? text.substr(6) : text;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(num, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != num.size())
    throw DomainError("lambda must be 'w', 'inf' or 'const:<value>', got '" + text + "'");
  return constant(v);
}

double carnap_characteristic(std::uint64_t n_i, std::uint64_t n, double lambda, std::size_t k) {
  if (k == 0) throw DomainError("k must be at least 1");
  if (n_i > n) throw DomainError("n_i exceeds n");
  if (lambda < 0.0 || std::isnan(lambda)) throw DomainError("lambda must be non-negative");
  if (std::isinf(lambda)) return 1.0 / double(k);
  if (lambda == 0.0 && n == 0) throw DomainError("lambda = 0 with no evidence leaves the prior undefined");
  return (double(n_i) + lambda / double(k)) / (double(n) + lambda);
}

ExtremeReal constituent_prior(std::size_t w, const InductiveParams& params) {
  check_params(params);
  if (w < 1 || w > params.big_k) throw DomainError("width out of range 1..K");
  ExtremeReal z;
  for (std::size_t v = 1; v <= params.big_k; ++v)
    z += ExtremeReal::from_log(ln_binomial(params.big_k, v) + ln_prior_weight(v, params));
  return ExtremeReal::from_log(ln_prior_weight(w, params)) / z;
}

ExtremeReal constituent_likelihood(const Constituent& c, const EvidenceSummary& summary,
                                   const InductiveParams& params) {
  check_params(params);
  const KindMask ex = summary.exemplified_mask();
  if ((c.kinds & ex) != ex) return ExtremeReal{};
  return ExtremeReal::from_log(ln_likelihood(std::size_t(c.width()), summary, params));
}

InductiveModel::InductiveModel(EvidenceSummary summary, InductiveParams params, LanguageTag tag)
    : summary_(std::move(summary)), params_(params), tag_(tag) {
  if (params_.big_k == 0) params_.big_k = summary_.counts.size();
  check_params(params_);
  if (summary_.counts.size() != params_.big_k)
    throw DomainError("evidence summary has " + std::to_string(summary_.counts.size()) +
                      " kinds but K = " + std::to_string(params_.big_k));
  if (summary_.c > params_.big_k) throw InconsistencyError("more exemplified kinds than K");
  if (params_.big_k <= 64) exemplified_ = summary_.exemplified_mask();

  const std::size_t k = params_.big_k;
  const std::size_t c = summary_.c;
  min_width_ = std::max<std::size_t>(c, 1);
  posterior_.assign(k + 1, ExtremeReal{});
  class_mass_.assign(k + 1, ExtremeReal{});

  std::vector<double> ln_weight(k + 1, -kInf);
  ExtremeReal total;
  for (std::size_t w = min_width_; w <= k; ++w) {
    ln_weight[w] = ln_prior_weight(w, params_) + ln_likelihood(w, summary_, params_);
    total += ExtremeReal::from_log(ln_binomial(k - c, w - c) + ln_weight[w]);
  }
  if (total.is_zero()) throw InconsistencyError("no constituent is compatible with the evidence");
  for (std::size_t w = min_width_; w <= k; ++w) {
    posterior_[w] = ExtremeReal::from_log(ln_weight[w]) / total;
    class_mass_[w] = posterior_[w] * class_size(w);
  }
}

const ExtremeReal& InductiveModel::posterior_by_width(std::size_t w) const {
  if (w < 1 || w > params_.big_k) throw DomainError("width out of range 1..K");
  return posterior_[w];
}

const ExtremeReal& InductiveModel::class_mass(std::size_t w) const {
  if (w < 1 || w > params_.big_k) throw DomainError("width out of range 1..K");
  return class_mass_[w];
}

ExtremeReal InductiveModel::class_size(std::size_t w) const {
  if (w < min_width_ || w > params_.big_k) return ExtremeReal{};
  return ExtremeReal::from_log(ln_binomial(params_.big_k - summary_.c, w - summary_.c));
}

ExtremeReal InductiveModel::posterior(const Constituent& c) const {
  if (!(tag_ == LanguageTag{}) && !(c.tag == tag_))
    throw DomainError("constituent belongs to a different sub-language");
  if (params_.big_k > 64) throw CapacityError("constituent-level queries need K <= 64");
  if (c.kinds == 0 || (params_.big_k < 64 && (c.kinds >> params_.big_k) != 0)) throw DomainError("constituent kind set out of range");
  if ((c.kinds & exemplified_) != exemplified_) return ExtremeReal{};
  return posterior_[std::size_t(c.width())];
}

ExtremeReal InductiveModel::minimal_error() const {
  ExtremeReal err;
  for (std::size_t w = min_width_ + 1; w <= params_.big_k; ++w) err += class_mass_[w];
  return err;
}

CellMeasure InductiveModel::measure(std::size_t max_enum_k) const {
  LanguageTag tag = tag_;
  if (tag == LanguageTag{}) tag.big_k = params_.big_k;
  const auto cs = enumerate_constituents(tag, max_enum_k);
  std::vector<std::uint64_t> ids;
  Eigen::VectorXd probs(static_cast<Eigen::Index>(cs.size()));
  ids.reserve(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    ids.push_back(cs[i].id());
    const bool ok = (cs[i].kinds & exemplified_) == exemplified_;
    probs[Eigen::Index(i)] = ok ? posterior_[std::size_t(cs[i].width())].to_double() : 0.0;
  }
  return CellMeasure(tag, std::move(ids), std::move(probs));
}

double degree_of_confirmation(const Sentence& h, const InductiveModel& model) {
  double total = 0.0;
  for (auto id : h.ids()) total += model.posterior(Constituent{id, h.tag()}).to_double();
  return std::min(total, 1.0);
}

double predictive_probability(std::size_t kind, const InductiveModel& model) {
  const auto& p = model.params();
  if (p.lambda.kind() != LambdaPolicy::Kind::proportional || p.alpha != 0)
    throw UnsupportedConfigError(
        "the closed-form predictive needs lambda(w) = w and alpha = 0; use predictive_mixture");
  const auto& s = model.summary();
  if (kind >= s.counts.size()) throw DomainError("kind index out of range");
  if (s.counts[kind] == 0)
    throw DomainError("the closed-form predictive covers exemplified kinds only; use predictive_mixture");
  const std::size_t k = p.big_k;
  const std::size_t c = s.c;
  const double n = double(s.n);
  ExtremeReal num, den;
  for (std::size_t i = 0; i <= k - c; ++i) {
    const double w = double(c + i);
    const double lb = ln_binomial(k - c, i);
    // (w-1)! / (n+w)!  and  (w-1)! / (n+w-1)!
    num += ExtremeReal::from_log(lb + std::lgamma(w) - std::lgamma(n + w + 1));
    den += ExtremeReal::from_log(lb + std::lgamma(w) - std::lgamma(n + w));
  }
  return (ExtremeReal(double(s.counts[kind]) + 1.0) * num / den).to_double();
}

double predictive_mixture(std::size_t kind, const InductiveModel& model) {
  const auto& p = model.params();
  const auto& s = model.summary();
  if (kind >= s.counts.size()) throw DomainError("kind index out of range");
  const std::size_t k = p.big_k;
  const std::size_t c = s.c;
  const bool exemplified = s.counts[kind] > 0;
  ExtremeReal total;
  for (std::size_t w = model.min_width(); w <= k; ++w) {
    const double q = carnap_characteristic(s.counts[kind], s.n, p.lambda.at(w), w);
    if (exemplified) {
      total += model.class_mass(w) * ExtremeReal(q);
    } else if (w > c) {
      // Compatible width-w constituents that also contain this kind.
      const ExtremeReal holders = ExtremeReal::from_log(ln_binomial(k - c - 1, w - c - 1));
      total += model.posterior_by_width(w) * holders * ExtremeReal(q);
    }
  }
  return total.to_double();
}

double sublanguage_predictive(std::uint64_t n_i, std::uint64_t n, std::size_t w) {
  if (w == 0) throw DomainError("w must be at least 1");
  return (double(n_i) + 2.0) / (double(n) + double(w));
}

double pac_error_given(std::size_t big_k, std::size_t c, std::uint64_t n, std::uint64_t alpha) {
  if (n <= alpha) throw DomainError("the bound needs n > alpha");
  if (c >= big_k || c == 0) return 0.0;
  const double e = double(n - alpha);
  double total = 0.0;
  for (std::size_t i = 1; i <= big_k - c; ++i)
    total += std::exp(ln_binomial(big_k - c, i) + e * std::log(double(c) / double(c + i)));
  return total;
}

double pac_error(std::size_t big_k, std::uint64_t n, std::uint64_t alpha) {
  if (big_k == 0) throw DomainError("K must be at least 1");
  if (n <= alpha) throw DomainError("the bound needs n > alpha");
  double worst = 0.0;
  for (std::size_t c = 0; c < big_k; ++c) worst = std::max(worst, pac_error_given(big_k, c, n, alpha));
  return worst;
}

std::uint64_t pac_sample_bound_odds(std::size_t big_k, std::uint64_t alpha, double epsilon_prime) {
  if (!(epsilon_prime > 0.0) || std::isinf(epsilon_prime))
    throw DomainError("epsilon' must be positive and finite");
  auto ok = [&](std::uint64_t n) { return pac_error(big_k, n, alpha) <= epsilon_prime; };
  std::uint64_t step = 1;
  std::uint64_t lo = alpha;  // fails (or is outside the domain)
  std::uint64_t hi = alpha + step;
  while (!ok(hi)) {
    if (step > (std::uint64_t{1} << 60)) throw CapacityError("sample bound exceeds 2^60");
    lo = hi;
    step *= 2;
    hi = alpha + step;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::uint64_t pac_sample_bound(std::size_t big_k, std::uint64_t alpha, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  return pac_sample_bound_odds(big_k, alpha, epsilon / (1.0 - epsilon));
}

ConvergenceReport check_convergence(std::span<const std::size_t> kinds, std::size_t big_k,
                                    const InductiveParams& params, double threshold) {
  InductiveParams p = params;
  p.big_k = big_k;
  check_params(p);
  ConvergenceReport report;
  std::vector<std::uint64_t> counts(big_k, 0);
  EvidenceSummary s;
  s.counts = counts;
  std::size_t last_change = 0;
  for (std::size_t t = 0; t < kinds.size(); ++t) {
    const std::size_t j = kinds[t];
    if (j >= big_k) throw DomainError("kind index out of range");
    if (s.counts[j]++ == 0) {
      ++s.c;
      last_change = t;
    }
    ++s.n;
    InductiveModel model(s, p);
    ConvergenceRow row;
    row.n = s.n;
    row.c = s.c;
    row.minimal_posterior = model.minimal_posterior().to_double();
    row.minimal_error = model.minimal_error();
    for (std::size_t w = 1; w < s.c; ++w) row.below_c_mass += model.class_mass(w).to_double();
    row.pac_bound = s.n > p.alpha ? pac_error(big_k, s.n, p.alpha) : 0.0;
    report.rows.push_back(std::move(row));
  }
  if (report.rows.empty()) return report;

  report.eventually_monotone = true;
  for (std::size_t t = last_change + 1; t < report.rows.size(); ++t) {
    const double prev = report.rows[t - 1].minimal_posterior;
    if (report.rows[t].minimal_posterior < prev - 1e-12 * prev) report.eventually_monotone = false;
  }
  for (std::size_t t = last_change; t < report.rows.size(); ++t) {
    if (report.rows[t].minimal_posterior >= threshold) {
      report.crossing_n = report.rows[t].n;
      break;
    }
  }
  const auto& last = report.rows.back();
  if (last.n > p.alpha) {
    const ExtremeReal bound(last.pac_bound);
    report.final_within_pac = last.minimal_error <= bound / (ExtremeReal(1.0) + bound);
  }
  return report;
}

std::vector<std::size_t> synthetic_stream(std::size_t c, std::size_t n, std::uint64_t seed) {
  if (c == 0) throw DomainError("synthetic stream needs c >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, c - 1);
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) out.push_back(t < c ? t : pick(rng));
  return out;
}

}  // namespace semcomm
