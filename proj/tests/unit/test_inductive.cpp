#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "semcomm/errors.hpp"
#include "semcomm/inductive.hpp"
#include "support/oracles.hpp"

using namespace semcomm;

namespace {

InductiveParams params(std::size_t k, LambdaPolicy lam = LambdaPolicy::proportional(), std::uint64_t alpha = 0) {
  InductiveParams p;
  p.lambda = lam;
  p.alpha = alpha;
  p.big_k = k;
  return p;
}

EvidenceSummary summary_of(const std::vector<std::size_t>& kinds, std::size_t k) {
  std::vector<std::uint64_t> counts(k, 0);
  for (auto j : kinds) ++counts[j];
  return EvidenceSummary::from_counts(counts);
}

}  // namespace

TEST_CASE("carnap characteristic examples") {
  CHECK(carnap_characteristic(0, 0, 2.0, 4) == doctest::Approx(0.25));
  CHECK(carnap_characteristic(7, 10, 0.0, 4) == doctest::Approx(0.7));
  CHECK(carnap_characteristic(3, 10, 4.0, 4) == doctest::Approx(4.0 / 14.0));
  CHECK(carnap_characteristic(3, 10, INFINITY, 4) == doctest::Approx(0.25));
  CHECK_THROWS_AS(carnap_characteristic(0, 0, 0.0, 4), DomainError);
}

TEST_CASE("lambda policy parsing") {
  CHECK(LambdaPolicy::parse("w") == LambdaPolicy::proportional());
  CHECK(LambdaPolicy::parse("inf").is_unbounded());
  CHECK(LambdaPolicy::parse("const:2.5").at(7) == 2.5);
  CHECK(LambdaPolicy::parse("3").at(1) == 3.0);
  CHECK_THROWS_AS(LambdaPolicy::parse("const:0"), DomainError);
  CHECK_THROWS_AS(LambdaPolicy::parse("bogus"), DomainError);
  CHECK(LambdaPolicy::parse(LambdaPolicy::constant(0.1).to_string()) == LambdaPolicy::constant(0.1));
}

TEST_CASE("prior is uniform when alpha is zero") {
  for (std::size_t k = 1; k <= 8; ++k) {
    auto p = params(k);
    for (std::size_t w = 1; w <= k; ++w)
      CHECK(constituent_prior(w, p).to_double() == doctest::Approx(1.0 / double((1u << k) - 1)).epsilon(1e-12));
  }
  CHECK(constituent_prior(1, params(1)).to_double() == doctest::Approx(1.0));
}

TEST_CASE("prior K=2 alpha=1 lambda=2 matches the product form") {
  auto p = params(2, LambdaPolicy::constant(2.0), 1);
  // One pseudo-individual: weight (w lam/K)/lam, i.e. 1/2 and 1; normalized over 1/2 + 1/2 + 1.
  const double w1 = oracle::prior_product(1, 2, 2.0, 1);
  const double w2 = oracle::prior_product(2, 2, 2.0, 1);
  const double z = 2 * w1 + w2;
  CHECK(constituent_prior(1, p).to_double() == doctest::Approx(w1 / z).epsilon(1e-12));
  CHECK(constituent_prior(2, p).to_double() == doctest::Approx(w2 / z).epsilon(1e-12));
  CHECK(constituent_prior(1, p).to_double() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(constituent_prior(2, p).to_double() == doctest::Approx(0.5).epsilon(1e-12));
  // Proportional lambda gives lambda(K) = 2 here as well.
  CHECK(constituent_prior(2, params(2, LambdaPolicy::proportional(), 1)).to_double() ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("prior sums to one over all constituents") {
  for (std::uint64_t alpha : {0u, 1u, 3u, 10u}) {
    for (std::size_t k = 1; k <= 12; ++k) {
      auto p = params(k, LambdaPolicy::proportional(), alpha);
      double total = 0.0;
      for (std::size_t w = 1; w <= k; ++w) total += std::tgamma(double(k) + 1) / std::tgamma(double(w) + 1) /
                                                     std::tgamma(double(k - w) + 1) * constituent_prior(w, p).to_double();
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("single lambda prior differs from the mixed form") {
  auto mixed = params(4, LambdaPolicy::proportional(), 3);
  auto single = mixed;
  single.single_lambda_prior = true;
  CHECK(constituent_prior(1, mixed).to_double() != doctest::Approx(constituent_prior(1, single).to_double()));
  // Single lambda(w) = w: weight prod_t (w^2/K + t)/(w + t).
  const std::size_t k = 4;
  std::vector<double> wts(k + 1);
  double z = 0.0;
  for (std::size_t w = 1; w <= k; ++w) {
    double v = 1.0;
    for (int t = 0; t < 3; ++t) v *= (double(w * w) / double(k) + t) / (double(w) + t);
    wts[w] = v;
    z += std::tgamma(double(k) + 1) / std::tgamma(double(w) + 1) / std::tgamma(double(k - w) + 1) * v;
  }
  for (std::size_t w = 1; w <= k; ++w)
    CHECK(constituent_prior(w, single).to_double() == doctest::Approx(wts[w] / z).epsilon(1e-12));
}

TEST_CASE("likelihood with no evidence is one") {
  auto p = params(3);
  EvidenceSummary s = EvidenceSummary::from_counts({0, 0, 0});
  for (const auto& c : enumerate_constituents(LanguageTag{0, 3}))
    CHECK(constituent_likelihood(c, s, p).to_double() == doctest::Approx(1.0));
}

TEST_CASE("likelihood is zero for incompatible constituents") {
  auto p = params(3);
  EvidenceSummary s = EvidenceSummary::from_counts({2, 1, 0});
  CHECK(constituent_likelihood(Constituent{0b001, {}}, s, p).is_zero());
  CHECK(constituent_likelihood(Constituent{0b101, {}}, s, p).is_zero());
  CHECK_FALSE(constituent_likelihood(Constituent{0b011, {}}, s, p).is_zero());
}

TEST_CASE("likelihood equals the sequential product in every order") {
  auto p = params(3);
  std::vector<std::size_t> kinds{0, 0, 1};
  EvidenceSummary s = summary_of(kinds, 3);
  const double gamma_form = constituent_likelihood(Constituent{0b011, {}}, s, p).to_double();
  std::sort(kinds.begin(), kinds.end());
  do {
    const double seq = oracle::sequential_likelihood(kinds, 0b011, 2.0);
    CHECK(gamma_form == doctest::Approx(seq).epsilon(1e-10));
  } while (std::next_permutation(kinds.begin(), kinds.end()));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> ks;
    std::uniform_int_distribution<std::size_t> len(1, 40), kind(0, 3);
    for (std::size_t t = 0, n = len(rng); t < n; ++t) ks.push_back(kind(rng));
    auto sum = summary_of(ks, 5);
    for (std::uint64_t mask : {0b01111ull, 0b11111ull}) {
      for (auto lam : {LambdaPolicy::proportional(), LambdaPolicy::constant(0.7)}) {
        auto pp = params(5, lam);
        const double g = constituent_likelihood(Constituent{mask, {}}, sum, pp).to_double();
        std::shuffle(ks.begin(), ks.end(), rng);
        const double seq = oracle::sequential_likelihood(ks, mask, lam.at(std::size_t(oracle::popcount(mask))));
        CHECK(g == doctest::Approx(seq).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("posterior with one compatible constituent is one") {
  InductiveModel m(EvidenceSummary::from_counts({1, 2, 3}), params(3));
  CHECK(m.posterior(Constituent{0b111, {}}).to_double() == doctest::Approx(1.0));
  CHECK(m.minimal_error().is_zero());
}

TEST_CASE("posterior matches direct Bayes for K=3, c=2, n=5") {
  std::vector<std::size_t> kinds{0, 1, 0, 0, 1};
  auto bf = oracle::brute_force_posterior(kinds, 3, LambdaPolicy::proportional(), 0);
  InductiveModel m(summary_of(kinds, 3), params(3));
  double total = 0.0;
  for (std::uint64_t mask = 1; mask < 8; ++mask) {
    const double v = m.posterior(Constituent{mask, {}}).to_double();
    total += v;
    if (bf[mask] == 0.0)
      CHECK(v == 0.0);
    else
      CHECK(v == doctest::Approx(bf[mask]).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("posterior matches direct Bayes with alpha and constant lambda") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> kdist(1, 6), ndist(0, 30);
    const std::size_t k = kdist(rng);
    std::uniform_int_distribution<std::size_t> kind(0, k - 1);
    std::vector<std::size_t> ks;
    for (std::size_t t = 0, n = ndist(rng); t < n; ++t) ks.push_back(kind(rng));
    const std::uint64_t alpha = trial % 4;
    const auto lam = trial % 2 ? LambdaPolicy::constant(1.5) : LambdaPolicy::proportional();
    auto bf = oracle::brute_force_posterior(ks, k, lam, alpha);
    InductiveModel m(summary_of(ks, k), params(k, lam, alpha));
    for (std::uint64_t mask = 1; mask < (1u << k); ++mask) {
      const double v = m.posterior(Constituent{mask, {}}).to_double();
      CHECK(v == doctest::Approx(bf[mask]).epsilon(1e-9));
    }
  }
}

TEST_CASE("posterior of the minimal constituent grows with n") {
  double prev = 0.0;
  for (std::uint64_t n : {10u, 100u, 1000u, 10000u}) {
    InductiveModel m(EvidenceSummary::from_counts({n / 2, n - n / 2, 0, 0}), params(4));
    const double p = m.minimal_posterior().to_double();
    CHECK(p > prev);
    prev = p;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("posterior normalization over width classes for large evidence") {
  for (std::size_t k = 2; k <= 12; ++k) {
    for (std::uint64_t n : {1u, 50u, 10000u}) {
      std::vector<std::uint64_t> counts(k, 0);
      counts[0] = n;
      InductiveModel m(EvidenceSummary::from_counts(counts), params(k));
      ExtremeReal total;
      for (std::size_t w = 1; w <= k; ++w) total += m.class_mass(w);
      CHECK(total.to_double() == doctest::Approx(1.0).epsilon(1e-9));
      auto measure = m.measure();
      CHECK(measure.probs().sum() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("degree of confirmation") {
  std::vector<std::size_t> kinds{0, 1, 1};
  InductiveModel m(summary_of(kinds, 3), params(3));
  auto cs = enumerate_constituents(LanguageTag{0, 3});
  CHECK(degree_of_confirmation(Sentence::of(cs), m) == doctest::Approx(1.0));
  CHECK(degree_of_confirmation(Sentence::contradiction(LanguageTag{0, 3}), m) == 0.0);
  auto bf = oracle::brute_force_posterior(kinds, 3, LambdaPolicy::proportional(), 0);
  Sentence h = disjunction(Sentence::of(Constituent{0b011, {0, 3}}), Sentence::of(Constituent{0b111, {0, 3}}));
  CHECK(degree_of_confirmation(h, m) == doctest::Approx(bf[3] + bf[7]).epsilon(1e-12));
}

TEST_CASE("confirmation of the minimal constituent tends to one") {
  Sentence h = Sentence::of(Constituent{0b011, {0, 3}});
  double prev = 0.0;
  for (std::uint64_t half : {5u, 50u, 500u, 5000u, 500000u}) {
    InductiveModel m(EvidenceSummary::from_counts({half, half, 0}), params(3));
    const double d = degree_of_confirmation(h, m);
    CHECK(d > prev);
    prev = d;
  }
  CHECK(prev > 1.0 - 1e-5);
}

TEST_CASE("closed-form predictive equals the posterior mixture") {
  InductiveModel k1(EvidenceSummary::from_counts({3}), params(1));
  CHECK(predictive_probability(0, k1) == doctest::Approx(1.0));

  InductiveModel m(EvidenceSummary::from_counts({4, 0}), params(2));
  const double closed = predictive_probability(0, m);
  double mix = 0.0;
  for (std::size_t w = 1; w <= 2; ++w)
    mix += m.class_mass(w).to_double() * carnap_characteristic(4, 4, double(w), w);
  CHECK(closed == doctest::Approx(mix).epsilon(1e-12));
  CHECK(predictive_mixture(0, m) == doctest::Approx(mix).epsilon(1e-12));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<std::size_t> kdist(1, 8), ndist(1, 60);
    const std::size_t k = kdist(rng);
    std::uniform_int_distribution<std::size_t> kind(0, k - 1);
    std::vector<std::size_t> ks;
    for (std::size_t t = 0, n = ndist(rng); t < n; ++t) ks.push_back(kind(rng));
    InductiveModel mm(summary_of(ks, k), params(k));
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double q = predictive_mixture(j, mm);
      total += q;
      if (mm.summary().counts[j] > 0) CHECK(predictive_probability(j, mm) == doctest::Approx(q).epsilon(1e-12));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("closed-form predictive rejects other configurations") {
  InductiveModel m(EvidenceSummary::from_counts({4, 0}), params(2, LambdaPolicy::constant(1.0)));
  CHECK_THROWS_AS(predictive_probability(0, m), UnsupportedConfigError);
  InductiveModel a(EvidenceSummary::from_counts({4, 0}), params(2, LambdaPolicy::proportional(), 2));
  CHECK_THROWS_AS(predictive_probability(0, a), UnsupportedConfigError);
  CHECK_NOTHROW(predictive_mixture(0, a));
}

TEST_CASE("sub-language predictive is verbatim") {
  CHECK(sublanguage_predictive(3, 10, 4) == doctest::Approx(5.0 / 14.0));
  CHECK(sublanguage_predictive(8, 8, 4) == doctest::Approx(10.0 / 12.0));
  CHECK(sublanguage_predictive(0, 0, 2) == doctest::Approx(1.0));
}

TEST_CASE("pac bound examples") {
  for (std::uint64_t n : {1u, 5u, 100u}) CHECK(pac_error(1, n, 0) == 0.0);
  CHECK(pac_error(2, 10, 0) == std::ldexp(1.0, -10));
  CHECK(pac_error(3, 20, 0) == doctest::Approx(oracle::pac_literal(3, 20, 0)).epsilon(1e-14));
  for (std::size_t k = 1; k <= 10; ++k)
    for (std::uint64_t n : {3u, 7u, 50u, 400u})
      for (std::uint64_t a : {0u, 2u})
        CHECK(pac_error(k, n, a) == doctest::Approx(oracle::pac_literal(k, n, a)).epsilon(1e-12));
  CHECK_THROWS_AS(pac_error(2, 3, 3), DomainError);
}

TEST_CASE("pac sample bound") {
  CHECK(pac_sample_bound_odds(2, 0, 1e-3) == 10);
  CHECK(pac_sample_bound_odds(2, 0, std::ldexp(1.0, -10)) == 10);
  CHECK(pac_sample_bound(1, 0, 0.5) == 1);
  CHECK(pac_sample_bound(1, 4, 0.5) == 5);
  CHECK_THROWS_AS(pac_sample_bound(2, 0, 0.0), DomainError);
  CHECK_THROWS_AS(pac_sample_bound(2, 0, 1.0), DomainError);
  for (std::size_t k = 2; k <= 8; ++k) {
    for (double eps : {0.1, 0.01, 1e-6}) {
      const std::uint64_t n0 = pac_sample_bound(k, 1, eps);
      const double target = eps / (1 - eps);
      CHECK(pac_error(k, n0, 1) <= target);
      if (n0 > 2) CHECK(pac_error(k, n0 - 1, 1) > target);
    }
  }
}

TEST_CASE("evidence-conditional bound never exceeds the worst case") {
  for (std::size_t k = 2; k <= 8; ++k)
    for (std::size_t c = 0; c < k; ++c) CHECK(pac_error_given(k, c, 30, 0) <= pac_error(k, 30, 0));
}

TEST_CASE("unbounded lambda error stays under the bound") {
  // lambda -> infinity: likelihood w^-n, prior (w/K)^alpha; error at most the bound.
  InductiveParams p = params(4, LambdaPolicy::unbounded(), 1);
  for (std::uint64_t n = 2; n <= 200; n += 7) {
    InductiveModel m(EvidenceSummary::from_counts({n - n / 3, n / 3, 0, 0}), p);
    const double err = m.minimal_error().to_double();
    const double b = pac_error(4, n, 1);
    CHECK(err <= b / (1.0 + b) + 1e-15);
  }
}

TEST_CASE("convergence on a c = K stream") {
  auto kinds = synthetic_stream(3, 50, 1);
  auto rep = check_convergence(kinds, 3, params(3));
  CHECK(rep.rows.back().minimal_posterior == doctest::Approx(1.0));
  CHECK(rep.eventually_monotone);
}

TEST_CASE("synthetic 2-kind stream with K=4 crosses 0.99") {
  auto kinds = synthetic_stream(2, 3000, 42);
  auto rep = check_convergence(kinds, 4, params(4));
  CHECK(rep.crossing_n > 0);
  CHECK(rep.eventually_monotone);
  for (const auto& row : rep.rows) CHECK(row.below_c_mass == 0.0);
  // The crossing point depends only on n once c is final: (K-c)=2 extra kinds.
  InductiveModel at(EvidenceSummary::from_counts({rep.crossing_n / 2, rep.crossing_n - rep.crossing_n / 2, 0, 0}),
                    params(4));
  CHECK(at.minimal_posterior().to_double() >= 0.99);
}

TEST_CASE("narrower constituents have zero posterior at every prefix") {
  auto kinds = synthetic_stream(4, 200, 9);
  std::vector<std::uint64_t> counts(6, 0);
  std::size_t c = 0;
  for (auto j : kinds) {
    c += counts[j]++ == 0;
    InductiveModel m(EvidenceSummary::from_counts(counts), params(6));
    for (std::size_t w = 1; w < c; ++w) CHECK(m.class_mass(w).is_zero());
  }
}

TEST_CASE("model rejects mismatched K") {
  CHECK_THROWS_AS(InductiveModel(EvidenceSummary::from_counts({1, 1}), params(3)), DomainError);
}
