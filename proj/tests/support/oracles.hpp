#pragma once

// Reference computations used only by tests. They take the long way round on
// purpose: explicit tables, term-by-term products, literal loops.

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "semcomm/extreme_real.hpp"
#include "semcomm/inductive.hpp"

namespace oracle {

inline int popcount(std::uint64_t m) { return __builtin_popcountll(m); }

/// Prior weight of one width-w constituent as a product of alpha factors
/// (w lam/K + t) / (lam + t), t = 0..alpha-1.
inline double prior_product(std::size_t w, std::size_t big_k, double lam, std::uint64_t alpha) {
  double v = 1.0;
  for (std::uint64_t t = 0; t < alpha; ++t)
    v *= (double(w) * lam / double(big_k) + double(t)) / (lam + double(t));
  return v;
}

/// Likelihood of a kind sequence under a width-w constituent, as the
/// sequential product of (n_j(t) + lam/w) / (t + lam).
inline double sequential_likelihood(const std::vector<std::size_t>& kinds, std::uint64_t mask, double lam) {
  const double w = popcount(mask);
  std::vector<double> seen(64, 0.0);
  double v = 1.0;
  for (std::size_t t = 0; t < kinds.size(); ++t) {
    if (!(mask >> kinds[t] & 1)) return 0.0;
    v *= (seen[kinds[t]] + lam / w) / (double(t) + lam);
    seen[kinds[t]] += 1.0;
  }
  return v;
}

/// Direct Bayes over all 2^K - 1 constituents (indexed by mask) with
/// lambda(w) = w or a constant; the prior uses lambda(K).
inline std::vector<double> brute_force_posterior(const std::vector<std::size_t>& kinds, std::size_t big_k,
                                                 const semcomm::LambdaPolicy& lambda, std::uint64_t alpha) {
  std::vector<double> post(std::size_t{1} << big_k, 0.0);
  double z = 0.0;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << big_k); ++m) {
    const std::size_t w = std::size_t(popcount(m));
    const double v = prior_product(w, big_k, lambda.at(big_k), alpha) * sequential_likelihood(kinds, m, lambda.at(w));
    post[m] = v;
    z += v;
  }
  for (auto& v : post) v /= z;
  return post;
}

/// Literal double loop over c and i.
inline double pac_literal(std::size_t big_k, std::uint64_t n, std::uint64_t alpha) {
  double worst = 0.0;
  for (std::size_t c = 0; c + 1 <= big_k; ++c) {
    double sum = 0.0;
    for (std::size_t i = 1; i <= big_k - c; ++i) {
      double binom = 1.0;
      for (std::size_t t = 1; t <= i; ++t) binom = binom * double(big_k - c - i + t) / double(t);
      sum += binom * std::pow(double(c) / double(c + i), double(n - alpha));
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

/// I(s; s^) - beta * sum p(s) Q(s, j) g(s, j), evaluated from scratch.
inline double lagrangian(const std::vector<double>& p, const std::vector<std::vector<double>>& gain,
                         const std::vector<std::vector<double>>& q, double beta) {
  const std::size_t m = p.size(), r = gain[0].size();
  std::vector<double> marg(r, 0.0);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t j = 0; j < r; ++j) marg[j] += p[s] * q[s][j];
  double rate = 0.0, info = 0.0;
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t j = 0; j < r; ++j) {
      const double v = p[s] * q[s][j];
      info += v * gain[s][j];
      if (v > 0.0) rate += v * std::log2(q[s][j] / marg[j]);
    }
  return rate - beta * info;
}

/// Exhaustive search over both rows of a 2x2 channel at resolution `step`.
inline double grid_min_2x2(const std::vector<double>& p, const std::vector<std::vector<double>>& gain, double beta,
                           double step = 1e-3) {
  const int n = int(std::lround(1.0 / step));
  double best = INFINITY;
  std::vector<std::vector<double>> q(2, std::vector<double>(2));
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      q[0] = {a * step, 1.0 - a * step};
      q[1] = {b * step, 1.0 - b * step};
      best = std::min(best, lagrangian(p, gain, q, beta));
    }
  return best;
}

/// 3x3: full grid at a coarse step, then each row in turn over its whole
/// simplex at the fine step until nothing improves. The objective is convex
/// in the channel, so row sweeps settle at the grid optimum.
inline double grid_min_3x3(const std::vector<double>& p, const std::vector<std::vector<double>>& gain, double beta,
                           double coarse = 0.05, double fine = 1e-3) {
  auto simplex = [](double step) {
    std::vector<std::vector<double>> pts;
    const int n = int(std::lround(1.0 / step));
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) pts.push_back({a * step, b * step, double(n - a - b) * step});
    return pts;
  };
  const auto cs = simplex(coarse);
  std::vector<std::vector<double>> q(3), best_q(3);
  double best = INFINITY;
  for (const auto& r0 : cs)
    for (const auto& r1 : cs)
      for (const auto& r2 : cs) {
        q = {r0, r1, r2};
        const double v = lagrangian(p, gain, q, beta);
        if (v < best) {
          best = v;
          best_q = q;
        }
      }
  const auto fs = simplex(fine);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t row = 0; row < 3; ++row) {
      q = best_q;
      for (const auto& r : fs) {
        q[row] = r;
        const double v = lagrangian(p, gain, q, beta);
        if (v < best - 1e-15) {
          best = v;
          best_q = q;
          improved = true;
        }
      }
    }
  }
  return best;
}

/// High-precision value holder.
class Big {
 public:
  explicit Big(mpfr_prec_t prec = 256) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  ~Big() { mpfr_clear(v_); }
  Big(const Big&) = delete;
  Big& operator=(const Big&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  void set(const semcomm::ExtremeReal& x) {
    mpfr_set_d(v_, x.mantissa(), MPFR_RNDN);
    mpfr_mul_2si(v_, v_, long(x.exponent()), MPFR_RNDN);
  }
  void set_exp(double ln) {
    mpfr_set_d(v_, ln, MPFR_RNDN);
    mpfr_exp(v_, v_, MPFR_RNDN);
  }

 private:
  mpfr_t v_;
};

/// |x - ref| / |ref|, computed in high precision.
inline double relative_error(const semcomm::ExtremeReal& x, const Big& ref) {
  Big xv, diff;
  xv.set(x);
  mpfr_sub(diff.get(), xv.get(), ref.get(), MPFR_RNDN);
  if (mpfr_zero_p(ref.get())) return mpfr_zero_p(diff.get()) ? 0.0 : INFINITY;
  mpfr_div(diff.get(), diff.get(), ref.get(), MPFR_RNDN);
  return std::fabs(mpfr_get_d(diff.get(), MPFR_RNDN));
}

}  // namespace oracle
