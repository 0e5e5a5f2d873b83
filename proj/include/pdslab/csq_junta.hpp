#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pdslab/chebyshev.hpp"
#include "pdslab/csq.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/fourier.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// Largest oracle tolerance at which support recovery is guaranteed:
/// tau < (1-2eta) 2^{-k} / (C max(1, ln k)). C bounds the worst-case
/// amplification from per-query noise to interpolated monomial coefficient
/// error over the node systems k <= 20; the measured requirement is
/// 1.869e11 (dominated by k = 20, where monomial conditioning on nodes
/// inside [-1/2, 1/2] grows like 4^k). The calibration test recomputes the
/// bound; per-k slack is far larger at small k.
inline constexpr double kCsqToleranceC = 1.9e11;

[[nodiscard]] inline double csq_safe_tolerance(int k, double eta) {
  require(k >= 1 && k <= 20, ErrorCode::argument, "needs 1 <= k <= 20");
  return (1.0 - 2.0 * eta) * std::pow(2.0, -k) / (kCsqToleranceC * std::max(1.0, std::log(k)));
}

struct CsqLearnResult {
  JuntaTarget junta;
  std::vector<int> chosen_support;  // coordinates passing the threshold, pre-canonicalization
  std::uint64_t queries = 0;        // exactly k + d*k + 2^|chosen_support|
  std::vector<std::vector<double>> polynomials;  // Q_i coefficients per coordinate, degree < k
};

/// True when every support coordinate of t carries a nonzero degree-wise
/// coefficient sum P_i(mu) = sum_{T contains i} fhat(T) mu^{|T|-1}; the CSQ
/// relevance statistic sees exactly these sums, so coordinates whose sums
/// all cancel are invisible to it.
[[nodiscard]] inline bool all_coordinates_csq_visible(const JuntaTarget& t) {
  const int k = static_cast<int>(t.support.size());
  const BiasVector mu0(static_cast<std::size_t>(t.dim), 0.0);
  for (int p = 0; p < k; ++p) {
    std::vector<double> degree_sum(static_cast<std::size_t>(k), 0.0);
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
      if (!((mask >> p) & 1ull)) continue;
      std::vector<int> S;
      for (int q = 0; q < k; ++q)
        if ((mask >> q) & 1ull) S.push_back(t.support[static_cast<std::size_t>(q)]);
      degree_sum[S.size() - 1] += fourier_coefficient(Target{t}, S, mu0);
    }
    bool visible = false;
    for (double s : degree_sum)
      if (std::abs(s) > 1e-12) visible = true;
    if (!visible) return false;
  }
  return true;
}

/// Random k-junta whose effective support has exactly k coordinates, all
/// visible to the CSQ relevance statistic (degenerate tables are resampled).
[[nodiscard]] inline JuntaTarget random_visible_junta(int d, int k, Rng& rng) {
  for (;;) {
    const auto coords = rng.partial_shuffle(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(k));
    std::vector<int> support(coords.begin(), coords.end());
    for (int& i : support) ++i;
    std::vector<int8_t> table(1ull << k);
    for (auto& v : table) v = static_cast<int8_t>(rng.sign_unit(0.5));
    const JuntaTarget t = make_junta(d, support, table);
    if (static_cast<int>(t.support.size()) == k && all_coordinates_csq_visible(t)) return t;
  }
}

/// Statistical-query junta learner.
///   1. query m_r = E_{D_r}[y] and v_{i,r} = E_{D_r}[y x_i] at the k nodes;
///   2. s_i(r) = v_{i,r} - mu_r m_r, Z_i(r) = s_i(r) / (1 - mu_r^2);
///   3. interpolate Q_i through (mu_r, Z_i(r)); keep i whose largest
///      coefficient magnitude reaches (1/2)(1-2eta)2^{-k};
///   4. read the truth table off sign(E[1(x_S = z) y]) cell by cell.
[[nodiscard]] inline CsqLearnResult csq_learn_junta(CsqOracle& oracle, int d, int k, double eta) {
  require(k >= 1 && k <= 20, ErrorCode::argument, "needs 1 <= k <= 20");
  require(oracle.d() == d && oracle.k() == k, ErrorCode::argument, "oracle built for different (d, k)");
  const std::vector<double>& mu = oracle.nodes();
  const double ratio_scale = oracle.style() == CsqQueryStyle::DENSITY_RATIO ? static_cast<double>(k) : 1.0;

  std::vector<double> m(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) m[static_cast<std::size_t>(r - 1)] = ratio_scale * oracle.query_mean(r);

  CsqLearnResult res;
  res.polynomials.reserve(static_cast<std::size_t>(d));
  const double threshold = 0.5 * (1.0 - 2.0 * eta) * std::pow(2.0, -k);
  std::vector<double> z_vals(static_cast<std::size_t>(k));
  for (int i = 1; i <= d; ++i) {
    for (int r = 1; r <= k; ++r) {
      const double v = ratio_scale * oracle.query_coord(r, i);
      const double mur = mu[static_cast<std::size_t>(r - 1)];
      z_vals[static_cast<std::size_t>(r - 1)] = (v - mur * m[static_cast<std::size_t>(r - 1)]) / (1.0 - mur * mur);
    }
    std::vector<double> q = interpolate_chebyshev(mu, z_vals);
    double max_coef = 0.0;
    for (double c : q) max_coef = std::max(max_coef, std::abs(c));
    if (max_coef >= threshold) res.chosen_support.push_back(i);
    res.polynomials.push_back(std::move(q));
  }

  require(res.chosen_support.size() <= static_cast<std::size_t>(k), ErrorCode::support_overflow,
          "more than k coordinates passed the threshold: oracle tolerance too large");

  const std::size_t cells = 1ull << res.chosen_support.size();
  std::vector<int8_t> table(cells);
  for (std::uint64_t z = 0; z < cells; ++z) {
    const double a = oracle.query_cell(res.chosen_support, z);
    if (a == 0.0 && oracle.mode() == CsqMode::EXACT)
      fail(ErrorCode::ambiguous_cell, "truth-table query returned exactly zero");
    table[z] = static_cast<int8_t>(a >= 0.0 ? 1 : -1);
  }
  res.junta = make_junta(d, res.chosen_support, std::move(table));
  res.queries = oracle.query_count();
  return res;
}

}  // namespace pdslab
