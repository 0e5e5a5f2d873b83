#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdslab/correlation_parity.hpp"
#include "pdslab/distributions.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

namespace pdslab {

/// Sign of the label sum; ties resolve to +1. Labels must be +-1.
[[nodiscard]] inline int majority_denoise(const std::vector<int>& labels) {
  require(!labels.empty(), ErrorCode::argument, "majority vote needs at least one label");
  long long total = 0;
  for (int y : labels) {
    require(y == 1 || y == -1, ErrorCode::argument, "labels must be +-1");
    total += y;
  }
  return total >= 0 ? 1 : -1;
}

/// Hypothesis produced by the parity query learners: a recovered parity, or
/// the constant-0 fallback that abstains (and so errs on every +-1 label).
struct ParityHypothesis {
  std::optional<ParityTarget> parity;

  [[nodiscard]] int predict(const HypercubeInput& x) const { return parity ? eval_parity(*parity, x) : 0; }

  friend bool operator==(const ParityHypothesis&, const ParityHypothesis&) = default;
};

/// A non-adaptive membership-query learner. The query batch is a function of
/// the target distribution and fresh randomness only, never of labels; fit
/// then consumes one random labeled sample plus the labeled batch. Learners
/// whose batch ignores the generator set `deterministic`, which also makes
/// the simulated training distribution in namq_to_rdspac a fixed one.
template <class H>
struct NAMQLearner {
  std::function<std::vector<HypercubeInput>(const InputDistribution&, Rng&)> generate_queries;
  std::function<H(const LabeledSample& random_part, const LabeledSample& query_part)> fit;
  bool deterministic = false;
};

/// One protocol round: draw the random part, emit the query batch, label both
/// through the source's noise channel, and fit.
/// Stream discipline: split(0) random sample, split(1) query generation,
/// split(2) query labels. namq_to_rdspac derives its query batch from stream
/// 1 as well, so a reduction run seeded identically sees the same batch.
template <class H>
[[nodiscard]] H run_namq(const NAMQLearner<H>& learner, const LabeledSource& src, std::size_t m_rand, Rng& rng) {
  require(static_cast<bool>(learner.generate_queries) && static_cast<bool>(learner.fit), ErrorCode::argument,
          "learner must define generate_queries and fit");
  Rng rand_stream = rng.split(0);
  Rng query_stream = rng.split(1);
  Rng label_stream = rng.split(2);
  std::vector<HypercubeInput> queries = learner.generate_queries(src.dist, query_stream);
  require(!queries.empty() || m_rand > 0, ErrorCode::degenerate_input,
          "learner emitted no queries and no random samples were requested");
  LabeledSample random_part;
  if (m_rand > 0) random_part = draw_sample(src, rand_stream, m_rand);
  LabeledSample query_part;
  if (!queries.empty()) {
    query_part.ys = draw_labels(src, queries, label_stream);
    query_part.xs = std::move(queries);
  }
  return learner.fit(random_part, query_part);
}

/// Outcome of simulating an NA-MQ learner from i.i.d. draws alone.
/// measured_error is not filled by the reduction; callers score the
/// hypothesis on held-out data and record it here (NaN until then).
template <class H>
struct ReductionReport {
  bool coverage_achieved = false;
  std::size_t samples_used = 0;     // coupon-collector draw count m~
  std::size_t distinct_points = 0;  // |U|
  bool fallback_used = false;
  H hypothesis{};
  double measured_error = std::numeric_limits<double>::quiet_NaN();
};

/// Coupon-collector draw budget ceil(C * u * (ln u + ln(1/delta))).
[[nodiscard]] inline std::size_t coupon_sample_size(std::size_t u_count, double delta, double C) {
  require(u_count >= 1, ErrorCode::argument, "coupon budget needs at least one distinct point");
  require(delta > 0.0 && delta < 1.0, ErrorCode::argument, "delta must lie in (0, 1)");
  require(C >= 1.0, ErrorCode::argument, "safety multiplier C must be >= 1");
  const double u = static_cast<double>(u_count);
  return static_cast<std::size_t>(std::ceil(C * u * (std::log(u) + std::log(1.0 / delta))));
}

/// Simulates an NA-MQ learner with sampling only: collapse the query batch to
/// its distinct points U, draw m~ labeled examples from the uniform
/// distribution over U, and reconstruct the labeled batch point by point.
/// Each point's label is the majority vote over all of its draws, which under
/// eta = 0 coincides with taking the first occurrence. If some point of U was
/// never drawn, the declared fallback h0 is returned instead of fitting.
/// The learner's random part is not simulated (every learner here runs with
/// m_rand = 0). Streams: split(1) query generation (shared with run_namq),
/// split(3) the m~ draws and their noise.
template <class H>
[[nodiscard]] ReductionReport<H> namq_to_rdspac(const NAMQLearner<H>& learner, const LabeledSource& src,
                                                double delta, double C, H h0, Rng& rng) {
  require(static_cast<bool>(learner.generate_queries) && static_cast<bool>(learner.fit), ErrorCode::argument,
          "learner must define generate_queries and fit");
  require(delta > 0.0 && delta < 1.0, ErrorCode::argument, "delta must lie in (0, 1)");
  require(C >= 1.0, ErrorCode::argument, "safety multiplier C must be >= 1");
  const int d = dist_dim(src.dist);
  require(d <= 64, ErrorCode::unsupported_combination, "uniform-over-U training distribution needs d <= 64");
  Rng query_stream = rng.split(1);
  Rng draw_stream = rng.split(3);

  const std::vector<HypercubeInput> queries = learner.generate_queries(src.dist, query_stream);
  require(!queries.empty(), ErrorCode::degenerate_input, "query batch is empty");

  std::vector<std::uint64_t> u_points;  // first-occurrence order, so reruns rebuild the same atoms
  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<std::size_t> query_slot(queries.size());
  for (std::size_t j = 0; j < queries.size(); ++j) {
    const std::uint64_t idx = queries[j].to_index();
    const auto [it, fresh] = slot.try_emplace(idx, u_points.size());
    if (fresh) u_points.push_back(idx);
    query_slot[j] = it->second;
  }

  ReductionReport<H> report;
  report.distinct_points = u_points.size();
  const std::size_t m_tilde = coupon_sample_size(u_points.size(), delta, C);
  report.samples_used = m_tilde;

  // Equal atom weights, with the last one balancing the left-to-right sum so
  // the total is 1 under the same summation order make_atoms uses.
  std::vector<double> probs(u_points.size(), 1.0 / static_cast<double>(u_points.size()));
  double head = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) head += probs[i];
  probs.back() = 1.0 - head;
  const InputDistribution train = make_atoms(d, u_points, std::move(probs));

  std::vector<std::vector<int>> votes(u_points.size());
  for (std::size_t t = 0; t < m_tilde; ++t) {
    const HypercubeInput x = sample_one(train, draw_stream);
    const int flip = draw_stream.bernoulli(src.noise.eta) ? -1 : 1;
    votes[slot.at(x.to_index())].push_back(flip * eval_target(src.target, x));
  }

  report.coverage_achieved =
      std::none_of(votes.begin(), votes.end(), [](const std::vector<int>& v) { return v.empty(); });
  if (!report.coverage_achieved) {
    report.fallback_used = true;
    report.hypothesis = std::move(h0);
    return report;
  }

  LabeledSample transcript;
  transcript.xs = queries;
  transcript.ys.reserve(queries.size());
  for (std::size_t j = 0; j < queries.size(); ++j) transcript.ys.push_back(majority_denoise(votes[query_slot[j]]));
  report.hypothesis = learner.fit(LabeledSample{}, transcript);
  return report;
}

/// A sampling learner with a declared training distribution: one labeled
/// sample of size m from (train_dist, target, noise) in, hypothesis out.
template <class H>
struct DdspacAlgorithm {
  InputDistribution train_dist;
  std::size_t m = 0;
  std::function<H(const LabeledSample&)> fit;
};

/// Repetitions per query for majority voting through label noise: odd, and by
/// a Chernoff bound large enough that all m points denoise correctly with
/// probability >= 1 - delta. eta = 0 needs no repetition.
[[nodiscard]] inline std::size_t majority_repetitions(std::size_t m, double delta, double eta) {
  require(m >= 1, ErrorCode::argument, "repetition budget needs m >= 1");
  require(delta > 0.0 && delta < 1.0, ErrorCode::argument, "delta must lie in (0, 1)");
  require(eta >= 0.0 && eta < 0.5, ErrorCode::argument, "noise rate must lie in [0, 0.5)");
  if (eta == 0.0) return 1;
  const double gap = 1.0 - 2.0 * eta;
  const double reps = 8.0 * std::log(2.0 * static_cast<double>(m) / delta) / (gap * gap);
  return 2 * static_cast<std::size_t>(std::ceil(reps)) + 1;
}

/// Wraps a declared-distribution sampling learner as a randomized NA-MQ
/// learner: the query batch is the learner's own training sample, each point
/// repeated majority_repetitions(m, delta, eta) times consecutively; fit
/// majority-votes each repetition block down to one label and runs the
/// wrapped learner on the m denoised pairs. With eta = 0 the batch is exactly
/// the m draws and the wrapped learner sees the labels unchanged.
template <class H>
[[nodiscard]] NAMQLearner<H> ddspac_to_namq(DdspacAlgorithm<H> algorithm, double eta = 0.0, double delta = 0.05) {
  require(static_cast<bool>(algorithm.fit), ErrorCode::argument, "algorithm must define fit");
  require(eta >= 0.0 && eta < 0.5, ErrorCode::argument, "noise rate must lie in [0, 0.5)");
  require(delta > 0.0 && delta < 1.0, ErrorCode::argument, "delta must lie in (0, 1)");
  const std::size_t rep = (algorithm.m == 0 || eta == 0.0) ? 1 : majority_repetitions(algorithm.m, delta, eta);
  NAMQLearner<H> learner;
  learner.deterministic = false;
  learner.generate_queries = [dist = std::move(algorithm.train_dist), m = algorithm.m,
                              rep](const InputDistribution&, Rng& rng) {
    std::vector<HypercubeInput> queries;
    queries.reserve(m * rep);
    for (std::size_t i = 0; i < m; ++i) {
      HypercubeInput x = sample_one(dist, rng);
      for (std::size_t r = 1; r < rep; ++r) queries.push_back(x);
      queries.push_back(std::move(x));
    }
    return queries;
  };
  learner.fit = [fit = std::move(algorithm.fit), rep](const LabeledSample&, const LabeledSample& query_part) -> H {
    if (rep == 1) return fit(query_part);
    require(query_part.xs.size() % rep == 0, ErrorCode::argument,
            "query batch size is not a multiple of the repetition count");
    const std::size_t m = query_part.xs.size() / rep;
    LabeledSample denoised;
    denoised.xs.reserve(m);
    denoised.ys.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      denoised.xs.push_back(query_part.xs[i * rep]);
      const auto first = query_part.ys.begin() + static_cast<std::ptrdiff_t>(i * rep);
      denoised.ys.push_back(majority_denoise(std::vector<int>(first, first + static_cast<std::ptrdiff_t>(rep))));
    }
    return fit(denoised);
  };
  return learner;
}

/// Correlation-thresholding parity learner over a fixed biased design: the
/// batch is m draws from train_dist frozen at construction, so the learner is
/// deterministic; fit estimates per-coordinate correlations on the labeled
/// batch and keeps the coordinates above the midpoint gap.
[[nodiscard]] inline NAMQLearner<ParityHypothesis> make_correlation_namq_learner(const InputDistribution& train_dist,
                                                                                 std::size_t m,
                                                                                 std::uint64_t design_seed) {
  require(m >= 2, ErrorCode::argument, "correlation design needs m >= 2");
  const int d = dist_dim(train_dist);
  Rng design_rng(design_seed);
  std::vector<HypercubeInput> design = sample(train_dist, design_rng, m);
  NAMQLearner<ParityHypothesis> learner;
  learner.deterministic = true;
  learner.generate_queries = [design = std::move(design), d](const InputDistribution& target, Rng&) {
    require(dist_dim(target) == d, ErrorCode::dimension_mismatch, "target distribution dim mismatch");
    return design;
  };
  learner.fit = [d](const LabeledSample&, const LabeledSample& query_part) {
    return ParityHypothesis{learn_parity_correlation(query_part.xs, query_part.ys, d).parity};
  };
  return learner;
}

/// Clean 0-1 error of a hypothesis exposing predict(x) -> {-1, 0, +1} against
/// the source's noise-free target over n fresh draws from src.dist. A 0
/// prediction matches no label, so the constant-0 fallback scores 1.
template <class H>
[[nodiscard]] double reduction_error(const H& hypothesis, const LabeledSource& src, std::size_t n, Rng& rng) {
  require(n >= 1, ErrorCode::argument, "error estimate needs n >= 1");
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const HypercubeInput x = sample_one(src.dist, rng);
    if (hypothesis.predict(x) != eval_target(src.target, x)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(n);
}

}  // namespace pdslab
