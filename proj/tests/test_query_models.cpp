#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdslab/correlation_parity.hpp"
#include "pdslab/distributions.hpp"
#include "pdslab/hypercube.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/named_distributions.hpp"
#include "pdslab/query_models.hpp"
#include "pdslab/rng.hpp"
#include "pdslab/targets.hpp"

using namespace pdslab;

namespace {

template <typename F>
ErrorCode thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a pdslab::Error");
  return ErrorCode::argument;
}

template <typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("expected a pdslab::Error");
  return {};
}

// Learner whose hypothesis is the labeled query batch itself; lets tests
// inspect the transcript a protocol run produced.
NAMQLearner<LabeledSample> transcript_learner(std::vector<HypercubeInput> design) {
  NAMQLearner<LabeledSample> learner;
  learner.deterministic = true;
  learner.generate_queries = [design = std::move(design)](const InputDistribution&, Rng&) { return design; };
  learner.fit = [](const LabeledSample&, const LabeledSample& query_part) { return query_part; };
  return learner;
}

std::vector<HypercubeInput> index_design(int d, std::uint64_t count) {
  std::vector<HypercubeInput> design;
  design.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) design.push_back(HypercubeInput::from_index(i, d));
  return design;
}

bool samples_equal(const LabeledSample& a, const LabeledSample& b) { return a.xs == b.xs && a.ys == b.ys; }

}  // namespace

TEST_CASE("majority_denoise follows the sign of the label sum with ties to +1") {
  REQUIRE(majority_denoise({1, 1, -1}) == 1);
  REQUIRE(majority_denoise({1, -1}) == 1);
  REQUIRE(majority_denoise({-1, 1, -1, 1}) == 1);
  REQUIRE(majority_denoise({-1}) == -1);
  REQUIRE(majority_denoise({-1, -1, 1, -1}) == -1);

  REQUIRE(thrown_code([] { (void)majority_denoise({}); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_denoise({1, 2}); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_denoise({0}); }) == ErrorCode::argument);
}

TEST_CASE("majority vote over 11 draws at per-vote accuracy 0.9 is almost always right") {
  Rng rng(20260819);
  const int trials = 10000;
  int correct = 0;
  for (int t = 0; t < trials; ++t) {
    const int truth = (t % 2 == 0) ? 1 : -1;
    std::vector<int> votes(11);
    for (int& v : votes) v = truth * rng.sign_unit(0.9);
    if (majority_denoise(votes) == truth) ++correct;
  }
  // Binomial tail: P(>= 6 of 11 votes wrong at 0.1) ~ 2.96e-4 per trial.
  REQUIRE(correct >= 9900);
}

TEST_CASE("coupon draw budget matches the ceiled bound") {
  REQUIRE(coupon_sample_size(500, 0.1, 1.0) == 4259);
  REQUIRE(coupon_sample_size(1, 0.1, 1.0) == 3);
  REQUIRE(coupon_sample_size(10, 0.25, 2.5) == 93);
  REQUIRE(coupon_sample_size(7, 0.5, 1.25) == 24);
  REQUIRE(coupon_sample_size(1, 0.5, 1.25) == 1);

  REQUIRE(thrown_code([] { (void)coupon_sample_size(0, 0.1, 1.0); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)coupon_sample_size(5, 0.0, 1.0); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)coupon_sample_size(5, 1.0, 1.0); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)coupon_sample_size(5, 0.1, 0.99); }) == ErrorCode::argument);
}

TEST_CASE("majority repetition budget is odd and matches the Chernoff count") {
  REQUIRE(majority_repetitions(1000, 0.05, 0.1) == 267);
  REQUIRE(majority_repetitions(1000, 0.05, 0.2) == 473);
  REQUIRE(majority_repetitions(1, 0.5, 0.25) == 91);
  REQUIRE(majority_repetitions(40, 0.2, 0.25) == 385);
  REQUIRE(majority_repetitions(12345, 0.01, 0.3) == 1473);
  for (std::size_t m : {1u, 10u, 500u}) REQUIRE(majority_repetitions(m, 0.1, 0.35) % 2 == 1);
}

TEST_CASE("zero noise needs no repetition") {
  REQUIRE(majority_repetitions(1000, 0.05, 0.0) == 1);
  REQUIRE(majority_repetitions(1, 0.9, 0.0) == 1);

  REQUIRE(thrown_code([] { (void)majority_repetitions(0, 0.05, 0.1); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_repetitions(10, 0.0, 0.1); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_repetitions(10, 1.0, 0.1); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_repetitions(10, 0.05, 0.5); }) == ErrorCode::argument);
  REQUIRE(thrown_code([] { (void)majority_repetitions(10, 0.05, -0.1); }) == ErrorCode::argument);
}

TEST_CASE("run_namq labels the batch through the noise channel and hands both parts to fit") {
  const int d = 8;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {1, 4})}, make_noise(0.0));
  const auto design = index_design(d, 5);

  NAMQLearner<std::pair<LabeledSample, LabeledSample>> learner;
  learner.generate_queries = [design](const InputDistribution&, Rng&) { return design; };
  learner.fit = [](const LabeledSample& random_part, const LabeledSample& query_part) {
    return std::make_pair(random_part, query_part);
  };

  Rng master(5);
  const auto [random_part, query_part] = run_namq(learner, src, 3, master);

  REQUIRE(query_part.xs == design);
  REQUIRE(query_part.ys.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) REQUIRE(query_part.ys[j] == eval_target(src.target, query_part.xs[j]));

  // The random part comes off stream 0, regardless of the query batch.
  Rng replay = Rng(5).split(0);
  const LabeledSample expect = draw_sample(src, replay, 3);
  REQUIRE(samples_equal(random_part, expect));
}

TEST_CASE("a protocol round with no queries and no random samples is degenerate") {
  const auto src = make_source(make_uniform(4), Target{make_parity(4, {1})}, make_noise(0.0));
  NAMQLearner<int> learner;
  learner.generate_queries = [](const InputDistribution&, Rng&) { return std::vector<HypercubeInput>{}; };
  learner.fit = [](const LabeledSample& random_part, const LabeledSample&) {
    return static_cast<int>(random_part.xs.size());
  };

  Rng master(1);
  REQUIRE(thrown_code([&] { (void)run_namq(learner, src, 0, master); }) == ErrorCode::degenerate_input);

  // A pure-sample round is fine; the query part arrives empty.
  Rng master2(1);
  REQUIRE(run_namq(learner, src, 6, master2) == 6);

  NAMQLearner<int> missing;
  Rng master3(1);
  REQUIRE(thrown_code([&] { (void)run_namq(missing, src, 3, master3); }) == ErrorCode::argument);
}

TEST_CASE("a learner that ignores queries depends only on the random sample") {
  const int d = 6;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {2, 3})}, make_noise(0.2));

  const auto make_ignorer = [](std::vector<HypercubeInput> design) {
    NAMQLearner<int> learner;
    learner.generate_queries = [design = std::move(design)](const InputDistribution&, Rng&) { return design; };
    learner.fit = [](const LabeledSample& random_part, const LabeledSample&) {
      return majority_denoise(random_part.ys);
    };
    return learner;
  };

  auto design = index_design(d, 10);
  auto permuted = design;
  std::reverse(permuted.begin(), permuted.end());
  const auto learner_a = make_ignorer(design);
  const auto learner_b = make_ignorer(std::move(permuted));
  const auto learner_c = make_ignorer(index_design(d, 17));  // different batch size entirely

  Rng ma(99), mb(99), mc(99);
  const int out_a = run_namq(learner_a, src, 75, ma);
  const int out_b = run_namq(learner_b, src, 75, mb);
  const int out_c = run_namq(learner_c, src, 75, mc);
  REQUIRE(out_a == out_b);
  REQUIRE(out_a == out_c);
}

TEST_CASE("deterministic design learners emit the same batch for any generator") {
  const auto mix = thm3_parity_train(12);
  const auto learner = make_correlation_namq_learner(mix, 50, 2024);
  REQUIRE(learner.deterministic);

  Rng r1(1), r2(2);
  const auto q1 = learner.generate_queries(mix, r1);
  const auto q2 = learner.generate_queries(mix, r2);
  REQUIRE(q1 == q2);
  REQUIRE(q1.size() == 50);

  // Non-adaptivity: a fit call on shuffled labels does not move the batch.
  std::vector<int> labels(q1.size(), 1);
  for (std::size_t j = 0; j + 1 < labels.size(); j += 2) labels[j] = -1;
  (void)learner.fit(LabeledSample{}, LabeledSample{q1, labels});
  std::vector<int> shuffled(labels.rbegin(), labels.rend());
  (void)learner.fit(LabeledSample{}, LabeledSample{q1, shuffled});
  Rng r3(3);
  REQUIRE(learner.generate_queries(mix, r3) == q1);

  Rng r4(4);
  REQUIRE(thrown_code([&] { (void)learner.generate_queries(make_uniform(9), r4); }) ==
          ErrorCode::dimension_mismatch);
  REQUIRE(thrown_code([&] { (void)make_correlation_namq_learner(mix, 1, 7); }) == ErrorCode::argument);
}

TEST_CASE("fixed-design correlation learner recovers support through the query channel") {
  const int d = 20;
  const std::vector<int> support{2, 5, 11, 17};
  const auto mix = thm3_parity_train(d);
  const auto src = make_source(mix, Target{make_parity(d, support)}, make_noise(0.1));
  const auto learner = make_correlation_namq_learner(mix, 20000, 991);

  Rng master(11);
  const ParityHypothesis hyp = run_namq(learner, src, 0, master);
  REQUIRE(hyp.parity.has_value());
  REQUIRE(hyp.parity->support == support);

  // The run is exactly learn_parity_correlation fed the design and the labels
  // drawn off the documented streams.
  Rng design_rng(991);
  const std::vector<HypercubeInput> design = sample(mix, design_rng, 20000);
  Rng label_stream = Rng(11).split(2);
  const std::vector<int> ys = draw_labels(src, design, label_stream);
  const CorrelationLearnResult direct = learn_parity_correlation(design, ys, d);
  REQUIRE(hyp.parity == direct.parity);
}

TEST_CASE("reduction reconstructs the exact transcript whenever coverage holds") {
  const int d = 16;
  const auto f = make_parity(d, {1, 2, 3});
  const auto src = make_source(make_uniform(d), Target{f}, make_noise(0.0));
  const auto learner = transcript_learner(index_design(d, 500));

  int successes = 0;
  int fallbacks = 0;
  for (std::uint64_t seed = 0; seed < 130 && successes < 100; ++seed) {
    Rng direct_rng(seed), reduction_rng(seed);
    const auto report = namq_to_rdspac(learner, src, 0.1, 1.0, LabeledSample{}, reduction_rng);
    REQUIRE(report.distinct_points == 500);
    REQUIRE(report.samples_used == 4259);
    if (!report.coverage_achieved) {
      ++fallbacks;
      REQUIRE(report.fallback_used);
      REQUIRE(report.hypothesis.xs.empty());  // the declared h0
      continue;
    }
    REQUIRE_FALSE(report.fallback_used);
    const LabeledSample direct = run_namq(learner, src, 0, direct_rng);
    REQUIRE(samples_equal(report.hypothesis, direct));
    // Noise-free reconstruction is first-occurrence reconstruction: every
    // label is the clean target value.
    if (successes == 0)
      for (std::size_t j = 0; j < direct.xs.size(); ++j)
        REQUIRE(report.hypothesis.ys[j] == eval_parity(f, report.hypothesis.xs[j]));
    ++successes;
  }
  REQUIRE(successes == 100);
  REQUIRE(fallbacks < 30);
}

TEST_CASE("coverage failure stays within the coupon-collector budget") {
  const int d = 16;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {1, 2, 3})}, make_noise(0.1));
  const auto learner = transcript_learner(index_design(d, 500));

  Rng master(7);
  int fails = 0;
  for (int t = 0; t < 1000; ++t) {
    Rng trial = master.split(static_cast<std::uint64_t>(t));
    const auto report = namq_to_rdspac(learner, src, 0.1, 1.0, LabeledSample{}, trial);
    if (!report.coverage_achieved) ++fails;
  }
  // True failure probability is 0.0944; 150/1000 sits 6 standard errors out.
  REQUIRE(fails <= 150);
  REQUIRE(fails >= 1);
}

TEST_CASE("a single-point batch is covered by any positive budget") {
  const int d = 6;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {1, 5})}, make_noise(0.0));
  const std::vector<HypercubeInput> batch(7, HypercubeInput::from_index(13, d));
  const auto learner = transcript_learner(batch);

  Rng master(3);
  const auto report = namq_to_rdspac(learner, src, 0.5, 1.25, LabeledSample{}, master);
  REQUIRE(report.distinct_points == 1);
  REQUIRE(report.samples_used == 1);
  REQUIRE(report.coverage_achieved);
  REQUIRE_FALSE(report.fallback_used);
  REQUIRE(report.hypothesis.xs == batch);
  const int label = eval_target(src.target, batch.front());
  for (int y : report.hypothesis.ys) REQUIRE(y == label);
}

TEST_CASE("reduction runs are deterministic in the seed") {
  const int d = 8;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {1, 2})}, make_noise(0.3));
  const auto learner = transcript_learner(index_design(d, 40));

  Rng ra(77), rb(77);
  const auto a = namq_to_rdspac(learner, src, 0.2, 1.0, LabeledSample{}, ra);
  const auto b = namq_to_rdspac(learner, src, 0.2, 1.0, LabeledSample{}, rb);
  REQUIRE(a.coverage_achieved == b.coverage_achieved);
  REQUIRE(a.samples_used == b.samples_used);
  REQUIRE(a.samples_used == 212);
  REQUIRE(a.distinct_points == 40);
  REQUIRE(samples_equal(a.hypothesis, b.hypothesis));
}

TEST_CASE("empty batches and bad confidence parameters are rejected by the reduction") {
  const auto src = make_source(make_uniform(5), Target{make_parity(5, {1})}, make_noise(0.0));
  NAMQLearner<int> empty_learner;
  empty_learner.generate_queries = [](const InputDistribution&, Rng&) { return std::vector<HypercubeInput>{}; };
  empty_learner.fit = [](const LabeledSample&, const LabeledSample&) { return 0; };

  Rng r1(1);
  REQUIRE(thrown_code([&] { (void)namq_to_rdspac(empty_learner, src, 0.1, 1.0, 0, r1); }) ==
          ErrorCode::degenerate_input);

  const auto learner = transcript_learner(index_design(5, 4));
  Rng r2(1);
  REQUIRE(thrown_code([&] { (void)namq_to_rdspac(learner, src, 0.0, 1.0, LabeledSample{}, r2); }) ==
          ErrorCode::argument);
  REQUIRE(thrown_code([&] { (void)namq_to_rdspac(learner, src, 1.0, 1.0, LabeledSample{}, r2); }) ==
          ErrorCode::argument);
  REQUIRE(thrown_code([&] { (void)namq_to_rdspac(learner, src, 0.1, 0.99, LabeledSample{}, r2); }) ==
          ErrorCode::argument);

  NAMQLearner<int> missing;
  REQUIRE(thrown_code([&] { (void)namq_to_rdspac(missing, src, 0.1, 1.0, 0, r2); }) == ErrorCode::argument);

  const auto wide_src = make_source(make_uniform(70), Target{make_parity(70, {1})}, make_noise(0.0));
  NAMQLearner<int> trivial;
  trivial.generate_queries = [](const InputDistribution& dist, Rng& rng) {
    return std::vector<HypercubeInput>{sample_one(dist, rng)};
  };
  trivial.fit = [](const LabeledSample&, const LabeledSample&) { return 0; };
  Rng r3(1);
  REQUIRE(thrown_message([&] { (void)namq_to_rdspac(trivial, wide_src, 0.1, 1.0, 0, r3); }) ==
          "uniform-over-U training distribution needs d <= 64");
}

TEST_CASE("sampling learners wrap into query batches of repeated points") {
  const int d = 10;
  const auto mix = thm3_parity_train(d);
  const auto src = make_source(mix, Target{make_parity(d, {1, 2})}, make_noise(0.25));

  DdspacAlgorithm<LabeledSample> alg;
  alg.train_dist = mix;
  alg.m = 40;
  alg.fit = [](const LabeledSample& s) { return s; };
  const auto learner = ddspac_to_namq(std::move(alg), 0.25, 0.2);
  REQUIRE_FALSE(learner.deterministic);

  const std::size_t rep = majority_repetitions(40, 0.2, 0.25);
  REQUIRE(rep == 385);

  Rng qa(41);
  const auto batch = learner.generate_queries(mix, qa);
  REQUIRE(batch.size() == 40 * rep);
  Rng qb(41);
  for (std::size_t i = 0; i < 40; ++i) {
    const HypercubeInput head = sample_one(mix, qb);
    for (std::size_t r = 0; r < rep; ++r) REQUIRE(batch[i * rep + r] == head);
  }

  // End to end, the wrapped learner sees the 40 points with their clean
  // labels: at 385 votes per point and eta = 0.25 a majority flip has
  // probability exp(-48) per point.
  Rng master(42);
  const LabeledSample denoised = run_namq(learner, src, 0, master);
  REQUIRE(denoised.xs.size() == 40);
  Rng replay = Rng(42).split(1);
  for (std::size_t i = 0; i < 40; ++i) {
    REQUIRE(denoised.xs[i] == sample_one(mix, replay));
    REQUIRE(denoised.ys[i] == eval_target(src.target, denoised.xs[i]));
  }
}

TEST_CASE("wrapped sampling learners match the direct run on the coupled stream") {
  const int d = 14;
  const auto mix = thm3_parity_train(d);
  const auto src = make_source(mix, Target{make_parity(d, {3, 7, 11})}, make_noise(0.0));
  const auto fit = [d](const LabeledSample& s) {
    return ParityHypothesis{learn_parity_correlation(s.xs, s.ys, d).parity};
  };

  DdspacAlgorithm<ParityHypothesis> alg;
  alg.train_dist = mix;
  alg.m = 5000;
  alg.fit = fit;
  const auto learner = ddspac_to_namq(std::move(alg));

  Rng master(314);
  const ParityHypothesis through_queries = run_namq(learner, src, 0, master);

  Rng point_stream = Rng(314).split(1);
  LabeledSample direct;
  direct.xs = sample(mix, point_stream, 5000);
  Rng label_stream = Rng(314).split(2);
  direct.ys = draw_labels(src, direct.xs, label_stream);
  REQUIRE(through_queries == fit(direct));
  REQUIRE(through_queries.parity.has_value());
  REQUIRE(through_queries.parity->support == std::vector<int>{3, 7, 11});
}

TEST_CASE("wrapped noisy learner recovers support end-to-end") {
  const int d = 10;
  const auto mix = thm3_parity_train(d);
  const auto src = make_source(mix, Target{make_parity(d, {1, 2})}, make_noise(0.25));

  DdspacAlgorithm<ParityHypothesis> alg;
  alg.train_dist = mix;
  alg.m = 1200;
  alg.fit = [d](const LabeledSample& s) { return ParityHypothesis{learn_parity_correlation(s.xs, s.ys, d).parity}; };
  const auto learner = ddspac_to_namq(std::move(alg), 0.25, 0.2);

  Rng master(31);
  const ParityHypothesis hyp = run_namq(learner, src, 0, master);
  REQUIRE(hyp.parity.has_value());
  REQUIRE(hyp.parity->support == std::vector<int>{1, 2});
}

TEST_CASE("constant learners ignore the query channel and empty wraps degenerate") {
  const int d = 9;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {2, 6})}, make_noise(0.1));
  const ParityHypothesis fixed{make_parity(d, {4})};

  DdspacAlgorithm<ParityHypothesis> constant;
  constant.train_dist = make_uniform(d);
  constant.m = 25;
  constant.fit = [fixed](const LabeledSample&) { return fixed; };
  const auto learner = ddspac_to_namq(std::move(constant));

  Rng ma(1), mb(2);
  REQUIRE(run_namq(learner, src, 0, ma) == fixed);
  REQUIRE(run_namq(learner, src, 0, mb) == fixed);

  DdspacAlgorithm<ParityHypothesis> empty;
  empty.train_dist = make_uniform(d);
  empty.m = 0;
  empty.fit = [fixed](const LabeledSample&) { return fixed; };
  const auto degenerate = ddspac_to_namq(std::move(empty));
  Rng mc(3);
  REQUIRE(thrown_code([&] { (void)run_namq(degenerate, src, 0, mc); }) == ErrorCode::degenerate_input);

  DdspacAlgorithm<ParityHypothesis> missing;
  missing.train_dist = make_uniform(d);
  missing.m = 5;
  REQUIRE(thrown_code([&] { (void)ddspac_to_namq(std::move(missing)); }) == ErrorCode::argument);

  DdspacAlgorithm<ParityHypothesis> bad;
  bad.train_dist = make_uniform(d);
  bad.m = 5;
  bad.fit = [fixed](const LabeledSample&) { return fixed; };
  REQUIRE(thrown_code([&] { (void)ddspac_to_namq(std::move(bad), 0.5, 0.1); }) == ErrorCode::argument);
  DdspacAlgorithm<ParityHypothesis> bad2;
  bad2.train_dist = make_uniform(d);
  bad2.m = 5;
  bad2.fit = [fixed](const LabeledSample&) { return fixed; };
  REQUIRE(thrown_code([&] { (void)ddspac_to_namq(std::move(bad2), 0.1, 1.0); }) == ErrorCode::argument);
}

TEST_CASE("end-to-end reduction equals the direct query run at noise 0.1") {
  const int d = 30;
  const std::vector<int> support{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto mix = thm3_parity_train(d);
  const auto src = make_source(mix, Target{make_parity(d, support)}, make_noise(0.1));
  const auto learner = make_correlation_namq_learner(mix, 150000, 4242);

  Rng direct_rng(21), reduction_rng(21);
  const ParityHypothesis direct = run_namq(learner, src, 0, direct_rng);
  const auto report = namq_to_rdspac(learner, src, 0.1, 1.0, ParityHypothesis{}, reduction_rng);

  REQUIRE(report.coverage_achieved);
  REQUIRE_FALSE(report.fallback_used);
  // The biased design revisits points heavily: 150000 draws collapse to
  // 79445 distinct queries, and the budget follows |U|, not the batch size.
  REQUIRE(report.distinct_points == 79445);
  REQUIRE(report.samples_used == 1079293);
  REQUIRE(direct == report.hypothesis);
  REQUIRE(direct.parity.has_value());
  REQUIRE(direct.parity->support == support);

  Rng eval_rng(500);
  REQUIRE(reduction_error(report.hypothesis, src, 2000, eval_rng) == 0.0);
}

TEST_CASE("reduction reports score hypotheses against the clean target") {
  const int d = 7;
  const auto src = make_source(make_uniform(d), Target{make_parity(d, {1, 3})}, make_noise(0.3));

  Rng r1(9);
  REQUIRE(reduction_error(ParityHypothesis{}, src, 500, r1) == 1.0);  // constant 0 abstains everywhere
  Rng r2(9);
  REQUIRE(reduction_error(ParityHypothesis{make_parity(d, {1, 3})}, src, 500, r2) == 0.0);
  Rng r3(9);
  const double err = reduction_error(ParityHypothesis{make_parity(d, {1})}, src, 4000, r3);
  REQUIRE(err == Catch::Approx(0.5).margin(0.05));
  Rng r4(9);
  REQUIRE(thrown_code([&] { (void)reduction_error(ParityHypothesis{}, src, 0, r4); }) == ErrorCode::argument);

  const ReductionReport<ParityHypothesis> fresh;
  REQUIRE(std::isnan(fresh.measured_error));
}
