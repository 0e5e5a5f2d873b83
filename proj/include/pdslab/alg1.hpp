#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/moments.hpp"
#include "pdslab/nets.hpp"
#include "pdslab/predict_error.hpp"
#include "pdslab/train.hpp"

namespace pdslab {

/// One online ridge-SGD update, in place:
/// a <- (1 - lambda2*s2) * a + s2 * (y - <a, phi>) * phi.
inline void ridge_sgd_step(std::vector<double>& a, const std::vector<double>& phi, double y, double lambda2,
                           double s2) {
  require(a.size() == phi.size(), ErrorCode::dimension_mismatch, "ridge step needs matching lengths");
  double f = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) f += a[j] * phi[j];
  const double decay = 1.0 - lambda2 * s2;
  const double gain = s2 * (y - f);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = decay * a[j] + gain * phi[j];
}

struct Alg1Result {
  TwoLayerNet net;
  std::vector<MetricsRow> rows;
  double lambda1 = 0.0;  // threshold actually applied
  double s1 = 0.0;       // step actually applied
};

namespace detail {

/// lambda1/s1 derivation from the exact per-coordinate moments of the source.
/// Under the squared loss the first-layer gradient magnitudes at the zero
/// init are 2|E[y x_i]|, taking (for the sources this algorithm targets) one
/// value on the support and a smaller one off it. The threshold is placed at
/// the midpoint of those two gradient levels and the step is chosen so a
/// surviving in-support weight lands exactly at 1:
///   lambda1 = hi + lo,   s1 = 1 / (2*hi - lambda1) = 1 / (hi - lo),
/// with hi/lo the extreme |E[y x_i]|. Requires two distinct levels.
struct AutoFirstLayer {
  double lambda1 = 0.0;
  double s1 = 0.0;
  double denom = 0.0;  // 2*hi - lambda1, kept verbatim so hi-level weights normalize to exactly 1
};

[[nodiscard]] inline AutoFirstLayer auto_first_layer(const LabeledSource& src) {
  const int d = dist_dim(src.dist);
  double hi = 0.0, lo = 0.0;
  for (int i = 1; i <= d; ++i) {
    const double m = std::abs(exact_moment(src, i));
    if (i == 1) {
      hi = lo = m;
    } else {
      hi = std::max(hi, m);
      lo = std::min(lo, m);
    }
  }
  require(hi > lo, ErrorCode::unsupported_combination,
          "auto first-layer hyperparameters need two distinct moment magnitudes");
  AutoFirstLayer out;
  out.lambda1 = hi + lo;
  out.denom = 2.0 * hi - out.lambda1;
  out.s1 = 1.0 / out.denom;
  return out;
}

/// Phase 1 applied to an alg1_init net: W1_j = rho_{s1*lambda1}(-s1 * Ghat_j)
/// with Ghat_j = -2 a0_j T 1[b_j >= 0] and T the (exact or estimated) moment
/// vector. In auto mode the scaling identity form rho_{lambda1}(2 a_j T) /
/// denom is used so that surviving top-level weights are exactly a0_j.
inline void alg1_phase1_apply(TwoLayerNet& net, const std::vector<double>& t_vec, double lambda1, double s1,
                              bool auto_mode, double denom) {
  require(lambda1 >= 0.0, ErrorCode::argument, "lambda1 must be >= 0");
  require(s1 > 0.0, ErrorCode::argument, "s1 must be > 0");
  for (int j = 0; j < net.n; ++j) {
    double* row = net.w.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(net.d);
    if (net.b[static_cast<std::size_t>(j)] < 0.0) continue;  // gradient gated by ReLU'(b) at the zero init
    const double aj = net.a[static_cast<std::size_t>(j)];
    for (int i = 0; i < net.d; ++i) {
      const double drive = 2.0 * aj * t_vec[static_cast<std::size_t>(i)];
      row[i] = auto_mode ? soft_threshold(drive, lambda1) / denom
                         : soft_threshold(s1 * drive, s1 * lambda1);
    }
  }
}

}  // namespace detail

/// Phase 1 only, with exact population moments instead of samples. Binding
/// cfg fields: init (must be ALG1), auto_first_layer or (l1_first_layer,
/// first_layer_step).
[[nodiscard]] inline Alg1Result alg1_phase1_population(const TrainConfig& cfg, const LabeledSource& src) {
  require(cfg.init == InitKind::ALG1, ErrorCode::argument, "layerwise-l1 phase 1 needs the ALG1 init");
  const int d = dist_dim(src.dist);
  Alg1Result res;
  res.net = alg1_init(d);
  std::vector<double> t_vec(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i) t_vec[static_cast<std::size_t>(i - 1)] = exact_moment(src, i);
  double denom = 0.0;
  if (cfg.auto_first_layer) {
    const detail::AutoFirstLayer af = detail::auto_first_layer(src);
    res.lambda1 = af.lambda1;
    res.s1 = af.s1;
    denom = af.denom;
  } else {
    res.lambda1 = cfg.l1_first_layer;
    res.s1 = cfg.first_layer_step;
  }
  detail::alg1_phase1_apply(res.net, t_vec, res.lambda1, res.s1, cfg.auto_first_layer, denom);
  return res;
}

/// Layerwise training for parities: Phase 1 takes one proximal gradient step
/// on W from the zero init using cfg.batch samples (the first-layer gradient
/// reduces to -2 a0_j mean(y*x) 1[b_j >= 0]); lambda1/s1 come from cfg or,
/// with auto_first_layer, from the exact moments of the source. Phase 2
/// freezes W, b and runs cfg.steps online ridge-SGD updates on a, one fresh
/// sample each. Rng streams: 0 phase-1 batch, 1 phase-2 stream, 2 target test
/// set, 3 train-dist test set. Binding cfg fields: init=ALG1, batch (phase-1
/// sample count), steps, l1_first_layer, first_layer_step, auto_first_layer,
/// l2_second_layer, second_layer_step, eval_every, seed, n_test.
[[nodiscard]] inline Alg1Result layerwise_parity_l1(const TrainConfig& cfg, const LabeledSource& train_src,
                                                    const EvalSources& evals) {
  require(cfg.init == InitKind::ALG1, ErrorCode::argument, "layerwise-l1 needs the ALG1 init");
  require(cfg.batch >= 1, ErrorCode::argument, "batch must be >= 1");
  require(cfg.steps >= 0, ErrorCode::argument, "steps must be >= 0");
  require(cfg.second_layer_step > 0.0, ErrorCode::argument, "second-layer step must be > 0");
  require(cfg.l2_second_layer >= 0.0, ErrorCode::argument, "lambda2 must be >= 0");
  require(cfg.eval_every >= 1, ErrorCode::argument, "eval_every must be >= 1");
  require(cfg.n_test >= 1, ErrorCode::argument, "n_test must be >= 1");
  const int d = dist_dim(train_src.dist);
  require(dist_dim(evals.target.dist) == d && dist_dim(evals.train_dist.dist) == d,
          ErrorCode::dimension_mismatch, "eval sources must share the training dimension");

  const Rng master(cfg.seed);
  Rng phase1_rng = master.split(0);
  Rng phase2_rng = master.split(1);
  Rng eval_target_rng = master.split(2);
  Rng eval_train_rng = master.split(3);

  Alg1Result res;
  res.net = alg1_init(d);

  // Phase 1: empirical moment vector over the m1 = cfg.batch batch.
  const LabeledSample batch = draw_sample(train_src, phase1_rng, static_cast<std::size_t>(cfg.batch));
  std::vector<double> t_vec(static_cast<std::size_t>(d), 0.0);
  for (std::size_t t = 0; t < batch.xs.size(); ++t)
    for (int i = 0; i < d; ++i)
      t_vec[static_cast<std::size_t>(i)] += batch.ys[t] * batch.xs[t].bits()[static_cast<std::size_t>(i)];
  for (double& v : t_vec) v /= static_cast<double>(cfg.batch);
  double denom = 0.0;
  if (cfg.auto_first_layer) {
    const detail::AutoFirstLayer af = detail::auto_first_layer(train_src);
    res.lambda1 = af.lambda1;
    res.s1 = af.s1;
    denom = af.denom;
  } else {
    res.lambda1 = cfg.l1_first_layer;
    res.s1 = cfg.first_layer_step;
  }
  detail::alg1_phase1_apply(res.net, t_vec, res.lambda1, res.s1, cfg.auto_first_layer, denom);

  // Phase 2: online ridge SGD on a over the frozen features.
  const LabeledSample test_target =
      draw_sample(evals.target, eval_target_rng, static_cast<std::size_t>(cfg.n_test));
  const LabeledSample test_train =
      draw_sample(evals.train_dist, eval_train_rng, static_cast<std::size_t>(cfg.n_test));
  const auto t0 = std::chrono::steady_clock::now();
  const auto sampled_error = [&](const LabeledSample& s) {
    long wrong = 0;
    for (std::size_t t = 0; t < s.xs.size(); ++t)
      if (predict_sign(res.net, s.xs[t]) != s.ys[t]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(s.xs.size());
  };
  const auto record = [&](long long step, double resid2) {
    MetricsRow row;
    row.step = step;
    row.samples_seen = cfg.batch + step;
    row.train_loss = resid2;
    row.test_error_target = sampled_error(test_target);
    row.test_error_train_dist = sampled_error(test_train);
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.rows.push_back(row);
  };

  std::vector<double> phi(static_cast<std::size_t>(res.net.n));
  for (long long step = 1; step <= cfg.steps; ++step) {
    const LabeledSample s = draw_sample(train_src, phase2_rng, 1);
    double f = 0.0;
    for (int j = 0; j < res.net.n; ++j) {
      double z = res.net.b[static_cast<std::size_t>(j)];
      const double* row = res.net.w.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(d);
      for (int i = 0; i < d; ++i) z += row[i] * s.xs[0].bits()[static_cast<std::size_t>(i)];
      phi[static_cast<std::size_t>(j)] = z > 0.0 ? z : 0.0;
      f += res.net.a[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
    }
    if (!std::isfinite(f))
      fail(ErrorCode::divergence, "second-layer iterate diverged (non-finite) at step " + std::to_string(step));
    const double y = s.ys[0];
    ridge_sgd_step(res.net.a, phi, y, cfg.l2_second_layer, cfg.second_layer_step);
    if (step % cfg.eval_every == 0 || step == cfg.steps) record(step, (y - f) * (y - f));
  }
  if (cfg.steps == 0) record(0, 0.0);
  return res;
}

}  // namespace pdslab
