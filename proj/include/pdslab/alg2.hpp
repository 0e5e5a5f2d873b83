#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/nets.hpp"
#include "pdslab/predict_error.hpp"
#include "pdslab/train.hpp"

namespace pdslab {

struct Alg2Result {
  TwoLayerNet net;
  std::vector<MetricsRow> rows;
  std::vector<std::string> warnings;
  double y_bar = 0.0;  // phase-1 batch mean label, reused by phase 2
};

/// Layerwise training for juntas with the covariance loss
/// L(x, y) = (1 - c*y*ybar) * (1 - y*f(x))_+.
///
/// Phase 1: one batch gradient step on W only, step first_layer_step, from
/// the alg2_init net (W=0, a=+-kappa halves, b=kappa); ybar is the batch mean
/// label and c*|ybar| >= 1 is rejected. Biases are then resampled uniformly
/// in [-bias_range, +bias_range]. Phase 2: cfg.steps projected online SGD
/// updates on a alone, one fresh sample each, clipping ||a||_2 to cov_clip
/// after every step. Rng streams: 0 phase-1 batch, 1 bias resample, 2 phase-2
/// stream, 3 target test set, 4 train-dist test set. Binding cfg fields:
/// init=ALG2, width, kappa, bias_range, cov_c, cov_clip, first_layer_step,
/// second_layer_step, batch, steps, eval_every, seed, n_test.
///
/// Targets with E[f] != 0 under the uniform reference distribution are outside
/// the covariance analysis; they produce a warning, not an error.
[[nodiscard]] inline Alg2Result layerwise_junta_cov(const TrainConfig& cfg, const LabeledSource& train_src,
                                                    const EvalSources& evals) {
  require(cfg.init == InitKind::ALG2, ErrorCode::argument, "layerwise-covariance needs the ALG2 init");
  require(cfg.batch >= 1, ErrorCode::argument, "batch must be >= 1");
  require(cfg.steps >= 0, ErrorCode::argument, "steps must be >= 0");
  require(cfg.first_layer_step > 0.0, ErrorCode::argument, "first-layer step must be > 0");
  require(cfg.second_layer_step > 0.0, ErrorCode::argument, "second-layer step must be > 0");
  require(cfg.cov_c > 0.0, ErrorCode::argument, "covariance weight c must be > 0");
  require(cfg.cov_clip > 0.0, ErrorCode::argument, "projection radius must be > 0");
  require(cfg.bias_range > 0.0, ErrorCode::argument, "bias resample range must be > 0");
  require(cfg.eval_every >= 1, ErrorCode::argument, "eval_every must be >= 1");
  require(cfg.n_test >= 1, ErrorCode::argument, "n_test must be >= 1");
  const int d = dist_dim(train_src.dist);
  require(dist_dim(evals.target.dist) == d && dist_dim(evals.train_dist.dist) == d,
          ErrorCode::dimension_mismatch, "eval sources must share the training dimension");

  Alg2Result res;
  res.net = alg2_init(cfg.width, d, cfg.kappa);

  if (std::holds_alternative<JuntaTarget>(train_src.target)) {
    const auto& table = std::get<JuntaTarget>(train_src.target).table;
    if (std::accumulate(table.begin(), table.end(), 0) != 0)
      res.warnings.push_back("target is unbalanced (E[f] != 0 under the uniform reference distribution)");
  } else if (std::holds_alternative<ParityTarget>(train_src.target) &&
             std::get<ParityTarget>(train_src.target).support.empty()) {
    res.warnings.push_back("target is unbalanced (E[f] != 0 under the uniform reference distribution)");
  }

  const Rng master(cfg.seed);
  Rng phase1_rng = master.split(0);
  Rng bias_rng = master.split(1);
  Rng phase2_rng = master.split(2);
  Rng eval_target_rng = master.split(3);
  Rng eval_train_rng = master.split(4);

  // Phase 1: one covariance-loss gradient step on W.
  const LabeledSample batch = draw_sample(train_src, phase1_rng, static_cast<std::size_t>(cfg.batch));
  long label_sum = 0;
  for (int y : batch.ys) label_sum += y;
  res.y_bar = static_cast<double>(label_sum) / static_cast<double>(cfg.batch);
  require(cfg.cov_c * std::abs(res.y_bar) < 1.0, ErrorCode::invalid_covariance_weight,
          "covariance loss needs c*|mean label| < 1 on the phase-1 batch");
  const TwoLayerGrads g =
      two_layer_loss_gradients(res.net, batch.xs, batch.ys, LossKind::COVARIANCE, cfg.cov_c, res.y_bar);
  for (std::size_t idx = 0; idx < res.net.w.size(); ++idx) res.net.w[idx] -= cfg.first_layer_step * g.gw[idx];

  for (double& bv : res.net.b) bv = cfg.bias_range * (2.0 * bias_rng.uniform01() - 1.0);

  // Phase 2: projected online SGD on a.
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
  const auto record = [&](long long step, double loss) {
    MetricsRow row;
    row.step = step;
    row.samples_seen = cfg.batch + step;
    row.train_loss = loss;
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
    if (1.0 - y * f > 0.0) {  // hinge active; subgradient 0 at the kink
      const double gain = cfg.second_layer_step * (1.0 - cfg.cov_c * y * res.y_bar) * y;
      for (int j = 0; j < res.net.n; ++j)
        res.net.a[static_cast<std::size_t>(j)] += gain * phi[static_cast<std::size_t>(j)];
    }
    double norm2 = 0.0;
    for (double av : res.net.a) norm2 += av * av;
    if (norm2 > cfg.cov_clip * cfg.cov_clip) {
      const double scale = cfg.cov_clip / std::sqrt(norm2);
      for (double& av : res.net.a) av *= scale;
    }
    if (step % cfg.eval_every == 0 || step == cfg.steps)
      record(step, covariance_loss(y, f, res.y_bar, cfg.cov_c));
  }
  if (cfg.steps == 0) record(0, 0.0);
  return res;
}

}  // namespace pdslab
