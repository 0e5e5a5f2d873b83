#pragma once

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pdslab/errors.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/nets.hpp"
#include "pdslab/predict_error.hpp"
#include "pdslab/rng.hpp"

namespace pdslab {

enum class LossKind { SQUARE, COVARIANCE, HINGE };
enum class InitKind { STANDARD_UNIFORM, ALG1, ALG2 };

/// One knob set shared by the joint trainer and the two layerwise algorithms.
/// Fields a given algorithm does not use are ignored by it; see each runner's
/// doc for which fields bind.
struct TrainConfig {
  LossKind loss = LossKind::SQUARE;
  double cov_c = 2.0;      // covariance-loss weight c
  double cov_clip = 10.0;  // second-layer projection radius B (covariance phase 2)
  double lr = 0.01;        // constant learning rate, joint SGD
  int batch = 64;
  long long steps = 1'000'000;
  double l1_first_layer = 0.0;    // lambda1
  double l2_second_layer = 0.0;   // lambda2
  double first_layer_step = 1.0;  // s1 (layerwise-l1) or gamma (covariance phase 1)
  double second_layer_step = 0.0; // s2
  int width = 512;
  InitKind init = InitKind::STANDARD_UNIFORM;
  bool auto_first_layer = false;  // derive lambda1, s1 from exact moments
  double kappa = 1.0;             // covariance init scale
  double bias_range = 1.0;        // covariance bias resample range L
  int eval_every = 1000;
  std::uint64_t seed = 0;
  bool fresh_samples = true;
  double early_stop_loss = 0.01;
  int n_test = 8192;  // sampled-eval test-set size
};

/// wall_ms is diagnostic only: it is excluded from the determinism contract
/// and from CSV output. All other fields are bit-reproducible from the seed.
struct MetricsRow {
  long long step = 0;
  long long samples_seen = 0;
  double train_loss = 0.0;
  double test_error_target = 0.0;
  double test_error_train_dist = 0.0;
  double wall_ms = 0.0;
};

/// The two evaluation sources a MetricsRow reports on: the reference
/// distribution the hypothesis is judged against, and the training one.
struct EvalSources {
  LabeledSource target;
  LabeledSource train_dist;
};

/// (1 - c*y*ybar) * max(1 - y*f, 0). Nonnegative whenever c*|ybar| < 1.
[[nodiscard]] inline double covariance_loss(double y, double f, double y_bar, double c) {
  const double hinge = 1.0 - y * f;
  return (1.0 - c * y * y_bar) * (hinge > 0.0 ? hinge : 0.0);
}

/// Batch-mean loss and its exact (sub)gradient for a two-layer net, as plain
/// loops. This is the reference the Eigen trainer is cross-checked against and
/// the gradient the layerwise algorithms use. ReLU and hinge subgradients take
/// the value 0 at their kinks.
struct TwoLayerGrads {
  double loss = 0.0;
  std::vector<double> ga, gw, gb;
};

[[nodiscard]] inline TwoLayerGrads two_layer_loss_gradients(const TwoLayerNet& net,
                                                            const std::vector<HypercubeInput>& xs,
                                                            const std::vector<int>& ys, LossKind kind,
                                                            double cov_c = 2.0, double y_bar = 0.0) {
  require(!xs.empty() && xs.size() == ys.size(), ErrorCode::argument, "gradient batch must be non-empty and aligned");
  if (kind == LossKind::COVARIANCE)
    require(cov_c * std::abs(y_bar) < 1.0, ErrorCode::invalid_covariance_weight,
            "covariance loss needs c*|mean label| < 1");
  TwoLayerGrads g;
  g.ga.assign(net.a.size(), 0.0);
  g.gw.assign(net.w.size(), 0.0);
  g.gb.assign(net.b.size(), 0.0);
  const double inv_m = 1.0 / static_cast<double>(xs.size());
  std::vector<double> phi(static_cast<std::size_t>(net.n));
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const HypercubeInput& x = xs[t];
    require(x.dim() == net.d, ErrorCode::dimension_mismatch, "gradient input dim mismatch");
    const double y = ys[t];
    double f = 0.0;
    for (int j = 0; j < net.n; ++j) {
      double z = net.b[static_cast<std::size_t>(j)];
      const double* row = net.w.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(net.d);
      for (int i = 0; i < net.d; ++i) z += row[i] * x.bits()[static_cast<std::size_t>(i)];
      phi[static_cast<std::size_t>(j)] = z > 0.0 ? z : 0.0;
      f += net.a[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
    }
    double df = 0.0;  // d loss / d f for this sample
    if (kind == LossKind::SQUARE) {
      g.loss += (y - f) * (y - f) * inv_m;
      df = 2.0 * (f - y);
    } else {
      const double hinge = 1.0 - y * f;
      const double w = kind == LossKind::COVARIANCE ? 1.0 - cov_c * y * y_bar : 1.0;
      g.loss += w * (hinge > 0.0 ? hinge : 0.0) * inv_m;
      df = hinge > 0.0 ? -w * y : 0.0;
    }
    if (df == 0.0) continue;
    const double scale = df * inv_m;
    for (int j = 0; j < net.n; ++j) {
      const double p = phi[static_cast<std::size_t>(j)];
      g.ga[static_cast<std::size_t>(j)] += scale * p;
      if (p > 0.0) {
        const double da = scale * net.a[static_cast<std::size_t>(j)];
        g.gb[static_cast<std::size_t>(j)] += da;
        double* grow = g.gw.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(net.d);
        for (int i = 0; i < net.d; ++i) grow[i] += da * x.bits()[static_cast<std::size_t>(i)];
      }
    }
  }
  return g;
}

/// Reference batch square-loss gradient for the multi-layer net; same
/// conventions as the two-layer version.
struct MlpGrads {
  double loss = 0.0;
  std::vector<std::vector<double>> gw, gbias;
  std::vector<double> ghead;
};

[[nodiscard]] inline MlpGrads mlp_square_loss_gradients(const MultiLayerNet& net,
                                                        const std::vector<HypercubeInput>& xs,
                                                        const std::vector<int>& ys) {
  require(!xs.empty() && xs.size() == ys.size(), ErrorCode::argument, "gradient batch must be non-empty and aligned");
  MlpGrads g;
  for (std::size_t l = 0; l < net.widths.size(); ++l) {
    g.gw.emplace_back(net.w[l].size(), 0.0);
    g.gbias.emplace_back(net.bias[l].size(), 0.0);
  }
  g.ghead.assign(net.head.size(), 0.0);
  const double inv_m = 1.0 / static_cast<double>(xs.size());
  const std::size_t depth = net.widths.size();
  for (std::size_t t = 0; t < xs.size(); ++t) {
    require(xs[t].dim() == net.d, ErrorCode::dimension_mismatch, "gradient input dim mismatch");
    const double y = ys[t];
    std::vector<std::vector<double>> acts(depth + 1);
    acts[0].assign(xs[t].bits().begin(), xs[t].bits().end());
    for (std::size_t l = 0; l < depth; ++l) {
      const int h = net.widths[l];
      const int fan_in = static_cast<int>(acts[l].size());
      acts[l + 1].assign(static_cast<std::size_t>(h), 0.0);
      for (int j = 0; j < h; ++j) {
        double z = net.bias[l][static_cast<std::size_t>(j)];
        const double* row = net.w[l].data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(fan_in);
        for (int i = 0; i < fan_in; ++i) z += row[i] * acts[l][static_cast<std::size_t>(i)];
        acts[l + 1][static_cast<std::size_t>(j)] = z > 0.0 ? z : 0.0;
      }
    }
    double f = 0.0;
    for (std::size_t j = 0; j < net.head.size(); ++j) f += net.head[j] * acts[depth][j];
    g.loss += (y - f) * (y - f) * inv_m;
    const double df = 2.0 * (f - y) * inv_m;
    std::vector<double> dact(net.head.size());
    for (std::size_t j = 0; j < net.head.size(); ++j) {
      g.ghead[j] += df * acts[depth][j];
      dact[j] = df * net.head[j];
    }
    for (std::size_t l = depth; l-- > 0;) {
      const int h = net.widths[l];
      const int fan_in = static_cast<int>(acts[l].size());
      std::vector<double> dprev(static_cast<std::size_t>(fan_in), 0.0);
      for (int j = 0; j < h; ++j) {
        if (acts[l + 1][static_cast<std::size_t>(j)] <= 0.0) continue;  // ReLU inactive
        const double dz = dact[static_cast<std::size_t>(j)];
        g.gbias[l][static_cast<std::size_t>(j)] += dz;
        const double* row = net.w[l].data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(fan_in);
        double* grow = g.gw[l].data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(fan_in);
        for (int i = 0; i < fan_in; ++i) {
          grow[i] += dz * acts[l][static_cast<std::size_t>(i)];
          dprev[static_cast<std::size_t>(i)] += dz * row[i];
        }
      }
      dact = std::move(dprev);
    }
  }
  return g;
}

namespace detail {

/// Eigen parameter stack for the SGD loop; layer l maps fan_in -> widths[l]
/// with ReLU, the head is linear with no bias.
struct SgdStack {
  int d = 0;
  std::vector<int> widths;
  std::vector<Eigen::MatrixXd> w;  // h_l x fan_in
  std::vector<Eigen::VectorXd> b;
  Eigen::VectorXd head;
};

[[nodiscard]] inline SgdStack stack_uniform_init(int d, std::vector<int> widths, Rng& rng) {
  SgdStack s;
  s.d = d;
  s.widths = std::move(widths);
  int fan_in = d;
  for (int h : s.widths) {
    Eigen::MatrixXd w(h, fan_in);
    Eigen::VectorXd b(h);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int j = 0; j < h; ++j)
      for (int i = 0; i < fan_in; ++i) w(j, i) = bound * (2.0 * rng.uniform01() - 1.0);
    for (int j = 0; j < h; ++j) b(j) = bound * (2.0 * rng.uniform01() - 1.0);
    s.w.push_back(std::move(w));
    s.b.push_back(std::move(b));
    fan_in = h;
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(s.widths.back()));
  s.head.resize(s.widths.back());
  for (int j = 0; j < s.widths.back(); ++j) s.head(j) = bound * (2.0 * rng.uniform01() - 1.0);
  return s;
}

inline void fill_inputs(const std::vector<HypercubeInput>& xs, Eigen::MatrixXd& X) {
  X.resize(static_cast<Eigen::Index>(xs.size()), xs.front().dim());
  for (std::size_t t = 0; t < xs.size(); ++t)
    for (int i = 0; i < xs[t].dim(); ++i)
      X(static_cast<Eigen::Index>(t), i) = xs[t].bits()[static_cast<std::size_t>(i)];
}

/// Batch forward through the stack; acts[0] = X, acts[l+1] = ReLU layer l.
inline Eigen::VectorXd stack_forward(const SgdStack& s, const Eigen::MatrixXd& X,
                                     std::vector<Eigen::MatrixXd>& acts) {
  acts.resize(s.widths.size() + 1);
  acts[0] = X;
  for (std::size_t l = 0; l < s.widths.size(); ++l)
    acts[l + 1] = ((acts[l] * s.w[l].transpose()).rowwise() + s.b[l].transpose()).cwiseMax(0.0);
  return acts.back() * s.head;
}

/// 0-1 error of sign(forward) against fixed labels, sign(0) = +1.
[[nodiscard]] inline double stack_error(const SgdStack& s, const Eigen::MatrixXd& X,
                                        const std::vector<int>& ys) {
  std::vector<Eigen::MatrixXd> acts;
  const Eigen::VectorXd f = stack_forward(s, X, acts);
  long wrong = 0;
  for (Eigen::Index t = 0; t < f.size(); ++t) {
    const int sign = f(t) >= 0.0 ? +1 : -1;
    if (sign != ys[static_cast<std::size_t>(t)]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(f.size());
}

struct SgdRun {
  SgdStack stack;
  std::vector<MetricsRow> rows;
  bool early_stopped = false;
  long long steps_run = 0;
};

/// The joint-SGD loop shared by the two-layer and multi-layer trainers.
/// Square loss, constant lr, fresh batch per step (or one fixed batch when
/// fresh_samples is off). Rng streams: 0 init, 1 batches, 2 target test set,
/// 3 train-dist test set. Rows are recorded after the update at every
/// eval_every-th step and at the final step; train_loss is the batch loss the
/// step saw before its update.
[[nodiscard]] inline SgdRun run_joint_sgd(const TrainConfig& cfg, std::vector<int> widths,
                                          const LabeledSource& train_src, const EvalSources& evals) {
  require(cfg.loss == LossKind::SQUARE, ErrorCode::argument, "joint SGD trains the square loss only");
  require(cfg.init == InitKind::STANDARD_UNIFORM, ErrorCode::argument,
          "joint SGD uses the standard uniform init only");
  require(cfg.lr >= 0.0, ErrorCode::argument, "learning rate must be >= 0");
  require(cfg.batch >= 1, ErrorCode::argument, "batch must be >= 1");
  require(cfg.steps >= 1, ErrorCode::argument, "steps must be >= 1");
  require(cfg.eval_every >= 1, ErrorCode::argument, "eval_every must be >= 1");
  require(cfg.n_test >= 1, ErrorCode::argument, "n_test must be >= 1");
  const int d = dist_dim(train_src.dist);
  require(dist_dim(evals.target.dist) == d && dist_dim(evals.train_dist.dist) == d,
          ErrorCode::dimension_mismatch, "eval sources must share the training dimension");

  const Rng master(cfg.seed);
  Rng init_rng = master.split(0);
  Rng batch_rng = master.split(1);
  Rng eval_target_rng = master.split(2);
  Rng eval_train_rng = master.split(3);

  SgdRun run;
  run.stack = stack_uniform_init(d, std::move(widths), init_rng);

  // Fixed test sets: the standard held-out protocol, and what keeps eval cost
  // and determinism independent of the training stream.
  const LabeledSample test_target = draw_sample(evals.target, eval_target_rng, static_cast<std::size_t>(cfg.n_test));
  const LabeledSample test_train = draw_sample(evals.train_dist, eval_train_rng, static_cast<std::size_t>(cfg.n_test));
  Eigen::MatrixXd Xt_target, Xt_train;
  fill_inputs(test_target.xs, Xt_target);
  fill_inputs(test_train.xs, Xt_train);

  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  if (!cfg.fresh_samples) {
    const LabeledSample s = draw_sample(train_src, batch_rng, static_cast<std::size_t>(cfg.batch));
    fill_inputs(s.xs, X);
    y.resize(cfg.batch);
    for (int t = 0; t < cfg.batch; ++t) y(t) = s.ys[static_cast<std::size_t>(t)];
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto record = [&](long long step, double loss) {
    MetricsRow row;
    row.step = step;
    row.samples_seen = cfg.fresh_samples ? step * cfg.batch : cfg.batch;
    row.train_loss = loss;
    row.test_error_target = stack_error(run.stack, Xt_target, test_target.ys);
    row.test_error_train_dist = stack_error(run.stack, Xt_train, test_train.ys);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    run.rows.push_back(row);
  };

  const std::size_t depth = run.stack.widths.size();
  std::vector<Eigen::MatrixXd> acts;
  for (long long step = 1; step <= cfg.steps; ++step) {
    if (cfg.fresh_samples) {
      const LabeledSample s = draw_sample(train_src, batch_rng, static_cast<std::size_t>(cfg.batch));
      fill_inputs(s.xs, X);
      y.resize(cfg.batch);
      for (int t = 0; t < cfg.batch; ++t) y(t) = s.ys[static_cast<std::size_t>(t)];
    }
    const Eigen::VectorXd f = stack_forward(run.stack, X, acts);
    const Eigen::VectorXd e = f - y;
    const double loss = e.squaredNorm() / static_cast<double>(cfg.batch);
    if (!std::isfinite(loss))
      fail(ErrorCode::divergence, "training loss diverged (non-finite) at step " + std::to_string(step));
    run.steps_run = step;

    Eigen::MatrixXd dact = (2.0 / static_cast<double>(cfg.batch)) * e * run.stack.head.transpose();
    const Eigen::VectorXd ghead =
        acts[depth].transpose() * ((2.0 / static_cast<double>(cfg.batch)) * e);
    std::vector<Eigen::MatrixXd> gw(depth);
    std::vector<Eigen::VectorXd> gb(depth);
    for (std::size_t l = depth; l-- > 0;) {
      const Eigen::MatrixXd dz = dact.cwiseProduct((acts[l + 1].array() > 0.0).cast<double>().matrix());
      gw[l] = dz.transpose() * acts[l];
      gb[l] = dz.colwise().sum().transpose();
      if (l > 0) dact = dz * run.stack.w[l];
    }
    run.stack.head -= cfg.lr * ghead;
    for (std::size_t l = 0; l < depth; ++l) {
      run.stack.w[l] -= cfg.lr * gw[l];
      run.stack.b[l] -= cfg.lr * gb[l];
    }

    if (loss < cfg.early_stop_loss) {
      run.early_stopped = true;
      record(step, loss);
      return run;
    }
    if (step % cfg.eval_every == 0 || step == cfg.steps) record(step, loss);
  }
  return run;
}

}  // namespace detail

struct TrainResult {
  TwoLayerNet net;
  std::vector<MetricsRow> rows;
  bool early_stopped = false;
  long long steps_run = 0;
};

/// Joint SGD on a two-layer net of cfg.width hidden units: square loss, fresh
/// batch per step, both layers updated with constant cfg.lr; early-stops when
/// the batch loss drops below cfg.early_stop_loss. Binding cfg fields: loss,
/// lr, batch, steps, width, init, eval_every, seed, fresh_samples,
/// early_stop_loss, n_test.
[[nodiscard]] inline TrainResult train_joint_sgd(const TrainConfig& cfg, const LabeledSource& train_src,
                                                 const EvalSources& evals) {
  require(cfg.width >= 1, ErrorCode::argument, "width must be >= 1");
  detail::SgdRun run = detail::run_joint_sgd(cfg, {cfg.width}, train_src, evals);
  TrainResult res;
  res.rows = std::move(run.rows);
  res.early_stopped = run.early_stopped;
  res.steps_run = run.steps_run;
  res.net = make_zero_net(cfg.width, run.stack.d);
  for (int j = 0; j < cfg.width; ++j) {
    res.net.a[static_cast<std::size_t>(j)] = run.stack.head(j);
    res.net.b[static_cast<std::size_t>(j)] = run.stack.b[0](j);
    for (int i = 0; i < run.stack.d; ++i)
      res.net.w[static_cast<std::size_t>(j) * static_cast<std::size_t>(run.stack.d) +
                static_cast<std::size_t>(i)] = run.stack.w[0](j, i);
  }
  return res;
}

struct MlpTrainResult {
  MultiLayerNet net;
  std::vector<MetricsRow> rows;
  bool early_stopped = false;
  long long steps_run = 0;
};

/// Same loop as train_joint_sgd generalized to a ReLU stack with the given
/// hidden widths; cfg.width is ignored.
[[nodiscard]] inline MlpTrainResult train_mlp_sgd(const TrainConfig& cfg, std::vector<int> hidden_widths,
                                                  const LabeledSource& train_src, const EvalSources& evals) {
  require(!hidden_widths.empty(), ErrorCode::argument, "mlp needs at least one hidden layer");
  for (int h : hidden_widths) require(h >= 1, ErrorCode::argument, "mlp widths must be >= 1");
  detail::SgdRun run = detail::run_joint_sgd(cfg, hidden_widths, train_src, evals);
  MlpTrainResult res;
  res.rows = std::move(run.rows);
  res.early_stopped = run.early_stopped;
  res.steps_run = run.steps_run;
  res.net = make_zero_mlp(run.stack.d, std::move(hidden_widths));
  for (std::size_t l = 0; l < res.net.widths.size(); ++l) {
    const int h = res.net.widths[l];
    const int fan_in = l == 0 ? res.net.d : res.net.widths[l - 1];
    for (int j = 0; j < h; ++j) {
      res.net.bias[l][static_cast<std::size_t>(j)] = run.stack.b[l](j);
      for (int i = 0; i < fan_in; ++i)
        res.net.w[l][static_cast<std::size_t>(j) * static_cast<std::size_t>(fan_in) +
                     static_cast<std::size_t>(i)] = run.stack.w[l](j, i);
    }
  }
  for (std::size_t j = 0; j < res.net.head.size(); ++j) res.net.head[j] = run.stack.head(static_cast<Eigen::Index>(j));
  return res;
}

}  // namespace pdslab
