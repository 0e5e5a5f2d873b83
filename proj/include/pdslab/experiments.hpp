#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdslab/circuit.hpp"
#include "pdslab/config.hpp"
#include "pdslab/correlation_parity.hpp"
#include "pdslab/csq_junta.hpp"
#include "pdslab/csv.hpp"
#include "pdslab/fpds_circuit.hpp"
#include "pdslab/labels.hpp"
#include "pdslab/named_distributions.hpp"
#include "pdslab/predict_error.hpp"
#include "pdslab/query_models.hpp"
#include "pdslab/svg.hpp"
#include "pdslab/targets.hpp"
#include "pdslab/train.hpp"

#ifndef PDSLAB_BUILD_ID
#define PDSLAB_BUILD_ID "unknown"
#endif

namespace pdslab {

/// One unit of work: a single (arm, eta, trial) cell. `label` tags the arm
/// for multi-arm kinds (transfer-panel, sweep) and stays empty otherwise;
/// `d` is the grid dimension for sweep cells and the config d elsewhere.
struct TrialOutcome {
  std::string label;
  double eta = 0.0;
  int d = 0;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  bool ok = true;
  std::string error_message;
  std::vector<CsvRow> rows;
  std::map<std::string, double> stats;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<TrialOutcome> trials;
  std::string run_dir;
  std::string build_id;
  double wall_seconds = 0.0;
};

/// (master, stream, trial) -> independent trial seed. Streams enumerate
/// (arm, eta) cells positionally, so duplicated sweep grid points still get
/// distinct seeds.
[[nodiscard]] inline std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t stream, int trial) {
  return Rng(master).split(stream).split(static_cast<std::uint64_t>(trial)).next_u64();
}

/// Runs independent closures on up to `threads` workers; completion order
/// does not matter because every task writes only to its own result slot.
inline void run_tasks(std::vector<std::function<void()>>& tasks, unsigned threads) {
  if (tasks.empty()) return;
  threads = std::max(1u, std::min(threads, static_cast<unsigned>(tasks.size())));
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

inline constexpr std::array<std::string_view, 3> kTransferArms = {"train-uniform", "train-mixture",
                                                                  "train-biased"};
inline constexpr std::array<std::string_view, 2> kSweepArms = {"pds", "no-pds"};

namespace detail {

[[nodiscard]] inline std::vector<int> leading_support(int k) {
  std::vector<int> s(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i + 1;
  return s;
}

[[nodiscard]] inline InputDistribution build_train_distribution(const ExperimentConfig& cfg, int d, Rng& rng) {
  return build_named_distribution(cfg.distribution.name, d, leading_support(cfg.k), cfg.distribution.mu, rng);
}

/// Empirical Pr[predict(x) != y] on n fresh draws from src (noisy labels).
template <class Predict>
[[nodiscard]] double sampled_disagreement(Predict&& predict, const LabeledSource& src, int n, Rng& rng) {
  const LabeledSample s = draw_sample(src, rng, static_cast<std::size_t>(n));
  long wrong = 0;
  for (std::size_t t = 0; t < s.xs.size(); ++t)
    if (predict(s.xs[t]) != s.ys[t]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(n);
}

/// Identity columns filled, measurement columns NaN until a runner sets them.
[[nodiscard]] inline CsvRow base_row(const TrialOutcome& out, int k) {
  CsvRow r;
  r.seed = out.trial_seed;
  r.eta = out.eta;
  r.d = out.d;
  r.k = k;
  r.train_loss = std::numeric_limits<double>::quiet_NaN();
  r.test_error_target = std::numeric_limits<double>::quiet_NaN();
  r.test_error_train_dist = std::numeric_limits<double>::quiet_NaN();
  return r;
}

inline void run_parity_correlation_trial(const ExperimentConfig& cfg, TrialOutcome& out) {
  Rng root(out.trial_seed);
  Rng dist_rng = root.split(0);
  Rng data_rng = root.split(1);
  Rng eval_rng = root.split(2);
  const InputDistribution dist = build_train_distribution(cfg, out.d, dist_rng);
  const ParityTarget target = make_parity(out.d, leading_support(cfg.k));
  const LabeledSource src = make_source(dist, Target{target}, make_noise(out.eta));
  const LabeledSample sample = draw_sample(src, data_rng, static_cast<std::size_t>(cfg.sample_budget));
  const CorrelationLearnResult res = learn_parity_correlation(sample.xs, sample.ys, out.d);

  double in_sum = 0.0, off_sum = 0.0;
  for (int i = 1; i <= out.d; ++i) {
    const bool in = i <= cfg.k;  // leading support
    (in ? in_sum : off_sum) += res.correlations[static_cast<std::size_t>(i - 1)];
  }
  const double gap = in_sum / cfg.k - (out.d > cfg.k ? off_sum / (out.d - cfg.k) : 0.0);

  const LabeledSource target_src = make_source(make_uniform(out.d), Target{target}, make_noise(out.eta));
  const auto predict = [&](const HypercubeInput& x) { return eval_parity(res.parity, x); };
  CsvRow row = base_row(out, cfg.k);
  row.samples_seen = cfg.sample_budget;
  row.test_error_target = sampled_disagreement(predict, target_src, cfg.train.n_test, eval_rng);
  row.test_error_train_dist = sampled_disagreement(predict, src, cfg.train.n_test, eval_rng);
  out.rows.push_back(row);
  out.stats["support_recovered"] = res.parity.support == target.support ? 1.0 : 0.0;
  out.stats["correlation_gap"] = gap;
  out.stats["error_target"] = row.test_error_target;
  out.stats["error_train_dist"] = row.test_error_train_dist;
}

inline void run_junta_csq_trial(const ExperimentConfig& cfg, TrialOutcome& out) {
  Rng root(out.trial_seed);
  Rng target_rng = root.split(0);
  Rng eval_rng = root.split(2);
  const JuntaTarget target = random_visible_junta(out.d, cfg.k, target_rng);
  CsqOracle oracle = CsqOracle::exact(Target{target}, out.eta, out.d, cfg.k);
  const CsqLearnResult res = csq_learn_junta(oracle, out.d, cfg.k, out.eta);

  const double expected = static_cast<double>(cfg.k) + static_cast<double>(out.d) * cfg.k +
                          std::pow(2.0, static_cast<double>(res.chosen_support.size()));
  const LabeledSource target_src = make_source(make_uniform(out.d), Target{target}, make_noise(out.eta));
  const auto predict = [&](const HypercubeInput& x) { return eval_target(Target{res.junta}, x); };
  CsvRow row = base_row(out, cfg.k);
  row.test_error_target = sampled_disagreement(predict, target_src, cfg.train.n_test, eval_rng);
  out.rows.push_back(row);
  out.stats["exact_recovery"] = res.junta == target ? 1.0 : 0.0;
  out.stats["queries"] = static_cast<double>(res.queries);
  out.stats["queries_match_formula"] = static_cast<double>(res.queries) == expected ? 1.0 : 0.0;
  out.stats["error_target"] = row.test_error_target;
}

/// Scan rule for sample complexity: the samples_seen of the first eval in
/// the first run of 3 consecutive evals with target error below threshold.
[[nodiscard]] inline std::pair<bool, long long> samples_to_threshold(const std::vector<MetricsRow>& rows,
                                                                     double threshold) {
  int streak = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    streak = rows[i].test_error_target < threshold ? streak + 1 : 0;
    if (streak == 3) return {true, rows[i - 2].samples_seen};
  }
  return {false, -1};
}

/// Shared SGD leg: trains on (dist, target, eta), fills rows and the stats
/// every neural kind reports, and hands the net back for extra read-outs.
[[nodiscard]] inline TrainResult run_training_trial(const ExperimentConfig& cfg, InputDistribution dist,
                                                    const Target& target, TrialOutcome& out) {
  const LabeledSource train_src = make_source(std::move(dist), target, make_noise(out.eta));
  const EvalSources evals{make_source(make_uniform(out.d), target, make_noise(out.eta)), train_src};
  TrainConfig tc = cfg.train;
  tc.seed = out.trial_seed;
  TrainResult res = train_joint_sgd(tc, train_src, evals);

  out.rows.reserve(res.rows.size());
  for (const MetricsRow& m : res.rows) {
    CsvRow row = base_row(out, cfg.k);
    row.step = m.step;
    row.samples_seen = m.samples_seen;
    row.train_loss = m.train_loss;
    row.test_error_target = m.test_error_target;
    row.test_error_train_dist = m.test_error_train_dist;
    out.rows.push_back(row);
  }
  const auto [converged, samples] = samples_to_threshold(res.rows, out.eta + cfg.threshold_margin);
  out.stats["final_error_target"] = res.rows.empty() ? 1.0 : res.rows.back().test_error_target;
  out.stats["final_error_train_dist"] = res.rows.empty() ? 1.0 : res.rows.back().test_error_train_dist;
  out.stats["steps_run"] = static_cast<double>(res.steps_run);
  out.stats["early_stopped"] = res.early_stopped ? 1.0 : 0.0;
  out.stats["converged"] = converged ? 1.0 : 0.0;
  out.stats["samples_to_threshold"] = static_cast<double>(samples);
  return res;
}

inline void run_train_kind_trial(const ExperimentConfig& cfg, bool junta, TrialOutcome& out) {
  Rng dist_rng = Rng(out.trial_seed).split(8);  // meta-draw stream; the trainer owns 0..3
  const InputDistribution dist = build_train_distribution(cfg, out.d, dist_rng);
  const Target target =
      junta ? Target{build_fk(cfg.k, out.d)} : Target{make_parity(out.d, leading_support(cfg.k))};
  (void)run_training_trial(cfg, dist, target, out);
}

inline void run_transfer_trial(const ExperimentConfig& cfg, std::size_t arm, TrialOutcome& out) {
  const double mu = cfg.distribution.mu;
  InputDistribution dist = arm == 0   ? make_uniform(out.d)
                           : arm == 1 ? fig1_mixture(out.d, mu)
                                      : biased_product(out.d, mu);
  const Target target = Target{make_parity(out.d, leading_support(cfg.k))};
  const TrainResult res = run_training_trial(cfg, std::move(dist), target, out);

  // Panel read-out: the same net judged on both test distributions.
  Rng panel_rng = Rng(out.trial_seed).split(9);
  const LabeledSource on_uniform = make_source(make_uniform(out.d), target, make_noise(out.eta));
  const LabeledSource on_biased = make_source(biased_product(out.d, mu), target, make_noise(out.eta));
  out.stats["error_on_uniform"] = zero_one_error_sampled(res.net, on_uniform, cfg.train.n_test, panel_rng);
  out.stats["error_on_biased"] = zero_one_error_sampled(res.net, on_biased, cfg.train.n_test, panel_rng);
}

inline void run_sweep_trial(const ExperimentConfig& cfg, bool pds_arm, TrialOutcome& out) {
  Rng dist_rng = Rng(out.trial_seed).split(8);
  InputDistribution dist =
      pds_arm ? build_train_distribution(cfg, out.d, dist_rng) : make_uniform(out.d);
  const Target target = Target{build_fk(cfg.k, out.d)};
  (void)run_training_trial(cfg, std::move(dist), target, out);
}

inline void run_fpds_codec_trial(const ExperimentConfig& cfg, TrialOutcome& out) {
  Rng root(out.trial_seed);
  Rng circuit_rng = root.split(0);
  Rng draw_rng = root.split(1);
  Rng eval_rng = root.split(2);
  const BooleanCircuit circuit = random_circuit(out.d, cfg.gates, circuit_rng);
  const FpdsEncoding enc = fpds_encode_circuit(circuit, out.d, cfg.codec_w);
  const std::uint64_t m = cfg.sample_budget > 0 ? static_cast<std::uint64_t>(cfg.sample_budget)
                                                : codec_sample_bound(enc.code.r, 0.01);
  const IndexCounts counts = fpds_draw_counts(enc, m, draw_rng);
  const FpdsHypothesis hyp = fpds_learn_circuit(counts, out.d, cfg.codec_w);

  long agree = 0;
  const InputDistribution uniform = make_uniform(out.d);
  for (int t = 0; t < cfg.train.n_test; ++t) {
    const HypercubeInput x = sample_one(uniform, eval_rng);
    if (hyp.predict(x) == eval_circuit(circuit, x)) ++agree;
  }
  const double agreement = static_cast<double>(agree) / cfg.train.n_test;
  CsvRow row = base_row(out, cfg.k);
  row.samples_seen = static_cast<long long>(m);
  row.test_error_target = 1.0 - agreement;
  out.rows.push_back(row);
  out.stats["agreement"] = agreement;
  out.stats["fallback_used"] = hyp.fallback_used ? 1.0 : 0.0;
  out.stats["payload_bits"] = static_cast<double>(enc.code.r);
}

inline void run_namq_reduction_trial(const ExperimentConfig& cfg, TrialOutcome& out) {
  Rng root(out.trial_seed);
  Rng dist_rng = root.split(0);
  const std::uint64_t design_seed = root.split(4).next_u64();
  Rng eval_rng = root.split(7);
  const InputDistribution dist = build_train_distribution(cfg, out.d, dist_rng);
  const ParityTarget target = make_parity(out.d, leading_support(cfg.k));
  const LabeledSource src = make_source(dist, Target{target}, make_noise(out.eta));

  NAMQLearner<ParityHypothesis> learner =
      make_correlation_namq_learner(dist, static_cast<std::size_t>(cfg.sample_budget), design_seed);
  Rng reduction_rng(out.trial_seed);
  ReductionReport<ParityHypothesis> report =
      namq_to_rdspac(learner, src, cfg.delta, cfg.coupon_c, ParityHypothesis{}, reduction_rng);
  const LabeledSource clean_target = make_source(make_uniform(out.d), Target{target}, make_noise(0.0));
  report.measured_error = reduction_error(report.hypothesis, clean_target, cfg.train.n_test, eval_rng);

  CsvRow row = base_row(out, cfg.k);
  row.samples_seen = static_cast<long long>(report.samples_used);
  row.test_error_target = report.measured_error;
  out.rows.push_back(row);
  out.stats["coverage_achieved"] = report.coverage_achieved ? 1.0 : 0.0;
  out.stats["fallback_used"] = report.fallback_used ? 1.0 : 0.0;
  out.stats["distinct_points"] = static_cast<double>(report.distinct_points);
  out.stats["samples_used"] = static_cast<double>(report.samples_used);
  out.stats["support_recovered"] =
      report.hypothesis.parity && report.hypothesis.parity->support == target.support ? 1.0 : 0.0;
  out.stats["error_target"] = report.measured_error;
}

/// A cell is one (label, eta, d) column of the run; cells × trials = tasks.
struct CellPlan {
  std::string label;
  double eta = 0.0;
  int d = 0;
  std::size_t arm = 0;
};

[[nodiscard]] inline std::vector<CellPlan> plan_cells(const ExperimentConfig& cfg) {
  std::vector<CellPlan> cells;
  switch (cfg.kind) {
    case ExperimentKind::TRANSFER_PANEL:
      for (std::size_t arm = 0; arm < kTransferArms.size(); ++arm)
        for (double eta : cfg.etas) cells.push_back({std::string(kTransferArms[arm]), eta, cfg.d, arm});
      break;
    case ExperimentKind::SWEEP:
      for (int d : cfg.sweep_d)
        for (double eta : cfg.etas)
          for (std::size_t arm = 0; arm < kSweepArms.size(); ++arm)
            cells.push_back({std::string(kSweepArms[arm]), eta, d, arm});
      break;
    default:
      for (double eta : cfg.etas) cells.push_back({"", eta, cfg.d, 0});
  }
  return cells;
}

inline void run_cell_trial(const ExperimentConfig& cfg, const CellPlan& cell, TrialOutcome& out) {
  switch (cfg.kind) {
    case ExperimentKind::PARITY_CORRELATION:
      run_parity_correlation_trial(cfg, out);
      break;
    case ExperimentKind::JUNTA_CSQ:
      run_junta_csq_trial(cfg, out);
      break;
    case ExperimentKind::TRAIN_PARITY:
      run_train_kind_trial(cfg, false, out);
      break;
    case ExperimentKind::TRAIN_JUNTA:
      run_train_kind_trial(cfg, true, out);
      break;
    case ExperimentKind::FPDS_CODEC:
      run_fpds_codec_trial(cfg, out);
      break;
    case ExperimentKind::NAMQ_REDUCTION:
      run_namq_reduction_trial(cfg, out);
      break;
    case ExperimentKind::TRANSFER_PANEL:
      run_transfer_trial(cfg, cell.arm, out);
      break;
    case ExperimentKind::SWEEP:
      run_sweep_trial(cfg, cell.arm == 0, out);
      break;
  }
}

[[nodiscard]] inline std::string output_root(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("PDSLAB_OUT"); env != nullptr && *env != '\0') return env;
  return "runs";
}

/// `<kind>-<UTC stamp>-seed<master>`, suffixed -2, -3, ... rather than ever
/// reusing an existing directory.
[[nodiscard]] inline std::string make_run_dir(const ExperimentConfig& cfg) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y%m%d-%H%M%S", &tm);
  const std::string base = output_root(cfg) + "/" + std::string(kind_name(cfg.kind)) + "-" + ts + "-seed" +
                           std::to_string(cfg.master_seed);
  std::string dir = base;
  for (int suffix = 2; std::filesystem::exists(dir); ++suffix) dir = base + "-" + std::to_string(suffix);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create run directory: " + dir + " (" + ec.message() + ")");
  return dir;
}

[[nodiscard]] inline nlohmann::ordered_json summary_json(const RunResult& res,
                                                         const std::vector<CellPlan>& cells) {
  nlohmann::ordered_json summary;
  summary["kind"] = std::string(kind_name(res.config.kind));
  summary["build_id"] = res.build_id;
  summary["master_seed"] = res.config.master_seed;
  summary["wall_seconds"] = res.wall_seconds;
  summary["trials"] = nlohmann::ordered_json::array();
  for (const TrialOutcome& out : res.trials) {
    nlohmann::ordered_json t;
    t["label"] = out.label;
    t["eta"] = out.eta;
    t["d"] = out.d;
    t["trial"] = out.trial;
    t["seed"] = out.trial_seed;
    t["ok"] = out.ok;
    if (!out.ok) t["error_message"] = out.error_message;
    t["stats"] = out.stats;
    summary["trials"].push_back(std::move(t));
  }
  summary["aggregates"] = nlohmann::ordered_json::array();
  const int trials = res.config.trials;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    nlohmann::ordered_json agg;
    agg["label"] = cells[ci].label;
    agg["eta"] = cells[ci].eta;
    agg["d"] = cells[ci].d;
    std::map<std::string, std::vector<double>> columns;
    int n_ok = 0;
    for (int t = 0; t < trials; ++t) {
      const TrialOutcome& out = res.trials[ci * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (!out.ok) continue;
      ++n_ok;
      for (const auto& [name, value] : out.stats) columns[name].push_back(value);
    }
    agg["n_ok"] = n_ok;
    nlohmann::ordered_json stats;
    for (const auto& [name, values] : columns) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      const double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
      stats[name] = {{"mean", mean}, {"sd", sd}};
    }
    agg["stats"] = std::move(stats);
    summary["aggregates"].push_back(std::move(agg));
  }
  return summary;
}

[[nodiscard]] inline std::vector<SvgSeries> chart_series(const RunResult& res,
                                                         const std::vector<CellPlan>& cells) {
  std::vector<SvgSeries> series;
  const int trials = res.config.trials;
  const auto cell_outcomes = [&](std::size_t ci) {
    std::vector<const TrialOutcome*> outs;
    for (int t = 0; t < trials; ++t) {
      const TrialOutcome& out = res.trials[ci * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (out.ok) outs.push_back(&out);
    }
    return outs;
  };
  const auto eta_tag = [](double eta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eta=%g", eta);
    return std::string(buf);
  };

  if (res.config.kind == ExperimentKind::SWEEP) {
    // One series per (arm, eta): mean samples-to-threshold over converged
    // trials against d; grid points with no converged trial are left out of
    // the chart (the sweep table still records them).
    for (std::string_view arm : kSweepArms)
      for (double eta : res.config.etas) {
        SvgSeries s{std::string(arm) + " " + eta_tag(eta), {}, {}};
        for (std::size_t ci = 0; ci < cells.size(); ++ci) {
          if (cells[ci].label != arm || cells[ci].eta != eta) continue;
          double sum = 0.0;
          int n = 0;
          for (const TrialOutcome* out : cell_outcomes(ci))
            if (out->stats.count("converged") && out->stats.at("converged") == 1.0) {
              sum += out->stats.at("samples_to_threshold");
              ++n;
            }
          if (n > 0) {
            s.xs.push_back(static_cast<double>(cells[ci].d));
            s.ys.push_back(sum / n);
          }
        }
        if (!s.xs.empty()) series.push_back(std::move(s));
      }
    return series;
  }

  if (kind_is_neural(res.config.kind)) {
    // One learning curve per trial.
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
      for (const TrialOutcome* out : cell_outcomes(ci)) {
        SvgSeries s;
        s.name = (out->label.empty() ? "" : out->label + " ") + eta_tag(out->eta) + " t" +
                 std::to_string(out->trial);
        for (const CsvRow& row : out->rows)
          if (std::isfinite(row.test_error_target)) {
            s.xs.push_back(static_cast<double>(row.samples_seen));
            s.ys.push_back(row.test_error_target);
          }
        if (!s.xs.empty()) series.push_back(std::move(s));
      }
    return series;
  }

  // Single-shot kinds: target error per trial, one series per cell.
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    SvgSeries s{eta_tag(cells[ci].eta), {}, {}};
    for (const TrialOutcome* out : cell_outcomes(ci))
      if (!out->rows.empty() && std::isfinite(out->rows[0].test_error_target)) {
        s.xs.push_back(static_cast<double>(out->trial));
        s.ys.push_back(out->rows[0].test_error_target);
      }
    if (!s.xs.empty()) series.push_back(std::move(s));
  }
  return series;
}

/// Sweep table: every (d, eta, arm, trial) cell, converged or not.
[[nodiscard]] inline std::string format_sweep_table(const RunResult& res) {
  std::string out = "d,eta,arm,trial,samples_to_threshold,converged\n";
  for (const TrialOutcome& t : res.trials) {
    out += std::to_string(t.d);
    out.push_back(',');
    append_double(out, t.eta);
    out.push_back(',');
    out += t.label;
    out.push_back(',');
    out += std::to_string(t.trial);
    out.push_back(',');
    const bool converged = t.ok && t.stats.count("converged") && t.stats.at("converged") == 1.0;
    const long long samples =
        converged ? static_cast<long long>(t.stats.at("samples_to_threshold")) : -1;
    out += std::to_string(samples);
    out.push_back(',');
    out += converged ? '1' : '0';
    out.push_back('\n');
  }
  return out;
}

}  // namespace detail

/// Runs every (cell, trial) task, then persists config.json, metrics.csv,
/// summary.json, chart.svg (and sweep.csv for sweeps) into a fresh run
/// directory. Trial failures are recorded, never fatal.
[[nodiscard]] inline RunResult run_experiment(const ExperimentConfig& cfg,
                                              unsigned threads = std::thread::hardware_concurrency()) {
  validate_experiment_config(cfg);
  const auto start = std::chrono::steady_clock::now();

  const std::vector<detail::CellPlan> cells = detail::plan_cells(cfg);
  RunResult res;
  res.config = cfg;
  res.build_id = PDSLAB_BUILD_ID;
  res.trials.resize(cells.size() * static_cast<std::size_t>(cfg.trials));

  std::vector<std::function<void()>> tasks;
  tasks.reserve(res.trials.size());
  for (std::size_t ci = 0; ci < cells.size(); ++ci)
    for (int t = 0; t < cfg.trials; ++t) {
      TrialOutcome& slot = res.trials[ci * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
      const detail::CellPlan& cell = cells[ci];
      slot.label = cell.label;
      slot.eta = cell.eta;
      slot.d = cell.d;
      slot.trial = t;
      slot.trial_seed = derive_trial_seed(cfg.master_seed, static_cast<std::uint64_t>(ci), t);
      tasks.emplace_back([&cfg, &cell, &slot] {
        try {
          detail::run_cell_trial(cfg, cell, slot);
        } catch (const std::exception& e) {
          slot.rows.clear();
          slot.stats.clear();
          slot.ok = false;
          slot.error_message = e.what();
        }
      });
    }
  run_tasks(tasks, threads);

  res.wall_seconds =
      std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() - start)
          .count();
  res.run_dir = detail::make_run_dir(cfg);
  write_text_file(res.run_dir + "/config.json", config_to_json(cfg).dump(2) + "\n");
  std::vector<CsvRow> all_rows;
  for (const TrialOutcome& out : res.trials) all_rows.insert(all_rows.end(), out.rows.begin(), out.rows.end());
  emit_csv(all_rows, res.run_dir + "/metrics.csv");
  write_text_file(res.run_dir + "/summary.json", detail::summary_json(res, cells).dump(2) + "\n");
  const std::vector<SvgSeries> series = detail::chart_series(res, cells);
  if (!series.empty()) {
    SvgOptions opts;
    opts.title = std::string(kind_name(cfg.kind));
    opts.x_label = cfg.kind == ExperimentKind::SWEEP ? "d"
                   : kind_is_neural(cfg.kind)        ? "samples seen"
                                                     : "trial";
    opts.y_label = cfg.kind == ExperimentKind::SWEEP ? "samples to threshold" : "test error";
    emit_svg(series, res.run_dir + "/chart.svg", opts);
  }
  if (cfg.kind == ExperimentKind::SWEEP)
    write_text_file(res.run_dir + "/sweep.csv", detail::format_sweep_table(res));
  return res;
}

/// Fig. 1 right-panel analog; requires kind=transfer-panel.
[[nodiscard]] inline RunResult run_transfer_panel(const ExperimentConfig& cfg,
                                                  unsigned threads = std::thread::hardware_concurrency()) {
  require(cfg.kind == ExperimentKind::TRANSFER_PANEL, ErrorCode::config,
          "run_transfer_panel needs kind transfer-panel");
  return run_experiment(cfg, threads);
}

/// Fig. 2 right-panel analog; requires kind=sweep.
[[nodiscard]] inline RunResult run_sweep(const ExperimentConfig& cfg,
                                         unsigned threads = std::thread::hardware_concurrency()) {
  require(cfg.kind == ExperimentKind::SWEEP, ErrorCode::config, "run_sweep needs kind sweep");
  return run_experiment(cfg, threads);
}

}  // namespace pdslab
