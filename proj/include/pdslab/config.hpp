#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pdslab/csv.hpp"
#include "pdslab/errors.hpp"
#include "pdslab/train.hpp"

namespace pdslab {

enum class ExperimentKind {
  PARITY_CORRELATION,
  JUNTA_CSQ,
  TRAIN_PARITY,
  TRAIN_JUNTA,
  FPDS_CODEC,
  NAMQ_REDUCTION,
  TRANSFER_PANEL,
  SWEEP,
};

inline constexpr std::array<std::string_view, 8> kExperimentKindNames = {
    "parity-correlation", "junta-csq",      "train-parity",   "train-junta",
    "fpds-codec",         "namq-reduction", "transfer-panel", "sweep",
};

[[nodiscard]] inline std::string_view kind_name(ExperimentKind kind) {
  return kExperimentKindNames[static_cast<std::size_t>(kind)];
}

[[nodiscard]] inline ExperimentKind kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kExperimentKindNames.size(); ++i)
    if (kExperimentKindNames[i] == name) return static_cast<ExperimentKind>(i);
  fail(ErrorCode::config, "kind must be one of the known experiments: got '" + std::string(name) + "'");
}

/// Kinds that train a network; the others call an analytic learner once.
[[nodiscard]] inline bool kind_is_neural(ExperimentKind kind) {
  return kind == ExperimentKind::TRAIN_PARITY || kind == ExperimentKind::TRAIN_JUNTA ||
         kind == ExperimentKind::TRANSFER_PANEL || kind == ExperimentKind::SWEEP;
}

/// Training-distribution choice: a registered name plus its scalar bias
/// parameter (used by fig1-mixture and biased-product; ignored elsewhere).
struct DistributionSpec {
  std::string name = "uniform";
  double mu = 0.96;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

inline constexpr std::array<std::string_view, 7> kDistributionNames = {
    "uniform",           "thm3-parity",  "thm4-parity-slice", "fpds-parity-DS",
    "rdspac-junta-meta", "fig1-mixture", "biased-product",
};

/// One experiment: what to run, at what sizes, over which noise rates, and
/// where to write results. Parsed from a versioned JSON file; unknown keys
/// are rejected so typos cannot silently revert to defaults.
struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::PARITY_CORRELATION;
  int d = 0;
  int k = 0;
  std::vector<double> etas = {0.0};
  DistributionSpec distribution;
  TrainConfig train;  // seed is overwritten per trial; init stays library-default
  int trials = 5;
  std::uint64_t master_seed = 0;
  std::string out_dir;             // empty: $PDSLAB_OUT, then ./runs
  long long sample_budget = 0;     // parity-correlation / namq-reduction draw count
  int gates = 50;                  // fpds-codec circuit size
  double codec_w = 0.5;            // fpds-codec planted-half weight
  std::vector<int> sweep_d;        // sweep grid; may be empty (empty table)
  double threshold_margin = 0.01;  // samples-to-threshold: error < eta + margin
  double delta = 0.1;              // namq-reduction coverage failure budget
  double coupon_c = 1.0;           // namq-reduction coverage constant
};

namespace detail {

template <class T>
[[nodiscard]] inline T json_field(const nlohmann::json& j, const std::string& name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, "field " + name + ": " + e.what());
  }
}

inline void reject_unknown_keys(const nlohmann::json& j, std::string_view prefix,
                                const std::vector<std::string_view>& known) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (std::string_view k : known)
      if (item.key() == k) ok = true;
    require(ok, ErrorCode::config, "unknown config field: " + std::string(prefix) + item.key());
  }
}

}  // namespace detail

inline void validate_experiment_config(const ExperimentConfig& cfg) {
  require(cfg.schema_version == 1, ErrorCode::config,
          "schema_version must be 1: got " + std::to_string(cfg.schema_version));
  require(cfg.d >= 1, ErrorCode::config, "d must be >= 1: got " + std::to_string(cfg.d));
  if (cfg.kind != ExperimentKind::FPDS_CODEC)
    require(cfg.k >= 1 && cfg.k <= cfg.d, ErrorCode::config,
            "k must lie in [1, d]: got " + std::to_string(cfg.k));
  require(!cfg.etas.empty(), ErrorCode::config, "etas must be non-empty");
  for (std::size_t i = 0; i < cfg.etas.size(); ++i) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "etas[%zu] = %g must lie in [0, 0.5)", i, cfg.etas[i]);
    require(cfg.etas[i] >= 0.0 && cfg.etas[i] < 0.5, ErrorCode::config, msg);
  }
  bool dist_known = false;
  for (std::string_view n : kDistributionNames)
    if (cfg.distribution.name == n) dist_known = true;
  require(dist_known, ErrorCode::config, "distribution.name unknown: '" + cfg.distribution.name + "'");
  require(cfg.distribution.mu >= -1.0 && cfg.distribution.mu <= 1.0, ErrorCode::config,
          "distribution.mu must lie in [-1, 1]");
  require(cfg.trials >= 1, ErrorCode::config, "trials must be >= 1: got " + std::to_string(cfg.trials));
  require(cfg.train.lr > 0.0, ErrorCode::config, "train.lr must be positive");
  require(cfg.train.batch >= 1, ErrorCode::config, "train.batch must be >= 1");
  require(cfg.train.steps >= 1, ErrorCode::config, "train.steps must be >= 1");
  require(cfg.train.width >= 1, ErrorCode::config, "train.width must be >= 1");
  require(cfg.train.eval_every >= 1, ErrorCode::config, "train.eval_every must be >= 1");
  require(cfg.train.n_test >= 1, ErrorCode::config, "train.n_test must be >= 1");
  if (cfg.kind == ExperimentKind::PARITY_CORRELATION || cfg.kind == ExperimentKind::NAMQ_REDUCTION)
    require(cfg.sample_budget >= 1, ErrorCode::config,
            "sample_budget must be positive for kind " + std::string(kind_name(cfg.kind)));
  if (cfg.kind == ExperimentKind::FPDS_CODEC) {
    require(cfg.gates >= 1, ErrorCode::config, "gates must be >= 1");
    require(cfg.codec_w > 0.0 && cfg.codec_w < 1.0, ErrorCode::config, "codec_w must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < cfg.sweep_d.size(); ++i) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "sweep_d[%zu] = %d must be >= k", i, cfg.sweep_d[i]);
    require(cfg.sweep_d[i] >= cfg.k, ErrorCode::config, msg);
  }
  require(cfg.threshold_margin > 0.0, ErrorCode::config, "threshold_margin must be positive");
  require(cfg.delta > 0.0 && cfg.delta < 1.0, ErrorCode::config, "delta must lie in (0, 1)");
  require(cfg.coupon_c >= 1.0, ErrorCode::config, "coupon_c must be >= 1");
}

/// Parses and validates; any malformation maps to ErrorCode::config with a
/// message naming the offending field.
[[nodiscard]] inline ExperimentConfig parse_experiment_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorCode::config, "config root must be a JSON object");
  detail::reject_unknown_keys(j, "",
                              {"schema_version", "kind", "d", "k", "etas", "distribution", "train", "trials",
                               "master_seed", "out_dir", "sample_budget", "gates", "codec_w", "sweep_d",
                               "threshold_margin", "delta", "coupon_c"});
  require(j.contains("kind"), ErrorCode::config, "kind is required");
  require(j.contains("d"), ErrorCode::config, "d is required");

  ExperimentConfig cfg;
  cfg.schema_version = detail::json_field(j, "schema_version", cfg.schema_version);
  cfg.kind = kind_from_name(detail::json_field<std::string>(j, "kind", ""));
  cfg.d = detail::json_field(j, "d", cfg.d);
  cfg.k = detail::json_field(j, "k", cfg.k);
  cfg.etas = detail::json_field(j, "etas", cfg.etas);
  if (j.contains("distribution")) {
    const nlohmann::json& dj = j.at("distribution");
    require(dj.is_object(), ErrorCode::config, "distribution must be an object");
    detail::reject_unknown_keys(dj, "distribution.", {"name", "mu"});
    cfg.distribution.name = detail::json_field<std::string>(dj, "name", cfg.distribution.name);
    cfg.distribution.mu = detail::json_field(dj, "mu", cfg.distribution.mu);
  }
  if (j.contains("train")) {
    const nlohmann::json& tj = j.at("train");
    require(tj.is_object(), ErrorCode::config, "train must be an object");
    require(!tj.contains("seed"), ErrorCode::config,
            "train.seed is not configurable: trial seeds derive from master_seed");
    detail::reject_unknown_keys(tj, "train.",
                                {"loss", "lr", "batch", "steps", "width", "eval_every", "early_stop_loss",
                                 "n_test", "fresh_samples", "cov_c", "cov_clip"});
    const std::string loss = detail::json_field<std::string>(tj, "loss", "square");
    if (loss == "square")
      cfg.train.loss = LossKind::SQUARE;
    else if (loss == "covariance")
      cfg.train.loss = LossKind::COVARIANCE;
    else if (loss == "hinge")
      cfg.train.loss = LossKind::HINGE;
    else
      fail(ErrorCode::config, "train.loss must be square, covariance, or hinge: got '" + loss + "'");
    cfg.train.lr = detail::json_field(tj, "lr", cfg.train.lr);
    cfg.train.batch = detail::json_field(tj, "batch", cfg.train.batch);
    cfg.train.steps = detail::json_field(tj, "steps", cfg.train.steps);
    cfg.train.width = detail::json_field(tj, "width", cfg.train.width);
    cfg.train.eval_every = detail::json_field(tj, "eval_every", cfg.train.eval_every);
    cfg.train.early_stop_loss = detail::json_field(tj, "early_stop_loss", cfg.train.early_stop_loss);
    cfg.train.n_test = detail::json_field(tj, "n_test", cfg.train.n_test);
    cfg.train.fresh_samples = detail::json_field(tj, "fresh_samples", cfg.train.fresh_samples);
    cfg.train.cov_c = detail::json_field(tj, "cov_c", cfg.train.cov_c);
    cfg.train.cov_clip = detail::json_field(tj, "cov_clip", cfg.train.cov_clip);
  }
  cfg.trials = detail::json_field(j, "trials", cfg.trials);
  cfg.master_seed = detail::json_field(j, "master_seed", cfg.master_seed);
  cfg.out_dir = detail::json_field<std::string>(j, "out_dir", cfg.out_dir);
  cfg.sample_budget = detail::json_field(j, "sample_budget", cfg.sample_budget);
  cfg.gates = detail::json_field(j, "gates", cfg.gates);
  cfg.codec_w = detail::json_field(j, "codec_w", cfg.codec_w);
  cfg.sweep_d = detail::json_field(j, "sweep_d", cfg.sweep_d);
  cfg.threshold_margin = detail::json_field(j, "threshold_margin", cfg.threshold_margin);
  cfg.delta = detail::json_field(j, "delta", cfg.delta);
  cfg.coupon_c = detail::json_field(j, "coupon_c", cfg.coupon_c);

  validate_experiment_config(cfg);
  return cfg;
}

[[nodiscard]] inline ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

/// Canonical snapshot: every field, fixed key order, so two runs of the same
/// config produce byte-identical config.json files.
[[nodiscard]] inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema_version"] = cfg.schema_version;
  j["kind"] = std::string(kind_name(cfg.kind));
  j["d"] = cfg.d;
  j["k"] = cfg.k;
  j["etas"] = cfg.etas;
  j["distribution"] = {{"name", cfg.distribution.name}, {"mu", cfg.distribution.mu}};
  const char* loss = cfg.train.loss == LossKind::SQUARE       ? "square"
                     : cfg.train.loss == LossKind::COVARIANCE ? "covariance"
                                                              : "hinge";
  j["train"] = {{"loss", loss},
                {"lr", cfg.train.lr},
                {"batch", cfg.train.batch},
                {"steps", cfg.train.steps},
                {"width", cfg.train.width},
                {"eval_every", cfg.train.eval_every},
                {"early_stop_loss", cfg.train.early_stop_loss},
                {"n_test", cfg.train.n_test},
                {"fresh_samples", cfg.train.fresh_samples},
                {"cov_c", cfg.train.cov_c},
                {"cov_clip", cfg.train.cov_clip}};
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["out_dir"] = cfg.out_dir;
  j["sample_budget"] = cfg.sample_budget;
  j["gates"] = cfg.gates;
  j["codec_w"] = cfg.codec_w;
  j["sweep_d"] = cfg.sweep_d;
  j["threshold_margin"] = cfg.threshold_margin;
  j["delta"] = cfg.delta;
  j["coupon_c"] = cfg.coupon_c;
  return j;
}

}  // namespace pdslab
